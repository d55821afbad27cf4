//! Integrates the Hamiltonian flow of a moment component and compares it
//! with the group action.

use momentlab::moment::{hamiltonian_flow_with_stats, moment, sigma};
use momentlab::rep::su2_spin;
use momentlab::linalg::C64;

fn main() -> momentlab::Result<()> {
    let rep = su2_spin(1.0)?;
    let x = rep.algebra().element(vec![0.4, -1.1, 0.7])?;
    let x0 = rep.space().state(vec![C64::new(0.5, 0.1), C64::new(-0.3, 0.8), C64::new(0.2, -0.4)])?;
    let e0 = sigma(&rep, &x, &x0)?;
    println!("t, |flow - rho(exp tX)x0|, energy drift, steps");
    for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let (xt, stats) = hamiltonian_flow_with_stats(&rep, &x, &x0, t)?;
        let exact = rep.act(&x.scale(t), &x0)?;
        println!(
            "{t:>4}, {:.3e}, {:.3e}, {}",
            xt.sub(&exact)?.norm(),
            (sigma(&rep, &x, &xt)? - e0).abs(),
            stats.accepted
        );
    }
    // the moment point moves along its coadjoint orbit
    let mu0 = moment(&rep, &x0)?;
    let mu1 = moment(&rep, &rep.act(&x, &x0)?)?;
    println!("|mu(x0)| = {:.12}, |mu(x1)| = {:.12}", mu0.norm(), mu1.norm());
    Ok(())
}
