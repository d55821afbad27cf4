//! Structure constants of su(2), the adjoint and coadjoint actions, and the
//! Lie–Poisson bracket on the dual.

use std::f64::consts::FRAC_PI_2;

use momentlab::lie::{ad, ad_group_apply, bracket, coadjoint, lie_poisson_bracket};
use momentlab::{DualObservable, LieAlgebra};

fn main() -> momentlab::Result<()> {
    let su2 = LieAlgebra::su2();
    let (x1, x2, x3) = (su2.basis(0), su2.basis(1), su2.basis(2));
    println!("[X1, X2] = {:?}", bracket(&x1, &x2)?.coords().as_slice());
    println!("ad(X3) =\n{}", ad(&x3));

    // a quarter turn about X3 carries X1 to X2
    let turned = ad_group_apply(&x3.scale(FRAC_PI_2), &x1)?;
    println!("Ad(exp(pi/2 X3)) X1 = {:?}", turned.coords().as_slice());

    let alpha = su2.dual(vec![0.3, -0.4, 1.2])?;
    let moved = coadjoint(&x1.add(&x2)?.scale(0.7), &alpha)?;
    println!("|alpha| = {:.12}, |Ad*(g) alpha| = {:.12}", alpha.norm(), moved.norm());

    // {X1, X2} on the dual is the linear function X3
    let f1 = DualObservable::linear(&x1);
    let f2 = DualObservable::linear(&x2);
    println!(
        "{{X1, X2}}(alpha) = {:.12}, alpha(X3) = {:.12}",
        lie_poisson_bracket(&f1, &f2, &alpha)?,
        alpha.pair(&x3)?
    );

    let json = serde_json::to_string(&su2.to_json())?;
    let back: LieAlgebra = LieAlgebra::try_from(serde_json::from_str::<momentlab::lie::AlgebraJson>(&json)?)?;
    println!("round trip keeps structure constants: {}", back.same_as(&su2));
    Ok(())
}
