//! Samples the moment image of the unit sphere and compares empirical
//! maxima with the exact support function.

use momentlab::moment::{sphere_image_sample, support_reports};
use momentlab::rep::su2_spin;

fn main() -> momentlab::Result<()> {
    let seed = 7;
    for j in [0.5, 1.0] {
        let rep = su2_spin(j)?;
        let samples = sphere_image_sample(&rep, 20_000, seed)?;
        let max_norm = samples.iter().map(|m| m.norm()).fold(0.0, f64::max);
        println!("spin {j}: max |mu| = {max_norm:.6} over {} samples", samples.len());
        let g = rep.algebra();
        let dirs = [g.basis(0), g.basis(2), g.element(vec![0.6, 0.0, 0.8])?];
        for r in support_reports(&rep, &samples, &dirs)? {
            println!(
                "  direction {:?}: exact {:.6}, empirical {:.6}",
                r.direction.coords().as_slice(),
                r.exact,
                r.empirical_max
            );
        }
    }
    Ok(())
}
