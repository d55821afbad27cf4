//! Spin representations of su(2), direct sums and tensor products.

use momentlab::linalg::{hermitian_eigenvalues, C64};
use momentlab::rep::{direct_sum, su2_spin, tensor};

fn main() -> momentlab::Result<()> {
    for j in [0.5, 1.0, 1.5, 2.0] {
        let r = su2_spin(j)?;
        let report = r.verify();
        let h = r.generators()[2].clone() * C64::new(0.0, 1.0);
        println!(
            "spin {j}: dim {}, weights {:?}, skew defect {:.1e}, bracket defect {:.1e}",
            r.dim(),
            hermitian_eigenvalues(&h),
            report.max_skew_defect(),
            report.max_homomorphism_defect()
        );
    }

    let half = su2_spin(0.5)?;
    let pair = tensor(&half, &half)?;
    let h = pair.generators()[2].clone() * C64::new(0.0, 1.0);
    println!("1/2 x 1/2 weights {:?} (spin 1 plus spin 0)", hermitian_eigenvalues(&h));

    let sum = direct_sum(&half, &su2_spin(1.0)?)?;
    println!("1/2 + 1 acts on C^{} and verifies: {}", sum.dim(), sum.verify().pass());

    // a full turn is -1 on half-integer spin
    let turn = half.rho(&half.algebra().basis(2).scale(2.0 * std::f64::consts::PI))?;
    println!("rho(exp 2pi X3) on spin 1/2 =\n{turn:.6}");
    Ok(())
}
