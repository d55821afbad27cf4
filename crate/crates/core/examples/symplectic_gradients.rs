//! Symplectic gradients and Poisson brackets of observables on C^n.

use momentlab::linalg::{CMatrix, C64};
use momentlab::symplectic::{grad, omega, poisson};
use momentlab::{HilbertSpace, Observable};

fn main() -> momentlab::Result<()> {
    let h = HilbertSpace::new(2)?;
    let x = h.state(vec![C64::new(0.6, 0.2), C64::new(-0.1, 0.7)])?;
    let i = C64::new(0.0, 1.0);
    println!("omega(x, ix) = {:.12} (= -|x|^2 = {:.12})", omega(&x, &x.scale_complex(i))?, -x.norm_squared());

    // half the squared norm generates the phase rotation
    let a = CMatrix::identity(2, 2) * i;
    let f = Observable::quadratic(a.clone())?;
    let exact = grad(&f, &x)?;
    let numeric = f.grad_fd(&x)?;
    println!("grad f(x) = {:?}", exact.components().as_slice());
    println!("finite-difference gap = {:.3e}", exact.sub(&numeric)?.norm());

    // a non-quadratic observable only exposes values
    let quartic = Observable::from_fn(h, |y| y.norm_squared().powi(2));
    println!("{{f, |x|^4}}(x) = {:.3e} (phase invariant, so zero)", poisson(&f, &quartic, &x)?);

    let b = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]);
    let g = Observable::quadratic(b)?;
    println!("{{f, g}}(x) = {:.3e}", poisson(&f, &g, &x)?);
    Ok(())
}
