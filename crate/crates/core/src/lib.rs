//! Moment maps of finite-dimensional unitary representations.
//!
//! A unitary representation `ρ` of a Lie group `G` on `H = ℂⁿ` preserves the
//! symplectic form `ω = Im⟨·,·⟩`. Each infinitesimal generator `ρ′(X)` is
//! then the Hamiltonian vector field of the quadratic function
//! `σ(X)(x) = ½ ω(ρ′(X)x, x)`, and collecting these gives the moment map
//! `μ: H → 𝔤*`, `μ(x)(X) = σ(X)(x)`.
//!
//! The crate builds representations ([`rep`]), evaluates `σ` and `μ`
//! ([`moment`]), and checks their structural properties numerically against
//! independent oracles: finite differences, SVD ranks, eigenvalues and an
//! adaptive ODE integrator. [`suite`] bundles the checks into reports and
//! [`cli`] exposes them on the command line.
//!
//! ```
//! use momentlab::{moment, rep};
//!
//! let spin_half = rep::su2_spin(0.5)?;
//! let e1 = spin_half.space().basis(0);
//! let mu = moment::moment(&spin_half, &e1)?;
//! assert_eq!(mu.coords().as_slice(), &[0.0, 0.0, -0.25]);
//! # Ok::<(), momentlab::Error>(())
//! ```

pub mod builtin;
pub mod cli;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod moment;
pub mod ode;
pub mod rep;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod symplectic;

pub use error::{Error, Result};
pub use lie::{AlgebraElement, DualObservable, DualVector, LieAlgebra};
pub use rep::UnitaryRep;
pub use symplectic::{HilbertSpace, Observable, StateVector};
