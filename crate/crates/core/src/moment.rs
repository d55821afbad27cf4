//! The quadratic lift `σ(X)(x) = ½ ω(ρ′(X)x, x)` of a unitary representation,
//! the moment map `μ(x)(X) = σ(X)(x)`, and numerical checks of their
//! properties: `grad σ(X) = ρ′(X)`, the bracket relation, the derivative of
//! `μ` with its image and kernel, equivariance, the Poisson-morphism
//! property, the Hamiltonian flow, and the image of the unit sphere.
//!
//! `σ(X)` is the unique primitive of the closed 1-form `ω(ρ′(X)·, ·)` that
//! vanishes at the origin; on a vector space there is no cohomological
//! obstruction, so it needs no type beyond [`QuadraticObservable`].

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lie::{bracket, coadjoint, lie_poisson_bracket, AlgebraElement, DualObservable, DualVector};
use crate::linalg::{hermitian_eigenvalues, CMatrix, RMatrix, RVector, RankSplit, C64};
use crate::ode::{self, Tolerances};
use crate::rep::UnitaryRep;
use crate::report::{num, num_array, CheckReport};
use crate::sampling::{random_unit_state, Sampler};
use crate::symplectic::{omega, Observable, QuadraticObservable, StateVector};

/// Tolerance for pairings in the image and kernel annihilator checks.
pub const ANNIHILATOR_TOL: f64 = 1e-9;

/// Local tolerance for the Hamiltonian flow integrator.
pub const FLOW_LOCAL_TOL: f64 = 1e-10;

fn ensure_compatible(rep: &UnitaryRep, x: &StateVector) -> Result<()> {
    rep.space().ensure(x)
}

/// `σ(X)(x) = ½ ω(ρ′(X)x, x)`.
pub fn sigma(rep: &UnitaryRep, x_alg: &AlgebraElement, x: &StateVector) -> Result<f64> {
    ensure_compatible(rep, x)?;
    let a = rep.rho_prime(x_alg)?;
    Ok(0.5 * omega(&x.apply(&a)?, x)?)
}

/// `σ(X)` as a quadratic observable with operator `ρ′(X)`.
pub fn sigma_observable(rep: &UnitaryRep, x_alg: &AlgebraElement) -> Result<QuadraticObservable> {
    QuadraticObservable::new(rep.rho_prime(x_alg)?)
}

/// `μ(x)`, with coordinates `½ ω(ρ′(X_i)x, x)`.
pub fn moment(rep: &UnitaryRep, x: &StateVector) -> Result<DualVector> {
    ensure_compatible(rep, x)?;
    let coords = rep
        .generators()
        .iter()
        .map(|g| Ok(0.5 * omega(&x.apply(g)?, x)?))
        .collect::<Result<Vec<f64>>>()?;
    rep.algebra().dual(coords)
}

/// Worst-case `|grad σ(X)(x) − ρ′(X)x|` over `points`, through the
/// exact quadratic gradient and through central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradSigmaDefect {
    pub exact: f64,
    pub finite_difference: f64,
}

pub fn grad_sigma_check(rep: &UnitaryRep, x_alg: &AlgebraElement, points: &[StateVector]) -> Result<GradSigmaDefect> {
    let a = rep.rho_prime(x_alg)?;
    let f = Observable::from(sigma_observable(rep, x_alg)?);
    let mut out = GradSigmaDefect {
        exact: 0.0,
        finite_difference: 0.0,
    };
    for x in points {
        ensure_compatible(rep, x)?;
        let target = x.apply(&a)?;
        let exact = crate::symplectic::grad(&f, x)?;
        let fd = f.grad_fd(x)?;
        out.exact = out.exact.max(exact.sub(&target)?.norm());
        out.finite_difference = out.finite_difference.max(fd.sub(&target)?.norm());
    }
    Ok(out)
}

/// `|{σ(X), σ(Y)}(x) − σ([X,Y])(x)|` at one point.
pub fn sigma_homomorphism_defect_at(
    rep: &UnitaryRep,
    x_alg: &AlgebraElement,
    y_alg: &AlgebraElement,
    x: &StateVector,
) -> Result<f64> {
    ensure_compatible(rep, x)?;
    let fx = Observable::from(sigma_observable(rep, x_alg)?);
    let fy = Observable::from(sigma_observable(rep, y_alg)?);
    let lhs = crate::symplectic::poisson(&fx, &fy, x)?;
    let rhs = sigma(rep, &bracket(x_alg, y_alg)?, x)?;
    Ok((lhs - rhs).abs())
}

/// Max over `points` of `|{σ(X), σ(Y)}(x) − σ([X,Y])(x)| / (1 + |x|²)`.
pub fn sigma_homomorphism_defect(
    rep: &UnitaryRep,
    x_alg: &AlgebraElement,
    y_alg: &AlgebraElement,
    points: &[StateVector],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in points {
        let d = sigma_homomorphism_defect_at(rep, x_alg, y_alg, x)?;
        worst = worst.max(d / (1.0 + x.norm_squared()));
    }
    Ok(worst)
}

/// `|σ(X)(ρ(g)x) − σ(Ad(g⁻¹)X)(x)|` for `g = exp(param)`.
pub fn sigma_equivariance_defect(
    rep: &UnitaryRep,
    param: &AlgebraElement,
    x_alg: &AlgebraElement,
    x: &StateVector,
) -> Result<f64> {
    let moved = rep.act(param, x)?;
    let lhs = sigma(rep, x_alg, &moved)?;
    let pulled = crate::lie::ad_group_apply(&param.neg(), x_alg)?;
    let rhs = sigma(rep, &pulled, x)?;
    Ok((lhs - rhs).abs())
}

/// Real `2n × 2n` matrix of a complex-linear map in interleaved coordinates.
pub(crate) fn realify(a: &CMatrix) -> RMatrix {
    let n = a.nrows();
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)];
            m[(2 * r, 2 * c)] = z.re;
            m[(2 * r, 2 * c + 1)] = -z.im;
            m[(2 * r + 1, 2 * c)] = z.im;
            m[(2 * r + 1, 2 * c + 1)] = z.re;
        }
    }
    m
}

/// `dμ(x)` as a real `dim 𝔤 × 2n` matrix: row `i` is `y ↦ ω(ρ′(X_i)x, y)`.
pub fn d_moment(rep: &UnitaryRep, x: &StateVector) -> Result<RMatrix> {
    ensure_compatible(rep, x)?;
    let d = rep.algebra().dim();
    let n = rep.dim();
    let mut m = RMatrix::zeros(d, 2 * n);
    for (i, g) in rep.generators().iter().enumerate() {
        let u = x.apply(g)?;
        // ω(u, y) = Σ Im u_k Re y_k − Re u_k Im y_k
        for (k, z) in u.components().iter().enumerate() {
            m[(i, 2 * k)] = z.im;
            m[(i, 2 * k + 1)] = -z.re;
        }
    }
    Ok(m)
}

/// Relative error between `dμ(x)y` and the central difference
/// `(μ(x+hy) − μ(x−hy)) / 2h` with `h = 1e-5·(1 + |x|)`.
pub fn d_moment_fd_error(rep: &UnitaryRep, x: &StateVector, y: &StateVector) -> Result<f64> {
    ensure_compatible(rep, y)?;
    let exact = d_moment(rep, x)? * y.to_real();
    let h = 1e-5 * (1.0 + x.norm());
    let plus = moment(rep, &x.axpy(h, y)?)?;
    let minus = moment(rep, &x.axpy(-h, y)?)?;
    let fd = (plus.coords() - minus.coords()) / (2.0 * h);
    let err = (&fd - &exact).norm();
    let denom = exact.norm();
    Ok(if denom > 0.0 { err / denom } else { err })
}

/// Real `2n × dim 𝔤` matrix of `X ↦ ρ′(X)x`; its columns span the tangent
/// space of the orbit through `x`.
pub fn orbit_tangent_matrix(rep: &UnitaryRep, x: &StateVector) -> Result<RMatrix> {
    ensure_compatible(rep, x)?;
    let d = rep.algebra().dim();
    let mut m = RMatrix::zeros(rep.space().real_dim(), d);
    for (i, g) in rep.generators().iter().enumerate() {
        m.set_column(i, &x.apply(g)?.to_real());
    }
    Ok(m)
}

/// Orthonormal basis (in algebra coordinates) of `𝔤_x = {X : ρ′(X)x = 0}`.
pub fn isotropy_algebra(rep: &UnitaryRep, x: &StateVector) -> Result<Vec<AlgebraElement>> {
    let split = RankSplit::new(&orbit_tangent_matrix(rep, x)?);
    (0..split.kernel.ncols())
        .map(|c| rep.algebra().element(split.kernel.column(c).iter().copied().collect()))
        .collect()
}

/// Image of `dμ(x)` versus the annihilator of `𝔤_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageReport {
    pub dim_algebra: usize,
    pub dim_isotropy: usize,
    pub rank: usize,
    /// Largest `|α(X)|` over an orthonormal image basis and the isotropy basis.
    pub max_pairing: f64,
    pub tolerance: f64,
}

impl ImageReport {
    pub fn rank_matches(&self) -> bool {
        self.rank + self.dim_isotropy == self.dim_algebra
    }

    pub fn pass(&self) -> bool {
        self.rank_matches() && self.max_pairing <= self.tolerance
    }

    pub fn to_check_report(&self) -> CheckReport {
        CheckReport::new("image_annihilator", self.max_pairing, self.tolerance)
            .with("dim_algebra", Value::from(self.dim_algebra))
            .with("dim_isotropy", Value::from(self.dim_isotropy))
            .with("rank", Value::from(self.rank))
            .fail_if(!self.rank_matches())
    }
}

pub fn check_image_annihilator(rep: &UnitaryRep, x: &StateVector) -> Result<ImageReport> {
    let dmu = RankSplit::new(&d_moment(rep, x)?);
    let iso = RankSplit::new(&orbit_tangent_matrix(rep, x)?);
    let pairings = dmu.range.transpose() * &iso.kernel;
    Ok(ImageReport {
        dim_algebra: rep.algebra().dim(),
        dim_isotropy: iso.kernel.ncols(),
        rank: dmu.rank,
        max_pairing: pairings.amax(),
        tolerance: ANNIHILATOR_TOL,
    })
}

/// Kernel of `dμ(x)` versus the `ω`-annihilator of the orbit tangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    pub real_dim: usize,
    pub dim_kernel: usize,
    pub dim_tangent: usize,
    /// Largest `|ω(k, t)|` over orthonormal bases of the kernel and tangent space.
    pub max_pairing: f64,
    pub tolerance: f64,
}

impl KernelReport {
    pub fn dims_match(&self) -> bool {
        self.dim_kernel + self.dim_tangent == self.real_dim
    }

    pub fn pass(&self) -> bool {
        self.dims_match() && self.max_pairing <= self.tolerance
    }

    pub fn to_check_report(&self) -> CheckReport {
        CheckReport::new("kernel_annihilator", self.max_pairing, self.tolerance)
            .with("real_dim", Value::from(self.real_dim))
            .with("dim_kernel", Value::from(self.dim_kernel))
            .with("dim_tangent", Value::from(self.dim_tangent))
            .fail_if(!self.dims_match())
    }
}

pub fn check_kernel_annihilator(rep: &UnitaryRep, x: &StateVector) -> Result<KernelReport> {
    let kernel = RankSplit::new(&d_moment(rep, x)?).kernel;
    let tangent = RankSplit::new(&orbit_tangent_matrix(rep, x)?).range;
    let w = rep.space().omega_matrix();
    let pairings = kernel.transpose() * w * &tangent;
    Ok(KernelReport {
        real_dim: rep.space().real_dim(),
        dim_kernel: kernel.ncols(),
        dim_tangent: tangent.ncols(),
        max_pairing: if pairings.is_empty() { 0.0 } else { pairings.amax() },
        tolerance: ANNIHILATOR_TOL,
    })
}

/// `|Ad′(g)μ(x) − μ(ρ(g)x)|_∞` for `g = exp(param)`. The left side goes
/// through `exp ∘ ad` on the algebra, the right side through `exp ∘ ρ′`.
pub fn check_equivariance(rep: &UnitaryRep, param: &AlgebraElement, x: &StateVector) -> Result<f64> {
    let lhs = coadjoint(param, &moment(rep, x)?)?;
    let rhs = moment(rep, &rep.act(param, x)?)?;
    Ok(lhs.sub(&rhs)?.coords().amax())
}

/// `|{f₁∘μ, f₂∘μ}(x) − {f₁, f₂}(μ(x))|`, with the pulled-back gradients
/// `grad(f∘μ)(x) = ρ′(df(μ(x)))x`.
pub fn check_poisson_morphism(
    rep: &UnitaryRep,
    f1: &DualObservable,
    f2: &DualObservable,
    x: &StateVector,
) -> Result<f64> {
    let lhs = pullback_poisson(rep, f1, f2, x)?;
    let rhs = lie_poisson_bracket(f1, f2, &moment(rep, x)?)?;
    Ok((lhs - rhs).abs())
}

/// `{f₁∘μ, f₂∘μ}(x)` on `H`.
pub fn pullback_poisson(rep: &UnitaryRep, f1: &DualObservable, f2: &DualObservable, x: &StateVector) -> Result<f64> {
    let g1 = pullback_gradient(rep, f1, x)?;
    let g2 = pullback_gradient(rep, f2, x)?;
    omega(&g1, &g2)
}

/// `grad(f∘μ)(x) = ρ′(df(μ(x)))x`.
pub fn pullback_gradient(rep: &UnitaryRep, f: &DualObservable, x: &StateVector) -> Result<StateVector> {
    let alpha = moment(rep, x)?;
    let d = f.gradient(&alpha)?;
    x.apply(&rep.rho_prime(&d)?)
}

/// The flow of `grad σ(X)` from `x0` for time `t`, integrated numerically.
pub fn hamiltonian_flow(rep: &UnitaryRep, x_alg: &AlgebraElement, x0: &StateVector, t: f64) -> Result<StateVector> {
    hamiltonian_flow_with_stats(rep, x_alg, x0, t).map(|(x, _)| x)
}

pub fn hamiltonian_flow_with_stats(
    rep: &UnitaryRep,
    x_alg: &AlgebraElement,
    x0: &StateVector,
    t: f64,
) -> Result<(StateVector, ode::Stats)> {
    ensure_compatible(rep, x0)?;
    let m = realify(&rep.rho_prime(x_alg)?);
    let tol = Tolerances {
        rtol: FLOW_LOCAL_TOL,
        atol: FLOW_LOCAL_TOL,
        ..Default::default()
    };
    let (y, stats) = ode::integrate(|_, y: &RVector| &m * y, 0.0, &x0.to_real(), t, tol).map_err(|e| match e {
        Error::Numeric(msg) => Error::Numeric(format!("Hamiltonian flow: {msg}")),
        other => other,
    })?;
    Ok((StateVector::from_real(rep.space(), &y)?, stats))
}

/// `μ` on `n_samples` Haar-uniform unit vectors. Sample `k` uses its own
/// random stream, so the output is identical for any thread count.
pub fn sphere_image_sample(rep: &UnitaryRep, n_samples: usize, seed: u64) -> Result<Vec<DualVector>> {
    if n_samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let space = rep.space();
    (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut s = Sampler::for_index(seed, k);
            moment(rep, &random_unit_state(space, &mut s))
        })
        .collect()
}

/// Exact support value `sup_{|x|=1} μ(x)(X) = ½ λ_max(−iρ′(X))`.
pub fn support_value(rep: &UnitaryRep, x_alg: &AlgebraElement) -> Result<f64> {
    let h = rep.rho_prime(x_alg)? * C64::new(0.0, -1.0);
    let ev = hermitian_eigenvalues(&h);
    Ok(0.5 * ev.last().copied().unwrap_or(0.0))
}

/// Empirical versus exact support value in one direction.
#[derive(Debug, Clone)]
pub struct SupportReport {
    pub direction: AlgebraElement,
    pub exact: f64,
    pub empirical_max: f64,
}

impl SupportReport {
    /// `empirical_max − exact`; positive values mean a sample left the hull.
    pub fn excess(&self) -> f64 {
        self.empirical_max - self.exact
    }

    pub fn gap(&self) -> f64 {
        self.exact - self.empirical_max
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("direction".into(), num_array(self.direction.coords().iter().copied()));
        m.insert("exact".into(), num(self.exact));
        m.insert("empirical_max".into(), num(self.empirical_max));
        m.insert("gap".into(), num(self.gap()));
        Value::Object(m)
    }
}

/// Support-function comparison of sampled moment values in each direction.
pub fn support_reports(
    rep: &UnitaryRep,
    samples: &[DualVector],
    directions: &[AlgebraElement],
) -> Result<Vec<SupportReport>> {
    directions
        .iter()
        .map(|d| {
            let exact = support_value(rep, d)?;
            let mut best = f64::NEG_INFINITY;
            for s in samples {
                best = best.max(s.pair(d)?);
            }
            Ok(SupportReport {
                direction: d.clone(),
                exact,
                empirical_max: best,
            })
        })
        .collect()
}
