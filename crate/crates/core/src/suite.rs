//! Sampled check suites over a representation, producing [`CheckReport`]s.
//!
//! Every check draws its inputs from its own seeded stream, so adding,
//! removing or reordering checks never changes another check's inputs.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lie::{bracket, AlgebraElement, DualObservable};
use crate::linalg::{RMatrix, RVector};
use crate::moment::{
    check_equivariance, check_image_annihilator, check_kernel_annihilator, check_poisson_morphism,
    d_moment_fd_error, grad_sigma_check, hamiltonian_flow, sigma, sigma_homomorphism_defect_at,
    sphere_image_sample, support_reports,
};
use crate::rep::UnitaryRep;
use crate::report::{num, num_array, CheckReport, Worst};
use crate::sampling::{random_element, random_state, Sampler};
use crate::symplectic::StateVector;

pub const SKEW_HERMITIAN: &str = "skew_hermitian";
pub const REP_HOMOMORPHISM: &str = "homomorphism";
pub const GRAD_SIGMA_EXACT: &str = "grad_sigma_exact";
pub const GRAD_SIGMA_FD: &str = "grad_sigma_fd";
pub const SIGMA_HOMOMORPHISM: &str = "sigma_homomorphism";
pub const D_MOMENT_FD: &str = "d_moment_fd";
pub const IMAGE_ANNIHILATOR: &str = "image_annihilator";
pub const KERNEL_ANNIHILATOR: &str = "kernel_annihilator";
pub const EQUIVARIANCE: &str = "equivariance";
pub const POISSON_LINEAR: &str = "poisson_morphism_linear";
pub const POISSON_QUADRATIC: &str = "poisson_morphism_quadratic";
pub const FLOW: &str = "flow";
pub const FLOW_ENERGY: &str = "flow_energy";
pub const SPHERE_CONTAINMENT: &str = "sphere_containment";
pub const SPHERE_SUPPORT: &str = "sphere_support";

/// Default tolerance for each named check.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        (SKEW_HERMITIAN, crate::rep::SKEW_TOL),
        (REP_HOMOMORPHISM, crate::rep::HOMOMORPHISM_TOL),
        (GRAD_SIGMA_EXACT, 1e-10),
        (GRAD_SIGMA_FD, 1e-6),
        (SIGMA_HOMOMORPHISM, 1e-9),
        (D_MOMENT_FD, 1e-6),
        (IMAGE_ANNIHILATOR, 1e-9),
        (KERNEL_ANNIHILATOR, 1e-9),
        (EQUIVARIANCE, 1e-9),
        (POISSON_LINEAR, 1e-9),
        (POISSON_QUADRATIC, 1e-6),
        (FLOW, 1e-8),
        (FLOW_ENERGY, 1e-8),
        (SPHERE_CONTAINMENT, 1e-12),
        (SPHERE_SUPPORT, 5e-3),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Number of random trials per check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleCounts {
    pub gradient: usize,
    pub homomorphism: usize,
    pub d_moment: usize,
    pub annihilator: usize,
    pub equivariance: usize,
    pub poisson: usize,
    pub flow: usize,
    pub sphere: usize,
    pub directions: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self {
            gradient: 100,
            homomorphism: 100,
            d_moment: 100,
            annihilator: 50,
            equivariance: 1000,
            poisson: 100,
            flow: 20,
            sphere: 100_000,
            directions: 50,
        }
    }
}

impl SampleCounts {
    /// The same count for every sampled check; sphere and direction counts keep their defaults.
    pub fn uniform(n: usize) -> Self {
        Self {
            gradient: n,
            homomorphism: n,
            d_moment: n,
            annihilator: n,
            equivariance: n,
            poisson: n,
            flow: n,
            ..Self::default()
        }
    }
}

/// Times at which the integrated flow is compared with the group action.
pub const FLOW_TIMES: [f64; 2] = [0.1, 1.0];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: SampleCounts,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: SampleCounts::default(),
            tolerances: default_tolerances(),
        }
    }
}

/// Default seed for all sampled checks.
pub const DEFAULT_SEED: u64 = 0x4d4f_4d45_4e54;

impl SuiteConfig {
    pub fn tol(&self, check: &str) -> f64 {
        self.tolerances
            .get(check)
            .copied()
            .or_else(|| default_tolerances().get(check).copied())
            .expect("every check has a default tolerance")
    }

    /// Overrides one tolerance; unknown names are rejected.
    pub fn set_tol(&mut self, check: &str, value: f64) -> Result<()> {
        if !default_tolerances().contains_key(check) {
            return Err(Error::Parse(format!("unknown check {check:?} in tolerance override")));
        }
        if !(value >= 0.0) {
            return Err(Error::Parse(format!("tolerance for {check} must be non-negative")));
        }
        self.tolerances.insert(check.to_string(), value);
        Ok(())
    }

    fn sampler(&self, stream: u64) -> Sampler {
        Sampler::for_index(self.seed, stream)
    }
}

pub fn state_json(x: &StateVector) -> Value {
    serde_json::json!({
        "re": num_array(x.components().iter().map(|z| z.re)),
        "im": num_array(x.components().iter().map(|z| z.im)),
    })
}

pub fn element_json(x: &AlgebraElement) -> Value {
    num_array(x.coords().iter().copied())
}

fn witness(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `grad σ(X) = ρ′(X)` through the exact and the finite-difference gradient.
pub fn gradient_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut s = cfg.sampler(1);
    let mut exact = Worst::default();
    let mut fd = Worst::default();
    for _ in 0..cfg.samples.gradient {
        let xa = random_element(rep.algebra(), &mut s);
        let x = random_state(rep.space(), &mut s);
        let d = grad_sigma_check(rep, &xa, std::slice::from_ref(&x))?;
        let w = || witness(vec![("X", element_json(&xa)), ("x", state_json(&x))]);
        exact.offer(d.exact, w);
        fd.offer(d.finite_difference, w);
    }
    Ok(vec![
        exact.into_report(GRAD_SIGMA_EXACT, cfg.tol(GRAD_SIGMA_EXACT)),
        fd.into_report(GRAD_SIGMA_FD, cfg.tol(GRAD_SIGMA_FD)),
    ])
}

/// `{σ(X), σ(Y)} = σ([X,Y])`, defect scaled by `1 + |x|²`.
pub fn homomorphism_check(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut s = cfg.sampler(2);
    let mut worst = Worst::default();
    for _ in 0..cfg.samples.homomorphism {
        let xa = random_element(rep.algebra(), &mut s);
        let ya = random_element(rep.algebra(), &mut s);
        let x = random_state(rep.space(), &mut s);
        let d = sigma_homomorphism_defect_at(rep, &xa, &ya, &x)? / (1.0 + x.norm_squared());
        worst.offer(d, || {
            witness(vec![
                ("X", element_json(&xa)),
                ("Y", element_json(&ya)),
                ("x", state_json(&x)),
            ])
        });
    }
    Ok(worst.into_report(SIGMA_HOMOMORPHISM, cfg.tol(SIGMA_HOMOMORPHISM)))
}

/// Closed-form `dμ(x)y` against central differences, relative error.
pub fn d_moment_check(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut s = cfg.sampler(3);
    let mut worst = Worst::default();
    for _ in 0..cfg.samples.d_moment {
        let x = random_state(rep.space(), &mut s);
        let y = random_state(rep.space(), &mut s);
        let e = d_moment_fd_error(rep, &x, &y)?;
        worst.offer(e, || witness(vec![("x", state_json(&x)), ("y", state_json(&y))]));
    }
    Ok(worst.into_report(D_MOMENT_FD, cfg.tol(D_MOMENT_FD)))
}

/// Random points plus the origin and the first basis vector (the highest
/// weight vector for the spin representations).
pub fn annihilator_points(rep: &UnitaryRep, cfg: &SuiteConfig) -> Vec<StateVector> {
    let mut s = cfg.sampler(4);
    let mut pts = vec![rep.space().zero(), rep.space().basis(0)];
    pts.extend((0..cfg.samples.annihilator).map(|_| random_state(rep.space(), &mut s)));
    pts
}

/// Image of `dμ(x)` is the annihilator of `𝔤_x`, and `ker dμ(x)` is the
/// `ω`-annihilator of the orbit tangent space, at every point of the plan.
pub fn annihilator_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let pts = annihilator_points(rep, cfg);
    let mut image = Worst::default();
    let mut image_rank_failures = 0usize;
    let mut kernel = Worst::default();
    let mut kernel_dim_failures = 0usize;
    for x in &pts {
        let a = check_image_annihilator(rep, x)?;
        if !a.rank_matches() {
            image_rank_failures += 1;
        }
        // rank failures dominate the witness
        let key = if a.rank_matches() { a.max_pairing } else { f64::INFINITY };
        image.offer(key, || {
            witness(vec![
                ("x", state_json(x)),
                ("rank", Value::from(a.rank)),
                ("dim_isotropy", Value::from(a.dim_isotropy)),
                ("dim_algebra", Value::from(a.dim_algebra)),
                ("max_pairing", num(a.max_pairing)),
            ])
        });
        let k = check_kernel_annihilator(rep, x)?;
        if !k.dims_match() {
            kernel_dim_failures += 1;
        }
        let key = if k.dims_match() { k.max_pairing } else { f64::INFINITY };
        kernel.offer(key, || {
            witness(vec![
                ("x", state_json(x)),
                ("dim_kernel", Value::from(k.dim_kernel)),
                ("dim_tangent", Value::from(k.dim_tangent)),
                ("real_dim", Value::from(k.real_dim)),
                ("max_pairing", num(k.max_pairing)),
            ])
        });
    }
    let points = Value::from(pts.len());
    Ok(vec![
        image
            .into_report(IMAGE_ANNIHILATOR, cfg.tol(IMAGE_ANNIHILATOR))
            .with("points", points.clone())
            .with("rank_failures", Value::from(image_rank_failures)),
        kernel
            .into_report(KERNEL_ANNIHILATOR, cfg.tol(KERNEL_ANNIHILATOR))
            .with("points", points)
            .with("dimension_failures", Value::from(kernel_dim_failures)),
    ])
}

/// `Ad′(g)μ(x) = μ(ρ(g)x)`, defect scaled by `1 + |x|²`.
pub fn equivariance_check(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut s = cfg.sampler(5);
    let mut worst = Worst::default();
    for _ in 0..cfg.samples.equivariance {
        let g = random_element(rep.algebra(), &mut s);
        let x = random_state(rep.space(), &mut s);
        let d = check_equivariance(rep, &g, &x)? / (1.0 + x.norm_squared());
        worst.offer(d, || witness(vec![("g_param", element_json(&g)), ("x", state_json(&x))]));
    }
    Ok(worst.into_report(EQUIVARIANCE, cfg.tol(EQUIVARIANCE)))
}

/// Random quadratic polynomial on `𝔤*` exposed only through its values, so
/// its gradient is taken by finite differences.
pub fn random_quadratic_dual(rep: &UnitaryRep, s: &mut Sampler) -> (DualObservable, Value) {
    let n = rep.algebra().dim();
    let m = RMatrix::from_fn(n, n, |_, _| s.normal());
    let q = (&m + m.transpose()) * 0.5;
    let b = RVector::from_fn(n, |_, _| s.normal());
    let c = s.normal();
    let desc = serde_json::json!({
        "q": q.row_iter().map(|r| num_array(r.iter().copied())).collect::<Vec<_>>(),
        "b": num_array(b.iter().copied()),
        "c": num(c),
    });
    let f = DualObservable::from_fn(rep.algebra(), move |a| {
        0.5 * a.coords().dot(&(&q * a.coords())) + b.dot(a.coords()) + c
    });
    (f, desc)
}

/// `μ` is a Poisson map: linear test functions (exact gradients) and random
/// quadratic ones (finite-difference gradients).
pub fn poisson_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut s = cfg.sampler(6);
    let mut linear = Worst::default();
    let mut quadratic = Worst::default();
    for _ in 0..cfg.samples.poisson {
        let xa = random_element(rep.algebra(), &mut s);
        let ya = random_element(rep.algebra(), &mut s);
        let x = random_state(rep.space(), &mut s);
        let d = check_poisson_morphism(rep, &DualObservable::linear(&xa), &DualObservable::linear(&ya), &x)?;
        // both sides also equal σ([X,Y])(x)
        let target = sigma(rep, &bracket(&xa, &ya)?, &x)?;
        let lhs = crate::moment::pullback_poisson(rep, &DualObservable::linear(&xa), &DualObservable::linear(&ya), &x)?;
        let d = d.max((lhs - target).abs());
        linear.offer(d, || {
            witness(vec![
                ("X", element_json(&xa)),
                ("Y", element_json(&ya)),
                ("x", state_json(&x)),
            ])
        });

        let (f1, d1) = random_quadratic_dual(rep, &mut s);
        let (f2, d2) = random_quadratic_dual(rep, &mut s);
        let x = random_state(rep.space(), &mut s);
        let d = check_poisson_morphism(rep, &f1, &f2, &x)?;
        quadratic.offer(d, || witness(vec![("f1", d1.clone()), ("f2", d2.clone()), ("x", state_json(&x))]));
    }
    Ok(vec![
        linear.into_report(POISSON_LINEAR, cfg.tol(POISSON_LINEAR)),
        quadratic.into_report(POISSON_QUADRATIC, cfg.tol(POISSON_QUADRATIC)),
    ])
}

/// Integrated flow of `grad σ(X)` against `ρ(exp tX)x₀`, and conservation of
/// `μ(·)(X)` along it.
pub fn flow_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut s = cfg.sampler(7);
    let mut traj = Worst::default();
    let mut energy = Worst::default();
    for _ in 0..cfg.samples.flow {
        let xa = random_element(rep.algebra(), &mut s);
        let x0 = random_state(rep.space(), &mut s);
        let e0 = sigma(rep, &xa, &x0)?;
        for t in FLOW_TIMES {
            let flowed = hamiltonian_flow(rep, &xa, &x0, t)?;
            let exact = rep.act(&xa.scale(t), &x0)?;
            let d = flowed.sub(&exact)?.norm();
            let w = || {
                witness(vec![
                    ("X", element_json(&xa)),
                    ("x0", state_json(&x0)),
                    ("t", num(t)),
                ])
            };
            traj.offer(d, w);
            energy.offer((sigma(rep, &xa, &flowed)? - e0).abs(), w);
        }
    }
    Ok(vec![
        traj.into_report(FLOW, cfg.tol(FLOW)),
        energy.into_report(FLOW_ENERGY, cfg.tol(FLOW_ENERGY)),
    ])
}

/// Unit directions in the algebra for the support-function comparison.
pub fn sample_directions(rep: &UnitaryRep, count: usize, seed: u64) -> Vec<AlgebraElement> {
    let mut s = Sampler::for_index(seed, 8);
    (0..count)
        .map(|_| loop {
            let d = random_element(rep.algebra(), &mut s);
            let n = d.norm();
            if n > 1e-12 {
                break d.scale(1.0 / n);
            }
        })
        .collect()
}

/// Sphere-image experiment: no sample exceeds the exact support value in any
/// direction, and the empirical maximum comes close to it. The support
/// values are reported per direction; no particular coadjoint orbit is
/// assumed.
pub fn sphere_checks(
    rep: &UnitaryRep,
    cfg: &SuiteConfig,
    directions: Option<Vec<AlgebraElement>>,
) -> Result<Vec<CheckReport>> {
    let samples = sphere_image_sample(rep, cfg.samples.sphere, cfg.seed)?;
    let dirs = directions.unwrap_or_else(|| sample_directions(rep, cfg.samples.directions, cfg.seed));
    let reports = support_reports(rep, &samples, &dirs)?;
    let mut excess = Worst::default();
    let mut gap = Worst::default();
    for r in &reports {
        excess.offer(r.excess().max(0.0), || witness(vec![("support", r.to_json())]));
        gap.offer(r.gap().max(0.0), || witness(vec![("support", r.to_json())]));
    }
    let all = Value::Array(reports.iter().map(|r| r.to_json()).collect());
    Ok(vec![
        excess
            .into_report(SPHERE_CONTAINMENT, cfg.tol(SPHERE_CONTAINMENT))
            .with("samples", Value::from(samples.len())),
        gap.into_report(SPHERE_SUPPORT, cfg.tol(SPHERE_SUPPORT))
            .with("samples", Value::from(samples.len()))
            .with("directions", all),
    ])
}

/// Structural checks on the generators, held to the configured tolerances.
pub fn rep_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Vec<CheckReport> {
    rep.verify()
        .to_check_reports()
        .into_iter()
        .map(|mut r| {
            r.tolerance = cfg.tol(&r.check);
            r.pass = r.defect <= r.tolerance;
            r
        })
        .collect()
}

/// Every check except the sphere experiment.
pub fn run_checks(rep: &UnitaryRep, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = gradient_checks(rep, cfg)?;
    out.push(homomorphism_check(rep, cfg)?);
    out.push(d_moment_check(rep, cfg)?);
    out.extend(annihilator_checks(rep, cfg)?);
    out.push(equivariance_check(rep, cfg)?);
    out.extend(poisson_checks(rep, cfg)?);
    out.extend(flow_checks(rep, cfg)?);
    Ok(out)
}
