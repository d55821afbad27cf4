//! Finite-dimensional real Lie algebras given by structure constants, their
//! duals, the adjoint and coadjoint actions, and the Lie–Poisson bracket.
//!
//! Group elements never appear directly: a group element is always the image
//! `exp(p)` of an algebra element `p`, called its parameter.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm_real, RMatrix, RVector};

/// Tolerance for the antisymmetry and Jacobi checks, relative to `max|c|²`.
const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, PartialEq)]
struct AlgebraData {
    dim: usize,
    labels: Vec<String>,
    // c[(i * dim + j) * dim + k], [X_i, X_j] = sum_k c_ijk X_k
    c: Vec<f64>,
}

/// A real Lie algebra with basis `X_0 .. X_{n-1}` and structure constants
/// `[X_i, X_j] = Σ_k c[i][j][k] X_k`.
///
/// Cheap to clone; clones share the same constants.
#[derive(Clone, PartialEq)]
pub struct LieAlgebra(Arc<AlgebraData>);

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.0.dim)
            .field("labels", &self.0.labels)
            .finish()
    }
}

impl LieAlgebra {
    /// Builds an algebra from `c[i][j][k]`, rejecting constants that are not
    /// antisymmetric in `(i, j)` or violate the Jacobi identity.
    pub fn new(labels: Vec<String>, c: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if c.len() != dim || c.iter().any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim)) {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must have shape {dim}x{dim}x{dim}"
            )));
        }
        let flat: Vec<f64> = c.into_iter().flatten().flatten().collect();
        Self::from_flat(labels, flat)
    }

    fn from_flat(labels: Vec<String>, c: Vec<f64>) -> Result<Self> {
        let dim = labels.len();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidAlgebra("non-finite structure constant".into()));
        }
        let algebra = LieAlgebra(Arc::new(AlgebraData { dim, labels, c }));
        algebra.validate()?;
        Ok(algebra)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let scale = self.0.c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = STRUCTURE_TOL * scale * scale;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let d = self.c(i, j, k) + self.c(j, i, k);
                    if d.abs() > tol {
                        return Err(Error::InvalidAlgebra(format!(
                            "antisymmetry fails at c[{i}][{j}][{k}] (defect {d:e})"
                        )));
                    }
                }
            }
        }
        let defect = self.jacobi_defect();
        if defect > tol {
            return Err(Error::InvalidAlgebra(format!(
                "Jacobi identity fails (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// Largest violation of the Jacobi identity over all basis quadruples.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| {
                                self.c(i, j, m) * self.c(m, k, l)
                                    + self.c(j, k, m) * self.c(m, i, l)
                                    + self.c(k, i, m) * self.c(m, j, l)
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `su(2)` with `[X_1, X_2] = X_3` cyclically; `X_k` is `-(i/2)σ_k` in
    /// the defining representation.
    pub fn su2() -> Self {
        let mut c = vec![0.0; 27];
        let idx = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[idx(i, j, k)] = 1.0;
            c[idx(j, i, k)] = -1.0;
        }
        Self::from_flat(vec!["X1".into(), "X2".into(), "X3".into()], c)
            .expect("su(2) constants are valid")
    }

    /// The abelian algebra of dimension `n` (Lie algebra of the `n`-torus).
    pub fn abelian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("abelian algebra needs positive dimension".into()));
        }
        let labels = (1..=n).map(|k| format!("T{k}")).collect();
        Self::from_flat(labels, vec![0.0; n * n * n])
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Structure constant `c[i][j][k]`.
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.0.dim;
        self.0.c[(i * n + j) * n + k]
    }

    pub fn same_as(&self, other: &LieAlgebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    pub(crate) fn ensure_same(&self, other: &LieAlgebra) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::Domain("operands belong to different Lie algebras".into()))
        }
    }

    pub fn element(&self, coords: Vec<f64>) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(Error::Domain(format!(
                "algebra element needs {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        Ok(AlgebraElement {
            algebra: self.clone(),
            coords: RVector::from_vec(coords),
        })
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            coords: RVector::zeros(self.dim()),
        }
    }

    /// The basis element `X_k` (0-based).
    pub fn basis(&self, k: usize) -> AlgebraElement {
        let mut coords = RVector::zeros(self.dim());
        coords[k] = 1.0;
        AlgebraElement {
            algebra: self.clone(),
            coords,
        }
    }

    pub fn dual(&self, coords: Vec<f64>) -> Result<DualVector> {
        if coords.len() != self.dim() {
            return Err(Error::Domain(format!(
                "dual vector needs {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        Ok(DualVector {
            algebra: self.clone(),
            coords: RVector::from_vec(coords),
        })
    }

    pub fn dual_zero(&self) -> DualVector {
        DualVector {
            algebra: self.clone(),
            coords: RVector::zeros(self.dim()),
        }
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim();
        let c = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.c(i, j, k)).collect()).collect())
            .collect();
        AlgebraJson {
            dim: n,
            labels: self.labels().to_vec(),
            c,
        }
    }
}

/// Serialized form `{ "dim": n, "labels": [...], "c": [[[...]]] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub labels: Vec<String>,
    pub c: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<AlgebraJson> for LieAlgebra {
    type Error = Error;

    fn try_from(raw: AlgebraJson) -> Result<Self> {
        if raw.labels.len() != raw.dim {
            return Err(Error::InvalidAlgebra(format!(
                "dim is {} but {} labels were given",
                raw.dim,
                raw.labels.len()
            )));
        }
        LieAlgebra::new(raw.labels, raw.c)
    }
}

impl Serialize for LieAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(d)?;
        LieAlgebra::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// An element `X = Σ coords[i] X_i` of a Lie algebra.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: LieAlgebra,
    coords: RVector,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &RVector {
        &self.coords
    }

    pub(crate) fn from_vector(algebra: &LieAlgebra, coords: RVector) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Self {
            algebra: algebra.clone(),
            coords,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_vector(&self.algebra, &self.coords * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra)?;
        Ok(Self::from_vector(&self.algebra, &self.coords + &other.coords))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

/// A linear functional on the algebra; `coords[i]` is its value on `X_i`.
#[derive(Debug, Clone)]
pub struct DualVector {
    algebra: LieAlgebra,
    coords: RVector,
}

impl DualVector {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &RVector {
        &self.coords
    }

    pub(crate) fn from_vector(algebra: &LieAlgebra, coords: RVector) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Self {
            algebra: algebra.clone(),
            coords,
        }
    }

    /// `α(X)`.
    pub fn pair(&self, x: &AlgebraElement) -> Result<f64> {
        self.algebra.ensure_same(&x.algebra)?;
        Ok(self.coords.dot(&x.coords))
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra)?;
        Ok(Self::from_vector(&self.algebra, &self.coords - &other.coords))
    }
}

/// `[X, Y]` from the structure constants.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.algebra.ensure_same(&y.algebra)?;
    let g = &x.algebra;
    let n = g.dim();
    let mut out = RVector::zeros(n);
    for i in 0..n {
        let xi = x.coords[i];
        if xi == 0.0 {
            continue;
        }
        for j in 0..n {
            let w = xi * y.coords[j];
            if w == 0.0 {
                continue;
            }
            for k in 0..n {
                out[k] += w * g.c(i, j, k);
            }
        }
    }
    Ok(AlgebraElement::from_vector(g, out))
}

/// Matrix of `Y ↦ [X, Y]`; column `j` holds the coordinates of `[X, X_j]`.
pub fn ad(x: &AlgebraElement) -> RMatrix {
    let g = &x.algebra;
    let n = g.dim();
    RMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x.coords[i] * g.c(i, j, k)).sum())
}

/// `Ad(exp p) = exp(ad p)`.
pub fn ad_group(param: &AlgebraElement) -> RMatrix {
    expm_real(&ad(param))
}

/// `Ad(g)X` for `g = exp(param)`.
pub fn ad_group_apply(param: &AlgebraElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    param.algebra.ensure_same(&x.algebra)?;
    Ok(AlgebraElement::from_vector(&x.algebra, ad_group(param) * &x.coords))
}

/// Matrix of the coadjoint action `Ad′(g) = Ad(g⁻¹)′` in dual coordinates:
/// the transpose of `Ad(exp(-param))`.
pub fn coadjoint_matrix(param: &AlgebraElement) -> RMatrix {
    ad_group(&param.neg()).transpose()
}

/// `Ad′(g)α` for `g = exp(param)`.
pub fn coadjoint(param: &AlgebraElement, alpha: &DualVector) -> Result<DualVector> {
    param.algebra.ensure_same(&alpha.algebra)?;
    Ok(DualVector::from_vector(
        &alpha.algebra,
        coadjoint_matrix(param) * &alpha.coords,
    ))
}

type DualFn = dyn Fn(&DualVector) -> f64 + Send + Sync;
type DualGradFn = dyn Fn(&DualVector) -> AlgebraElement + Send + Sync;

/// A smooth real function on `𝔤*` whose differential at `α` is identified
/// with an element of `𝔤`. Without an explicit gradient handle the gradient
/// is assembled from central differences with step `1e-5·(1 + |α|)`.
#[derive(Clone)]
pub struct DualObservable {
    algebra: LieAlgebra,
    value: Arc<DualFn>,
    gradient: Option<Arc<DualGradFn>>,
}

impl fmt::Debug for DualObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualObservable")
            .field("dim", &self.algebra.dim())
            .field("exact_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl DualObservable {
    /// A function with only a value handle; gradients use finite differences.
    pub fn from_fn<F>(algebra: &LieAlgebra, value: F) -> Self
    where
        F: Fn(&DualVector) -> f64 + Send + Sync + 'static,
    {
        Self {
            algebra: algebra.clone(),
            value: Arc::new(value),
            gradient: None,
        }
    }

    pub fn with_gradient<F, G>(algebra: &LieAlgebra, value: F, gradient: G) -> Self
    where
        F: Fn(&DualVector) -> f64 + Send + Sync + 'static,
        G: Fn(&DualVector) -> AlgebraElement + Send + Sync + 'static,
    {
        Self {
            algebra: algebra.clone(),
            value: Arc::new(value),
            gradient: Some(Arc::new(gradient)),
        }
    }

    pub fn constant(algebra: &LieAlgebra, c: f64) -> Self {
        let g = algebra.clone();
        Self::with_gradient(algebra, move |_| c, move |_| g.zero())
    }

    /// `f_X(α) = α(X)`, whose gradient is the constant `X`.
    pub fn linear(x: &AlgebraElement) -> Self {
        let xv = x.coords.clone();
        let xg = x.clone();
        Self::with_gradient(&x.algebra, move |a| a.coords.dot(&xv), move |_| xg.clone())
    }

    /// `f(α) = ½ αᵀQα + bᵀα` with `Q` symmetrized; exact gradient `Qα + b`.
    pub fn quadratic(algebra: &LieAlgebra, q: RMatrix, b: RVector) -> Result<Self> {
        let n = algebra.dim();
        if q.shape() != (n, n) || b.len() != n {
            return Err(Error::Domain("quadratic form has wrong shape".into()));
        }
        let q = (&q + q.transpose()) * 0.5;
        let q2 = q.clone();
        let b2 = b.clone();
        let g = algebra.clone();
        Ok(Self::with_gradient(
            algebra,
            move |a| 0.5 * a.coords.dot(&(&q * &a.coords)) + b.dot(&a.coords),
            move |a| AlgebraElement::from_vector(&g, &q2 * &a.coords + &b2),
        ))
    }

    /// The same function with its gradient handle dropped.
    pub fn without_gradient(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            value: self.value.clone(),
            gradient: None,
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn has_exact_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn value(&self, alpha: &DualVector) -> Result<f64> {
        self.algebra.ensure_same(&alpha.algebra)?;
        Ok((self.value)(alpha))
    }

    /// `df(α) ∈ 𝔤`, exact when a gradient handle is present.
    pub fn gradient(&self, alpha: &DualVector) -> Result<AlgebraElement> {
        self.algebra.ensure_same(&alpha.algebra)?;
        match &self.gradient {
            Some(g) => Ok(g(alpha)),
            None => Ok(self.gradient_fd(alpha)),
        }
    }

    /// Central-difference gradient, step `1e-5·(1 + |α|)`.
    pub fn gradient_fd(&self, alpha: &DualVector) -> AlgebraElement {
        let n = self.algebra.dim();
        let h = 1e-5 * (1.0 + alpha.norm());
        let mut grad = RVector::zeros(n);
        let mut probe = alpha.clone();
        for i in 0..n {
            let base = alpha.coords[i];
            probe.coords[i] = base + h;
            let fp = (self.value)(&probe);
            probe.coords[i] = base - h;
            let fm = (self.value)(&probe);
            probe.coords[i] = base;
            grad[i] = (fp - fm) / (2.0 * h);
        }
        AlgebraElement::from_vector(&self.algebra, grad)
    }
}

/// The Lie–Poisson bracket `{f₁, f₂}(α) = α([df₁(α), df₂(α)])`.
pub fn lie_poisson_bracket(f1: &DualObservable, f2: &DualObservable, alpha: &DualVector) -> Result<f64> {
    let d1 = f1.gradient(alpha)?;
    let d2 = f2.gradient(alpha)?;
    alpha.pair(&bracket(&d1, &d2)?)
}
