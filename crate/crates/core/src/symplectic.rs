//! The complex space `H = ℂⁿ` as a real symplectic vector space.
//!
//! The Hermitian product `⟨x, y⟩ = Σ x_k · conj(y_k)` is linear in the first
//! slot. The symplectic form is `ω(x, y) = Im⟨x, y⟩`, which makes
//! `Re⟨x, y⟩ = ω(ix, y)` hold identically.
//!
//! Whenever a real matrix is needed, `H` is identified with `ℝ²ⁿ` by
//! interleaving `(Re z_k, Im z_k)` for each complex coordinate.
//!
//! In finite dimension every linear functional on `H` is of the form
//! `ω(w, ·)`, so every smooth function has an `ω`-gradient and the smooth
//! dual is the whole dual.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, RMatrix, RVector, C64};
use crate::report::fmt_f64;

/// `ℂⁿ` with `n = dim`; its real dimension is `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    dim: usize,
}

impl HilbertSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("Hilbert space dimension must be at least 1".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn real_dim(&self) -> usize {
        2 * self.dim
    }

    pub fn zero(&self) -> StateVector {
        StateVector {
            space: *self,
            components: CVector::zeros(self.dim),
        }
    }

    /// The complex basis vector `e_k` (0-based).
    pub fn basis(&self, k: usize) -> StateVector {
        let mut v = self.zero();
        v.components[k] = C64::new(1.0, 0.0);
        v
    }

    /// The `j`-th real basis vector of `ℝ²ⁿ`: `e_{j/2}` for even `j`, `i·e_{j/2}` for odd.
    pub fn real_basis(&self, j: usize) -> StateVector {
        let mut v = self.zero();
        v.components[j / 2] = if j % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        };
        v
    }

    pub fn state(&self, components: Vec<C64>) -> Result<StateVector> {
        StateVector::new(*self, CVector::from_vec(components))
    }

    pub(crate) fn ensure(&self, x: &StateVector) -> Result<()> {
        if x.space == *self {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "state of dimension {} used in space of dimension {}",
                x.space.dim, self.dim
            )))
        }
    }

    /// Real `2n × 2n` matrix `W` with `ω(x, y) = xᵀ W y` in interleaved coordinates.
    pub fn omega_matrix(&self) -> RMatrix {
        let n = self.dim;
        let mut w = RMatrix::zeros(2 * n, 2 * n);
        // Im((a+ib)(c-id)) = b c - a d
        for k in 0..n {
            w[(2 * k + 1, 2 * k)] = 1.0;
            w[(2 * k, 2 * k + 1)] = -1.0;
        }
        w
    }
}

/// A vector of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    components: CVector,
}

impl StateVector {
    pub fn new(space: HilbertSpace, components: CVector) -> Result<Self> {
        if components.len() != space.dim {
            return Err(Error::Domain(format!(
                "state needs {} components, got {}",
                space.dim,
                components.len()
            )));
        }
        Ok(Self { space, components })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn components(&self) -> &CVector {
        &self.components
    }

    pub(crate) fn from_components(space: HilbertSpace, components: CVector) -> Self {
        debug_assert_eq!(components.len(), space.dim);
        Self { space, components }
    }

    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.components.norm_squared()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_components(self.space, &self.components * C64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self::from_components(self.space, &self.components * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.ensure(other)?;
        Ok(Self::from_components(self.space, &self.components + &other.components))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.space.ensure(other)?;
        Ok(Self::from_components(self.space, &self.components - &other.components))
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        self.space.ensure(other)?;
        Ok(Self::from_components(
            self.space,
            &self.components + &other.components * C64::new(s, 0.0),
        ))
    }

    /// `A·x` for a complex `n × n` matrix.
    pub fn apply(&self, a: &CMatrix) -> Result<Self> {
        if a.shape() != (self.space.dim, self.space.dim) {
            return Err(Error::Domain(format!(
                "operator of shape {:?} applied to a state of dimension {}",
                a.shape(),
                self.space.dim
            )));
        }
        Ok(Self::from_components(self.space, a * &self.components))
    }

    /// Interleaved real coordinates `(Re z_0, Im z_0, Re z_1, ...)`.
    pub fn to_real(&self) -> RVector {
        RVector::from_iterator(
            2 * self.space.dim,
            self.components.iter().flat_map(|z| [z.re, z.im]),
        )
    }

    pub fn from_real(space: HilbertSpace, v: &RVector) -> Result<Self> {
        if v.len() != space.real_dim() {
            return Err(Error::Domain(format!(
                "real coordinate vector needs length {}, got {}",
                space.real_dim(),
                v.len()
            )));
        }
        let comps = CVector::from_iterator(space.dim, (0..space.dim).map(|k| C64::new(v[2 * k], v[2 * k + 1])));
        Ok(Self::from_components(space, comps))
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            re: self.components.iter().map(|z| z.re).collect(),
            im: self.components.iter().map(|z| z.im).collect(),
        }
    }

    pub fn from_json(raw: &StateJson) -> Result<Self> {
        if raw.re.len() != raw.im.len() {
            return Err(Error::Parse(format!(
                "state has {} real parts but {} imaginary parts",
                raw.re.len(),
                raw.im.len()
            )));
        }
        let space = HilbertSpace::new(raw.re.len())?;
        space.state(raw.re.iter().zip(&raw.im).map(|(&r, &i)| C64::new(r, i)).collect())
    }
}

/// Serialized state `{ "re": [...], "im": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// `⟨x, y⟩`, linear in `x`.
pub fn inner(x: &StateVector, y: &StateVector) -> Result<C64> {
    x.space.ensure(y)?;
    Ok(x.components.iter().zip(y.components.iter()).map(|(a, b)| a * b.conj()).sum())
}

/// `ω(x, y) = Im⟨x, y⟩`.
pub fn omega(x: &StateVector, y: &StateVector) -> Result<f64> {
    Ok(inner(x, y)?.im)
}

/// A real linear functional on `H`, stored as the unique `w` with `ℓ = ω(w, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCovector {
    w: StateVector,
}

impl RealCovector {
    /// Builds the functional with values `ℓ(b_j) = values[j]` on the real basis.
    pub fn from_real_components(space: HilbertSpace, values: &RVector) -> Result<Self> {
        if values.len() != space.real_dim() {
            return Err(Error::Domain(format!(
                "covector needs {} real components, got {}",
                space.real_dim(),
                values.len()
            )));
        }
        // ω(w, e_k) = Im w_k and ω(w, i e_k) = -Re w_k
        let comps = CVector::from_iterator(
            space.dim,
            (0..space.dim).map(|k| C64::new(-values[2 * k + 1], values[2 * k])),
        );
        Ok(Self {
            w: StateVector::from_components(space, comps),
        })
    }

    pub fn space(&self) -> HilbertSpace {
        self.w.space
    }

    pub fn eval(&self, y: &StateVector) -> Result<f64> {
        omega(&self.w, y)
    }

    /// Values on the interleaved real basis.
    pub fn to_real_components(&self) -> RVector {
        let n = self.w.space.dim;
        RVector::from_iterator(
            2 * n,
            self.w.components.iter().flat_map(|z| [z.im, -z.re]),
        )
    }
}

/// `ω̌(x) = ω(x, ·)`.
pub fn omega_flat(x: &StateVector) -> RealCovector {
    RealCovector { w: x.clone() }
}

/// `ω̌⁻¹(ℓ)`: the unique `x` with `ω(x, ·) = ℓ`.
pub fn omega_sharp(l: &RealCovector) -> StateVector {
    l.w.clone()
}

/// Whether the linear field `y ↦ Ay` preserves `ω`, i.e.
/// `ω(A y₁, y₂) = −ω(y₁, A y₂)` on all pairs of real basis vectors, to `1e-10`.
pub fn is_locally_hamiltonian(a: &CMatrix) -> bool {
    locally_hamiltonian_defect(a).map(|d| d <= 1e-10).unwrap_or(false)
}

pub fn locally_hamiltonian_defect(a: &CMatrix) -> Result<f64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Domain("operator must be square".into()));
    }
    let space = HilbertSpace::new(n)?;
    let images: Vec<StateVector> = (0..2 * n)
        .map(|j| space.real_basis(j).apply(a))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for j1 in 0..2 * n {
        for j2 in 0..2 * n {
            let lhs = omega(&images[j1], &space.real_basis(j2))?;
            let rhs = omega(&space.real_basis(j1), &images[j2])?;
            worst = worst.max((lhs + rhs).abs());
        }
    }
    Ok(worst)
}

/// `f(x) = ½ ω(Ax, x)` for a complex-linear `A` with `ω(Ax, y) = ω(Ay, x)`.
///
/// These are smooth with the exact linear gradient `grad f(x) = Ax`, and
/// their Poisson brackets are again of this form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObservable {
    space: HilbertSpace,
    operator: CMatrix,
}

/// Tolerance for the symmetry `ω(Ax, y) = ω(Ay, x)` at construction.
const QUADRATIC_SYMMETRY_TOL: f64 = 1e-10;

impl QuadraticObservable {
    pub fn new(operator: CMatrix) -> Result<Self> {
        let n = operator.nrows();
        if operator.ncols() != n {
            return Err(Error::Domain("operator must be square".into()));
        }
        let space = HilbertSpace::new(n)?;
        let scale = crate::linalg::max_abs(&operator).max(1.0);
        let defect = Self::symmetry_defect(space, &operator)?;
        if defect > QUADRATIC_SYMMETRY_TOL * scale {
            return Err(Error::Domain(format!(
                "ω(Ax, y) = ω(Ay, x) fails on the basis (defect {defect:e})"
            )));
        }
        Ok(Self { space, operator })
    }

    fn symmetry_defect(space: HilbertSpace, a: &CMatrix) -> Result<f64> {
        let n2 = space.real_dim();
        let images: Vec<StateVector> = (0..n2)
            .map(|j| space.real_basis(j).apply(a))
            .collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for j1 in 0..n2 {
            for j2 in 0..n2 {
                let d = omega(&images[j1], &space.real_basis(j2))?
                    - omega(&images[j2], &space.real_basis(j1))?;
                worst = worst.max(d.abs());
            }
        }
        Ok(worst)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }

    pub fn value(&self, x: &StateVector) -> Result<f64> {
        Ok(0.5 * omega(&x.apply(&self.operator)?, x)?)
    }

    pub fn grad(&self, x: &StateVector) -> Result<StateVector> {
        x.apply(&self.operator)
    }

    /// `{self, other}` as a quadratic observable: operator `[A_self, A_other]`.
    pub fn poisson(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::Domain("observables live on different spaces".into()));
        }
        let c = &self.operator * &other.operator - &other.operator * &self.operator;
        Ok(Self {
            space: self.space,
            operator: c,
        })
    }
}

type ValueFn = dyn Fn(&StateVector) -> f64 + Send + Sync;
type GradFn = dyn Fn(&StateVector) -> StateVector + Send + Sync;

/// An arbitrary smooth function on `H`. Without a gradient handle the
/// gradient comes from central differences.
#[derive(Clone)]
pub struct GeneralObservable {
    space: HilbertSpace,
    value: Arc<ValueFn>,
    gradient: Option<Arc<GradFn>>,
}

impl fmt::Debug for GeneralObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralObservable")
            .field("space", &self.space)
            .field("exact_gradient", &self.gradient.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    Quadratic,
    General,
}

/// A smooth real function on `H` together with a way to get its `ω`-gradient.
#[derive(Debug, Clone)]
pub enum Observable {
    Quadratic(QuadraticObservable),
    General(GeneralObservable),
}

impl From<QuadraticObservable> for Observable {
    fn from(q: QuadraticObservable) -> Self {
        Observable::Quadratic(q)
    }
}

impl Observable {
    pub fn quadratic(operator: CMatrix) -> Result<Self> {
        QuadraticObservable::new(operator).map(Observable::Quadratic)
    }

    pub fn from_fn<F>(space: HilbertSpace, value: F) -> Self
    where
        F: Fn(&StateVector) -> f64 + Send + Sync + 'static,
    {
        Observable::General(GeneralObservable {
            space,
            value: Arc::new(value),
            gradient: None,
        })
    }

    pub fn with_gradient<F, G>(space: HilbertSpace, value: F, gradient: G) -> Self
    where
        F: Fn(&StateVector) -> f64 + Send + Sync + 'static,
        G: Fn(&StateVector) -> StateVector + Send + Sync + 'static,
    {
        Observable::General(GeneralObservable {
            space,
            value: Arc::new(value),
            gradient: Some(Arc::new(gradient)),
        })
    }

    pub fn constant(space: HilbertSpace, c: f64) -> Self {
        Self::with_gradient(space, move |_| c, move |_| space.zero())
    }

    pub fn kind(&self) -> ObservableKind {
        match self {
            Observable::Quadratic(_) => ObservableKind::Quadratic,
            Observable::General(_) => ObservableKind::General,
        }
    }

    pub fn space(&self) -> HilbertSpace {
        match self {
            Observable::Quadratic(q) => q.space,
            Observable::General(g) => g.space,
        }
    }

    pub fn value(&self, x: &StateVector) -> Result<f64> {
        self.space().ensure(x)?;
        match self {
            Observable::Quadratic(q) => q.value(x),
            Observable::General(g) => Ok((g.value)(x)),
        }
    }

    /// `df(x)`, assembled from central differences on the real basis with
    /// step `1e-5·(1 + |x|)`.
    pub fn differential_fd(&self, x: &StateVector) -> Result<RealCovector> {
        let space = self.space();
        space.ensure(x)?;
        let h = 1e-5 * (1.0 + x.norm());
        let mut d = RVector::zeros(space.real_dim());
        for j in 0..space.real_dim() {
            let b = space.real_basis(j);
            let fp = self.value(&x.axpy(h, &b)?)?;
            let fm = self.value(&x.axpy(-h, &b)?)?;
            d[j] = (fp - fm) / (2.0 * h);
        }
        RealCovector::from_real_components(space, &d)
    }

    /// Gradient through the finite-difference differential, ignoring any exact handle.
    pub fn grad_fd(&self, x: &StateVector) -> Result<StateVector> {
        Ok(omega_sharp(&self.differential_fd(x)?))
    }

    pub fn has_exact_gradient(&self) -> bool {
        match self {
            Observable::Quadratic(_) => true,
            Observable::General(g) => g.gradient.is_some(),
        }
    }
}

/// `grad f(x)`, the vector with `df(x)y = ω(grad f(x), y)` for all `y`.
pub fn grad(f: &Observable, x: &StateVector) -> Result<StateVector> {
    f.space().ensure(x)?;
    match f {
        Observable::Quadratic(q) => q.grad(x),
        Observable::General(g) => match &g.gradient {
            Some(handle) => Ok(handle(x)),
            None => f.grad_fd(x),
        },
    }
}

/// Poisson bracket `{f, g}(x) = ω(grad f(x), grad g(x)) = df(x)(grad g(x))`.
///
/// With this ordering, `f ↦ σ` style lifts of a representation intertwine the
/// matrix commutator with `{·,·}`.
pub fn poisson(f: &Observable, g: &Observable, x: &StateVector) -> Result<f64> {
    let gf = grad(f, x)?;
    let gg = grad(g, x)?;
    omega(&gf, &gg)
}

/// Writes `(x, f(x), grad f(x))` rows as CSV in interleaved real coordinates.
pub fn write_observable_csv<W: Write>(
    out: &mut W,
    f: &Observable,
    points: &[StateVector],
) -> Result<()> {
    let n2 = f.space().real_dim();
    let mut header: Vec<String> = (0..n2).map(|j| format!("x{j}")).collect();
    header.push("f".into());
    header.extend((0..n2).map(|j| format!("grad{j}")));
    writeln!(out, "{}", header.join(","))?;
    for x in points {
        let mut row: Vec<String> = x.to_real().iter().map(|&v| fmt_f64(v)).collect();
        row.push(fmt_f64(f.value(x)?));
        row.extend(grad(f, x)?.to_real().iter().map(|&v| fmt_f64(v)));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_skew_hermitian, random_state, Sampler};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn omega_is_alternating() {
        let mut s = Sampler::new(5);
        let h = HilbertSpace::new(3).unwrap();
        for _ in 0..10 {
            let x = random_state(h, &mut s);
            assert_eq!(omega(&x, &x).unwrap(), 0.0);
        }
    }

    #[test]
    fn omega_of_ix_with_x_is_squared_norm() {
        let mut s = Sampler::new(6);
        let h = HilbertSpace::new(4).unwrap();
        let x = random_state(h, &mut s);
        let ix = x.scale_complex(c(0.0, 1.0));
        assert!((omega(&ix, &x).unwrap() - x.norm().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn omega_of_one_and_i() {
        // ⟨1, i⟩ = 1·conj(i) = -i
        let h = HilbertSpace::new(1).unwrap();
        let one = h.state(vec![c(1.0, 0.0)]).unwrap();
        let i = h.state(vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(omega(&one, &i).unwrap(), -1.0);
        assert_eq!(omega(&i, &one).unwrap(), 1.0);
        // the slot identity Re⟨x,y⟩ = ω(ix,y) on this pair
        let lhs = inner(&one, &i).unwrap().re;
        let rhs = omega(&one.scale_complex(c(0.0, 1.0)), &i).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn real_part_equals_omega_of_ix() {
        let mut s = Sampler::new(7);
        let h = HilbertSpace::new(3).unwrap();
        for _ in 0..50 {
            let x = random_state(h, &mut s);
            let y = random_state(h, &mut s);
            let lhs = inner(&x, &y).unwrap().re;
            let rhs = omega(&x.scale_complex(c(0.0, 1.0)), &y).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_matrix_matches_omega_and_is_nondegenerate() {
        let mut s = Sampler::new(8);
        let h = HilbertSpace::new(3).unwrap();
        let w = h.omega_matrix();
        let x = random_state(h, &mut s);
        let y = random_state(h, &mut s);
        let via_matrix = x.to_real().dot(&(&w * y.to_real()));
        assert!((via_matrix - omega(&x, &y).unwrap()).abs() < 1e-12);
        assert_eq!(crate::linalg::RankSplit::new(&w).rank, 6);
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = HilbertSpace::new(2).unwrap().zero();
        let b = HilbertSpace::new(3).unwrap().zero();
        assert!(matches!(omega(&a, &b), Err(Error::Domain(_))));
        assert!(HilbertSpace::new(0).is_err());
    }

    #[test]
    fn flat_of_zero_is_zero_covector() {
        let h = HilbertSpace::new(2).unwrap();
        assert_eq!(omega_flat(&h.zero()).to_real_components(), RVector::zeros(4));
        assert_eq!(omega_sharp(&RealCovector::from_real_components(h, &RVector::zeros(4)).unwrap()), h.zero());
    }

    #[test]
    fn flat_is_real_linear() {
        let mut s = Sampler::new(9);
        let h = HilbertSpace::new(3).unwrap();
        let x = random_state(h, &mut s);
        let y = random_state(h, &mut s);
        let (a, b) = (1.7, -0.4);
        let lhs = omega_flat(&x.scale(a).add(&y.scale(b)).unwrap()).to_real_components();
        let rhs = omega_flat(&x).to_real_components() * a + omega_flat(&y).to_real_components() * b;
        assert!((lhs - rhs).amax() < 1e-12);
    }

    #[test]
    fn sharp_after_flat_is_identity_through_real_components() {
        let mut s = Sampler::new(10);
        let h = HilbertSpace::new(4).unwrap();
        for _ in 0..20 {
            let x = random_state(h, &mut s);
            let comps = omega_flat(&x).to_real_components();
            // components are evaluations on the real basis
            for j in 0..h.real_dim() {
                let direct = omega(&x, &h.real_basis(j)).unwrap();
                assert!((direct - comps[j]).abs() < 1e-12);
            }
            let back = omega_sharp(&RealCovector::from_real_components(h, &comps).unwrap());
            assert!(back.sub(&x).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn sharp_of_real_inner_product_is_i_times_w() {
        let mut s = Sampler::new(11);
        let h = HilbertSpace::new(3).unwrap();
        let w = random_state(h, &mut s);
        let values = RVector::from_iterator(
            h.real_dim(),
            (0..h.real_dim()).map(|j| inner(&w, &h.real_basis(j)).unwrap().re),
        );
        let sharp = omega_sharp(&RealCovector::from_real_components(h, &values).unwrap());
        let iw = w.scale_complex(c(0.0, 1.0));
        assert!(sharp.sub(&iw).unwrap().norm() < 1e-12);
    }

    #[test]
    fn gradient_of_quadratic_is_the_operator() {
        let mut s = Sampler::new(12);
        let h = HilbertSpace::new(3).unwrap();
        let a = random_skew_hermitian(3, &mut s);
        let f = Observable::quadratic(a.clone()).unwrap();
        for _ in 0..20 {
            let x = random_state(h, &mut s);
            let g = grad(&f, &x).unwrap();
            assert!(g.sub(&x.apply(&a).unwrap()).unwrap().norm() < 1e-14);
            // defining relation against central differences
            let d = f.differential_fd(&x).unwrap().to_real_components();
            let y = random_state(h, &mut s);
            let df_y = d.dot(&y.to_real());
            let omega_gy = omega(&g, &y).unwrap();
            assert!((df_y - omega_gy).abs() <= 1e-6 * omega_gy.abs().max(1.0));
        }
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let h = HilbertSpace::new(2).unwrap();
        let f = Observable::constant(h, 3.5);
        let x = h.basis(1);
        assert_eq!(grad(&f, &x).unwrap(), h.zero());
        assert_eq!(f.grad_fd(&x).unwrap().norm(), 0.0);
    }

    #[test]
    fn general_observable_gradient_by_finite_differences() {
        // f(x) = |x|⁴ / 4, df(x)y = |x|² Re⟨x,y⟩ = ω(i|x|²x, y)
        let h = HilbertSpace::new(2).unwrap();
        let f = Observable::from_fn(h, |x| x.norm().powi(4) / 4.0);
        let x = h.state(vec![c(0.3, -0.2), c(1.1, 0.5)]).unwrap();
        let g = grad(&f, &x).unwrap();
        let expected = x.scale_complex(c(0.0, x.norm().powi(2)));
        assert!(g.sub(&expected).unwrap().norm() < 1e-8);
        assert_eq!(f.kind(), ObservableKind::General);
    }

    #[test]
    fn quadratic_requires_symmetric_omega_form() {
        // identity: ω(x, y) = −ω(y, x), not symmetric
        assert!(Observable::quadratic(CMatrix::identity(2, 2)).is_err());
        assert!(Observable::quadratic(CMatrix::identity(2, 2) * c(0.0, 1.0)).is_ok());
    }

    #[test]
    fn poisson_is_alternating_and_antisymmetric() {
        let mut s = Sampler::new(13);
        let h = HilbertSpace::new(3).unwrap();
        let f = Observable::quadratic(random_skew_hermitian(3, &mut s)).unwrap();
        let g = Observable::quadratic(random_skew_hermitian(3, &mut s)).unwrap();
        for _ in 0..20 {
            let x = random_state(h, &mut s);
            assert_eq!(poisson(&f, &f, &x).unwrap(), 0.0);
            let fg = poisson(&f, &g, &x).unwrap();
            let gf = poisson(&g, &f, &x).unwrap();
            assert!((fg + gf).abs() < 1e-10);
        }
    }

    #[test]
    fn poisson_equals_df_of_grad_g() {
        let mut s = Sampler::new(14);
        let h = HilbertSpace::new(2).unwrap();
        let f = Observable::quadratic(random_skew_hermitian(2, &mut s)).unwrap();
        let g = Observable::quadratic(random_skew_hermitian(2, &mut s)).unwrap();
        let x = random_state(h, &mut s);
        let df = f.differential_fd(&x).unwrap();
        let lhs = df.eval(&grad(&g, &x).unwrap()).unwrap();
        let rhs = poisson(&f, &g, &x).unwrap();
        assert!((lhs - rhs).abs() < 1e-6 * rhs.abs().max(1.0));
    }

    #[test]
    fn poisson_of_quadratics_is_the_commutator_quadratic() {
        let mut s = Sampler::new(15);
        let h = HilbertSpace::new(3).unwrap();
        let qf = QuadraticObservable::new(random_skew_hermitian(3, &mut s)).unwrap();
        let qg = QuadraticObservable::new(random_skew_hermitian(3, &mut s)).unwrap();
        let qfg = qf.poisson(&qg).unwrap();
        // the bracket is again a valid quadratic observable
        QuadraticObservable::new(qfg.operator().clone()).unwrap();
        let (f, g) = (Observable::from(qf), Observable::from(qg));
        for _ in 0..20 {
            let x = random_state(h, &mut s);
            let direct = poisson(&f, &g, &x).unwrap();
            assert!((direct - qfg.value(&x).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn poisson_jacobi_identity_for_quadratics() {
        let mut s = Sampler::new(16);
        let h = HilbertSpace::new(3).unwrap();
        let q: Vec<QuadraticObservable> = (0..3)
            .map(|_| QuadraticObservable::new(random_skew_hermitian(3, &mut s)).unwrap())
            .collect();
        let obs = |o: &QuadraticObservable| Observable::from(o.clone());
        for _ in 0..20 {
            let x = random_state(h, &mut s);
            let t1 = poisson(&obs(&q[0]), &obs(&q[1].poisson(&q[2]).unwrap()), &x).unwrap();
            let t2 = poisson(&obs(&q[1]), &obs(&q[2].poisson(&q[0]).unwrap()), &x).unwrap();
            let t3 = poisson(&obs(&q[2]), &obs(&q[0].poisson(&q[1]).unwrap()), &x).unwrap();
            assert!((t1 + t2 + t3).abs() < 1e-8);
        }
    }

    #[test]
    fn locally_hamiltonian_examples() {
        let mut s = Sampler::new(17);
        assert!(is_locally_hamiltonian(&random_skew_hermitian(3, &mut s)));
        assert!(!is_locally_hamiltonian(&CMatrix::identity(3, 3)));
        assert!(is_locally_hamiltonian(&(CMatrix::identity(3, 3) * c(0.0, 1.0))));
    }

    #[test]
    fn csv_rows_have_expected_shape() {
        let h = HilbertSpace::new(1).unwrap();
        let f = Observable::quadratic(CMatrix::identity(1, 1) * c(0.0, 2.0)).unwrap();
        let mut buf = Vec::new();
        write_observable_csv(&mut buf, &f, &[h.basis(0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x0,x1,f,grad0,grad1");
        assert_eq!(lines[1].split(',').count(), 5);
    }

    #[test]
    fn state_json_round_trip() {
        let h = HilbertSpace::new(2).unwrap();
        let x = h.state(vec![c(0.5, -1.0), c(0.0, 2.0)]).unwrap();
        let json = serde_json::to_string(&x.to_json()).unwrap();
        let back: StateJson = serde_json::from_str(&json).unwrap();
        assert_eq!(StateVector::from_json(&back).unwrap(), x);
        let bad = StateJson { re: vec![1.0], im: vec![] };
        assert!(StateVector::from_json(&bad).is_err());
    }
}
