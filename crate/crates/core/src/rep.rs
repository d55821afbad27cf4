//! Finite-dimensional unitary representations given by their infinitesimal
//! generators `ρ′(X_i)`, skew-Hermitian matrices satisfying
//! `ρ′([X_i, X_j]) = [ρ′(X_i), ρ′(X_j)]`.
//!
//! The group acts through `ρ(exp p) = exp(ρ′(p))`. Every vector of a
//! finite-dimensional representation is smooth, and `(p, x) ↦ ρ(exp p)x` is
//! real-analytic, so no separate smooth subspace is modelled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, AlgebraJson, LieAlgebra};
use crate::linalg::{commutator, expm_skew_hermitian, kron, max_abs, skew_hermitian_defect, CMatrix, C64};
use crate::report::{num, CheckReport};
use crate::symplectic::{HilbertSpace, StateVector};

/// Entrywise tolerance for `Aᴴ = −A`.
pub const SKEW_TOL: f64 = 1e-12;
/// Entrywise tolerance for the homomorphism property.
pub const HOMOMORPHISM_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct UnitaryRep {
    algebra: LieAlgebra,
    space: HilbertSpace,
    generators: Vec<CMatrix>,
}

impl UnitaryRep {
    /// Builds a representation and checks both invariants.
    pub fn new(algebra: LieAlgebra, generators: Vec<CMatrix>) -> Result<Self> {
        let rep = Self::new_unchecked(algebra, generators)?;
        let report = rep.verify();
        if !report.pass() {
            return Err(Error::InvalidRep(format!(
                "skew-Hermitian defect {:e}, homomorphism defect {:e}",
                report.max_skew_defect(),
                report.max_homomorphism_defect()
            )));
        }
        Ok(rep)
    }

    /// Builds a representation checking only shapes; see [`UnitaryRep::verify`].
    pub fn new_unchecked(algebra: LieAlgebra, generators: Vec<CMatrix>) -> Result<Self> {
        if generators.len() != algebra.dim() {
            return Err(Error::InvalidRep(format!(
                "{} generators given for an algebra of dimension {}",
                generators.len(),
                algebra.dim()
            )));
        }
        let n = generators.first().map(|g| g.nrows()).unwrap_or(0);
        let space = HilbertSpace::new(n)?;
        if let Some(i) = generators.iter().position(|g| g.shape() != (n, n)) {
            return Err(Error::InvalidRep(format!(
                "generator {i} has shape {:?}, expected ({n}, {n})",
                generators[i].shape()
            )));
        }
        Ok(Self {
            algebra,
            space,
            generators,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// `ρ′(X) = Σ_i X^i ρ′(X_i)`.
    pub fn rho_prime(&self, x: &AlgebraElement) -> Result<CMatrix> {
        self.algebra.ensure_same(x.algebra())?;
        Ok(self.combine(x.coords().iter().copied()))
    }

    pub(crate) fn combine(&self, coeffs: impl Iterator<Item = f64>) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (c, g) in coeffs.zip(&self.generators) {
            if c != 0.0 {
                m += g * C64::new(c, 0.0);
            }
        }
        m
    }

    /// `ρ(exp p) = exp(ρ′(p))`.
    pub fn rho(&self, param: &AlgebraElement) -> Result<CMatrix> {
        Ok(expm_skew_hermitian(&self.rho_prime(param)?))
    }

    /// `ρ(exp p)·x`.
    pub fn act(&self, param: &AlgebraElement, x: &StateVector) -> Result<StateVector> {
        self.space.ensure(x)?;
        x.apply(&self.rho(param)?)
    }

    /// Defects of both representation invariants.
    pub fn verify(&self) -> VerifyReport {
        let skew: Vec<f64> = self.generators.iter().map(skew_hermitian_defect).collect();
        let d = self.algebra.dim();
        let mut hom = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let lhs = self.combine((0..d).map(|k| self.algebra.c(i, j, k)));
                let rhs = commutator(&self.generators[i], &self.generators[j]);
                hom.push(HomomorphismDefect {
                    i,
                    j,
                    defect: max_abs(&(lhs - rhs)),
                });
            }
        }
        VerifyReport {
            skew_defects: skew,
            homomorphism_defects: hom,
        }
    }

    pub fn to_json(&self) -> RepJson {
        RepJson {
            algebra: self.algebra.to_json(),
            dim: self.dim(),
            generators: self
                .generators
                .iter()
                .map(|g| MatrixJson {
                    re: g.row_iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
                    im: g.row_iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
                })
                .collect(),
        }
    }

    /// Parses a representation without enforcing its invariants, so a
    /// defective input can still be inspected with [`UnitaryRep::verify`].
    pub fn from_json_unchecked(raw: RepJson) -> Result<Self> {
        let algebra = LieAlgebra::try_from(raw.algebra)?;
        let n = raw.dim;
        let mut gens = Vec::with_capacity(raw.generators.len());
        for (idx, m) in raw.generators.into_iter().enumerate() {
            let rows_ok = m.re.len() == n
                && m.im.len() == n
                && m.re.iter().chain(&m.im).all(|r| r.len() == n);
            if !rows_ok {
                return Err(Error::Parse(format!("generator {idx} is not {n}x{n}")));
            }
            gens.push(CMatrix::from_fn(n, n, |r, c| C64::new(m.re[r][c], m.im[r][c])));
        }
        Self::new_unchecked(algebra, gens)
    }
}

/// Serialized form `{ "algebra": ..., "dim": n, "generators": [{ "re", "im" }] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepJson {
    pub algebra: AlgebraJson,
    pub dim: usize,
    pub generators: Vec<MatrixJson>,
}

/// Row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomomorphismDefect {
    pub i: usize,
    pub j: usize,
    pub defect: f64,
}

/// Per-generator skew-Hermitian defects `max|Aᴴ + A|` and per-pair
/// homomorphism defects `max|ρ′([X_i,X_j]) − [ρ′X_i, ρ′X_j]|`.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub skew_defects: Vec<f64>,
    pub homomorphism_defects: Vec<HomomorphismDefect>,
}

impl VerifyReport {
    pub fn max_skew_defect(&self) -> f64 {
        self.skew_defects.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_homomorphism_defect(&self) -> f64 {
        self.homomorphism_defects.iter().map(|h| h.defect).fold(0.0, f64::max)
    }

    pub fn skew_pass(&self) -> bool {
        self.skew_defects.iter().all(|&d| d <= SKEW_TOL)
    }

    pub fn homomorphism_pass(&self) -> bool {
        self.homomorphism_defects.iter().all(|h| h.defect <= HOMOMORPHISM_TOL)
    }

    pub fn pass(&self) -> bool {
        self.skew_pass() && self.homomorphism_pass()
    }

    /// Indices of generators failing the skew-Hermitian check.
    pub fn offending_generators(&self) -> Vec<usize> {
        self.skew_defects
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > SKEW_TOL)
            .map(|(i, _)| i)
            .collect()
    }

    /// The two invariant checks as uniform reports.
    pub fn to_check_reports(&self) -> Vec<CheckReport> {
        let worst_skew = self
            .skew_defects
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        let skew = CheckReport::new("skew_hermitian", self.max_skew_defect(), SKEW_TOL)
            .with("generator", serde_json::Value::from(worst_skew.0))
            .with(
                "offending_generators",
                serde_json::Value::from(self.offending_generators()),
            )
            .with(
                "per_generator",
                serde_json::Value::Array(self.skew_defects.iter().map(|&d| num(d)).collect()),
            );
        let worst_hom = self
            .homomorphism_defects
            .iter()
            .copied()
            .fold(None::<HomomorphismDefect>, |acc, h| match acc {
                Some(a) if a.defect >= h.defect => Some(a),
                _ => Some(h),
            });
        let mut hom = CheckReport::new("homomorphism", self.max_homomorphism_defect(), HOMOMORPHISM_TOL);
        if let Some(h) = worst_hom {
            hom = hom
                .with("i", serde_json::Value::from(h.i))
                .with("j", serde_json::Value::from(h.j));
        }
        hom = hom.with(
            "per_pair",
            serde_json::Value::Array(
                self.homomorphism_defects
                    .iter()
                    .map(|h| serde_json::json!({ "i": h.i, "j": h.j, "defect": num(h.defect) }))
                    .collect(),
            ),
        );
        vec![skew, hom]
    }
}

/// The spin-`j` irreducible representation of `su(2)`, `j ∈ {0, ½, 1, …}`.
///
/// Basis vectors are ordered by descending weight `m = j, j−1, …, −j`
/// (eigenvalues of `iρ′(X_3)`), and `ρ′(X_k) = −i J_k` with the standard
/// angular-momentum matrices, so `j = ½` gives exactly `−(i/2)σ_k`.
pub fn su2_spin(j: f64) -> Result<UnitaryRep> {
    let two_j = 2.0 * j;
    if !(j >= 0.0) || two_j.fract() != 0.0 || two_j > 1e6 {
        return Err(Error::Domain(format!("spin must be a non-negative half-integer, got {j}")));
    }
    let n = two_j as usize + 1;
    let m = |r: usize| j - r as f64;
    // J+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩; |m+1⟩ sits one row above |m⟩
    let mut jp = CMatrix::zeros(n, n);
    for c in 1..n {
        let mc = m(c);
        jp[(c - 1, c)] = C64::new((j * (j + 1.0) - mc * (mc + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let half = C64::new(0.5, 0.0);
    let j1 = (&jp + &jm) * half;
    let j2 = (&jp - &jm) * C64::new(0.0, -0.5);
    let j3 = CMatrix::from_fn(n, n, |r, c| if r == c { C64::new(m(r), 0.0) } else { C64::new(0.0, 0.0) });
    let minus_i = C64::new(0.0, -1.0);
    UnitaryRep::new(LieAlgebra::su2(), vec![j1 * minus_i, j2 * minus_i, j3 * minus_i])
}

/// Diagonal representation of the `k`-torus: basis vector `e_r` has weight
/// `weights[r] ∈ ℝᵏ` and `ρ′(T_a) e_r = −i·weights[r][a]·e_r`.
pub fn torus(k: usize, weights: &[Vec<f64>]) -> Result<UnitaryRep> {
    let algebra = LieAlgebra::abelian(k)?;
    if weights.is_empty() {
        return Err(Error::Domain("torus representation needs at least one weight".into()));
    }
    if let Some(r) = weights.iter().position(|w| w.len() != k) {
        return Err(Error::Domain(format!("weight {r} has length {}, expected {k}", weights[r].len())));
    }
    let n = weights.len();
    let gens = (0..k)
        .map(|a| {
            CMatrix::from_fn(n, n, |r, c| {
                if r == c {
                    C64::new(0.0, -weights[r][a])
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    UnitaryRep::new(algebra, gens)
}

/// Block-diagonal sum `ρ₁ ⊕ ρ₂`.
pub fn direct_sum(r1: &UnitaryRep, r2: &UnitaryRep) -> Result<UnitaryRep> {
    r1.algebra.ensure_same(&r2.algebra)?;
    let (n1, n2) = (r1.dim(), r2.dim());
    let gens = r1
        .generators
        .iter()
        .zip(&r2.generators)
        .map(|(a, b)| {
            let mut m = CMatrix::zeros(n1 + n2, n1 + n2);
            m.view_mut((0, 0), (n1, n1)).copy_from(a);
            m.view_mut((n1, n1), (n2, n2)).copy_from(b);
            m
        })
        .collect();
    UnitaryRep::new_unchecked(r1.algebra.clone(), gens)
}

/// Tensor product with generators `A ⊗ I + I ⊗ B`.
pub fn tensor(r1: &UnitaryRep, r2: &UnitaryRep) -> Result<UnitaryRep> {
    r1.algebra.ensure_same(&r2.algebra)?;
    let i1 = CMatrix::identity(r1.dim(), r1.dim());
    let i2 = CMatrix::identity(r2.dim(), r2.dim());
    let gens = r1
        .generators
        .iter()
        .zip(&r2.generators)
        .map(|(a, b)| kron(a, &i2) + kron(&i1, b))
        .collect();
    UnitaryRep::new_unchecked(r1.algebra.clone(), gens)
}

/// Representation invariants for a possibly unchecked representation.
pub fn verify_rep(rep: &UnitaryRep) -> VerifyReport {
    rep.verify()
}
