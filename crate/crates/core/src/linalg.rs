//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

/// Relative singular-value threshold used for rank and nullspace decisions.
pub const RANK_THRESHOLD: f64 = 1e-10;

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Largest entry of `Aᴴ + A` in absolute value.
pub fn skew_hermitian_defect(a: &CMatrix) -> f64 {
    max_abs(&(a.adjoint() + a))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Sorted (ascending) eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    if h.nrows() == 0 {
        return Vec::new();
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `exp(A)` for a skew-Hermitian `A`, through the eigendecomposition of the
/// Hermitian matrix `iA`. Inputs that are not skew-Hermitian to `1e-12`
/// (relative) go through Padé scaling-and-squaring instead.
pub fn expm_skew_hermitian(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let scale = max_abs(a).max(1.0);
    if skew_hermitian_defect(a) > 1e-12 * scale {
        return a.exp();
    }
    let i = C64::new(0.0, 1.0);
    let h = a * i;
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    // A = -iH, so exp(A) = V diag(exp(-i lambda)) Vᴴ
    let phases = CVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| C64::new(0.0, -l).exp()),
    );
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Real matrix exponential by Padé scaling-and-squaring.
pub fn expm_real(a: &RMatrix) -> RMatrix {
    if a.nrows() == 0 {
        return a.clone();
    }
    a.exp()
}

/// Rank-revealing decomposition of a real matrix: orthonormal bases of the
/// column space and of the nullspace, with rank decided by
/// `σ > RANK_THRESHOLD · σ_max`.
#[derive(Debug, Clone)]
pub struct RankSplit {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the column space, one vector per column.
    pub range: RMatrix,
    /// Orthonormal basis of the nullspace, one vector per column.
    pub kernel: RMatrix,
}

impl RankSplit {
    pub fn new(m: &RMatrix) -> Self {
        let (rows, cols) = m.shape();
        let size = rows.max(cols);
        if size == 0 || max_abs_real(m) == 0.0 {
            return Self {
                rank: 0,
                singular_values: vec![0.0; rows.min(cols)],
                range: RMatrix::zeros(rows, 0),
                kernel: RMatrix::identity(cols, cols),
            };
        }
        // Zero-pad to square so the SVD yields a full set of right singular vectors.
        let mut padded = RMatrix::zeros(size, size);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        let svd = padded.svd(true, true);
        let u = svd.u.expect("left singular vectors requested");
        let v_t = svd.v_t.expect("right singular vectors requested");
        let sv = &svd.singular_values;
        let s_max = sv.iter().copied().fold(0.0, f64::max);
        let cutoff = RANK_THRESHOLD * s_max;
        let keep: Vec<usize> = (0..size).filter(|&k| sv[k] > cutoff).collect();
        let drop: Vec<usize> = (0..size).filter(|&k| sv[k] <= cutoff).collect();
        let rank = keep.len();

        let mut range = RMatrix::zeros(rows, rank);
        for (c, &k) in keep.iter().enumerate() {
            range.set_column(c, &u.column(k).rows(0, rows).into_owned());
        }
        // Right singular vectors beyond the true column count belong to the
        // padding and are ignored by restricting to the first `cols` entries;
        // the surviving kernel directions are re-orthonormalized.
        let mut kernel_cols: Vec<RVector> = Vec::new();
        for &k in &drop {
            let v = v_t.row(k).transpose().rows(0, cols).into_owned();
            kernel_cols.push(v);
        }
        let kernel = orthonormalize(&kernel_cols, cols, cols - rank.min(cols));

        let mut singular_values: Vec<f64> = sv.iter().copied().collect();
        singular_values.sort_by(|a, b| b.total_cmp(a));
        singular_values.truncate(rows.min(cols));
        Self {
            rank,
            singular_values,
            range,
            kernel,
        }
    }
}

/// Gram-Schmidt with re-orthogonalization, keeping at most `limit` vectors.
fn orthonormalize(vectors: &[RVector], dim: usize, limit: usize) -> RMatrix {
    let mut basis: Vec<RVector> = Vec::new();
    for v in vectors {
        if basis.len() == limit {
            break;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = b.dot(&w);
                w.axpy(-p, b, 1.0);
            }
        }
        let n = w.norm();
        if n > 1e-8 {
            basis.push(w / n);
        }
    }
    let mut out = RMatrix::zeros(dim, basis.len());
    for (c, b) in basis.iter().enumerate() {
        out.set_column(c, b);
    }
    out
}
