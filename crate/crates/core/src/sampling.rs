//! Seeded random inputs.
//!
//! All randomness comes from ChaCha8 streams keyed by a 64-bit seed. Bulk
//! sampling derives one stream per sample index, so results do not depend on
//! how the work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie::{AlgebraElement, LieAlgebra};
use crate::linalg::{CMatrix, CVector, C64};
use crate::symplectic::{HilbertSpace, StateVector};

/// A seeded generator.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator for sample `index` under `seed`, independent of all other indices.
    pub fn for_index(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Standard complex Gaussian (independent `N(0,1)` real and imaginary parts).
    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }
}

/// Complex Gaussian state; not normalized.
pub fn random_state(space: HilbertSpace, s: &mut Sampler) -> StateVector {
    let comps = CVector::from_iterator(space.dim(), (0..space.dim()).map(|_| s.complex_normal()));
    StateVector::new(space, comps).expect("length matches")
}

/// Uniformly distributed unit vector (normalized complex Gaussian).
pub fn random_unit_state(space: HilbertSpace, s: &mut Sampler) -> StateVector {
    loop {
        let x = random_state(space, s);
        let n = x.norm();
        if n > 1e-300 {
            return x.scale(1.0 / n);
        }
    }
}

/// Algebra element with standard Gaussian coordinates.
pub fn random_element(algebra: &LieAlgebra, s: &mut Sampler) -> AlgebraElement {
    algebra
        .element((0..algebra.dim()).map(|_| s.normal()).collect())
        .expect("length matches")
}

/// Random skew-Hermitian `n × n` matrix `(M − Mᴴ)/2`.
pub fn random_skew_hermitian(n: usize, s: &mut Sampler) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| s.complex_normal());
    (&m - m.adjoint()) * C64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        for _ in 0..10 {
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
        }
    }

    #[test]
    fn index_streams_differ() {
        let mut a = Sampler::for_index(42, 0);
        let mut b = Sampler::for_index(42, 1);
        assert_ne!(a.normal().to_bits(), b.normal().to_bits());
    }

    #[test]
    fn unit_states_have_unit_norm() {
        let h = HilbertSpace::new(5).unwrap();
        let mut s = Sampler::new(1);
        for _ in 0..20 {
            assert!((random_unit_state(h, &mut s).norm() - 1.0).abs() < 1e-14);
        }
    }
}
