//! Deterministic random streams.
//!
//! All sampling goes through ChaCha20 seeded from a 64-bit seed, so a seed
//! list fully determines every run. The identifier below is written into
//! run manifests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

pub const RNG_ALGORITHM: &str = "chacha20 (rand_chacha 0.9, seed_from_u64)";

pub type Rng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex Gaussian with unit variance split evenly over both parts.
pub fn complex_normal(rng: &mut Rng) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(s * normal(rng), s * normal(rng))
}

pub fn complex_gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Gaussian Hermitian matrix (GUE-like, off-diagonal variance 1/2).
pub fn hermitian_gaussian(rng: &mut Rng, dim: usize) -> DMatrix<Complex64> {
    let g = complex_gaussian_matrix(rng, dim, dim);
    (&g + g.adjoint()).scale(0.5)
}
