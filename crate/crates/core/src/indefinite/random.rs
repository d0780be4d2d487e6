use super::projector::FermionicProjector;
use super::space::DiscreteSpacetime;
use crate::linalg::{CMat, C64, I};
use crate::rng::{complex_normal, hermitian_gaussian, rng_from_seed};
use crate::{Error, Result};

/// Samples a projector deterministically from `seed`: f Gaussian vectors in
/// the negative coordinate subspace are indefinite-orthonormalized and then
/// moved by U = exp(iB), B = S·H with H Gaussian Hermitian of spectral scale
/// about one.
pub fn random_projector(space: DiscreteSpacetime, f: usize, seed: u64) -> Result<FermionicProjector> {
    if f > space.max_rank() {
        return Err(Error::InfeasibleRank { f, max: space.max_rank() });
    }
    if f == 0 {
        return Ok(FermionicProjector::zero(space));
    }
    let mut rng = rng_from_seed(seed);
    let dim = space.dim();
    let neg = space.negative_coordinates();
    let mut w = CMat::zeros(dim, f);
    for &i in &neg {
        for k in 0..f {
            w[(i, k)] = complex_normal(&mut rng);
        }
    }
    let h = hermitian_gaussian(&mut rng, dim) * C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let b = space.signature_left(&h);
    let u = (b * I).exp();
    let p = FermionicProjector::from_basis_unchecked(space, u * w);
    p.reorthonormalized()
}
