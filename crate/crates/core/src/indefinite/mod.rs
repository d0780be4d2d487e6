//! Linear algebra on indefinite inner-product spaces: projectors, closed
//! chains, spectral weights, Lagrangians and Euler-Lagrange kernels.

mod action;
mod chain;
mod gauge;
pub mod gradient;
mod projector;
mod qkernel;
mod random;
mod space;
pub mod spectral;

pub use action::{action, constraint_value, functional_value, spectral_sq_total};
pub use chain::{all_chains, closed_chain, ClosedChain};
pub use gauge::{gauge_transform, GaugeTransform};
pub use gradient::{functional_gradient, lagrangian_gradient, Gradient, GradientMethod};
pub use projector::{FermionicProjector, ProjectorDocument, ProjectorReport, ToleranceMetadata, PROJECTOR_SCHEMA};
pub use qkernel::{commutator, el_residual, evaluate, first_variation, q_kernel, ChainData, Evaluation, QKernel};
pub use random::random_projector;
pub use space::DiscreteSpacetime;
pub use spectral::{critical_lagrangian_pairwise, critical_mu, lagrangian, spectral_weight, spectral_weight_sq, Functional};

/// E_x P E_y in block coordinates.
pub fn discrete_kernel(p: &FermionicProjector, x: usize, y: usize) -> crate::Result<crate::linalg::CMat> {
    p.kernel(x, y)
}
