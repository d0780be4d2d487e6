//! Continuum correspondence: Minkowski vector-scalar kernels, light-cone
//! expansions, mass-cone geometry, the regularized action and state
//! stability.

pub mod cone;
pub mod fourier;
pub mod lightcone;
pub mod minkowski;
pub mod regularized;
pub mod stability;

pub use cone::{convolution_support, mass_cone_classify, minkowski_square, ConeRegion, ShellInterval};
pub use fourier::{fourier_support_check, FourierConfig, FourierReport};
pub use lightcone::{dirac_sea_expansion, expansion_product, gradient_expansion, LightconeExpansion, ProductMode, Symbol};
pub use minkowski::{
    chain_coefficients, gamma_matrices, minkowski_chain, minkowski_dot, minkowski_gradient, minkowski_q, slash,
    ChainCoefficients, MinkowskiChain, VectorScalarKernel,
};
pub use regularized::{power_law_action, regularized_action, RegularizationConfig, RegularizedAction, SeaActionInput};
pub use stability::{
    extended_action, mass_constraint, state_stability_check, RegularizationFreedom, SeaConfig, StabilityVerdict,
    StateStabilityFunctions,
};
