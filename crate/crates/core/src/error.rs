use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigen-solver failure: {0}")]
    EigenFailure(String),

    #[error("transform is not unitary for the indefinite product (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("no negative-definite subspace of rank {f} exists (maximum {max})")]
    InfeasibleRank { f: usize, max: usize },

    #[error("constraint value {kappa} is not attainable: {reason}")]
    InfeasibleKappa { kappa: f64, reason: String },

    #[error("action {action:.6e} fell below the divergence floor at iteration {iteration}")]
    DivergenceDetected { action: f64, iteration: usize },

    #[error("analytic first variation disagrees with finite differences (relative error {rel:.3e})")]
    GradientInconsistent { rel: f64 },

    #[error("gradient is undefined on the light cone (xi^2 = {xi_sq:.3e})")]
    LightConeUndefined { xi_sq: f64 },

    #[error("unimplemented distributional product: {0}")]
    UnimplementedProduct(String),

    #[error("convolution support is unbounded for q = {q:?}")]
    Unbounded { q: Vec<f64> },

    #[error("remainder is not integrable at the origin (log-log slope {slope:.3})")]
    NotRegularizable { slope: f64 },

    #[error("mass shell m^2 = {msq} lies outside the sampled grid [{lo}, {hi}]")]
    GridCoverage { msq: f64, lo: f64, hi: f64 },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
