//! Numerical laboratory for fermion systems in discrete space-time.
//!
//! The crate is organized by topic: [`indefinite`] holds the linear algebra
//! of projectors in indefinite inner-product spaces, [`causal`] and
//! [`correlation`] analyse a given projector, [`solver`] minimizes the
//! action, [`continuum`] covers the Minkowski-space correspondence and
//! [`lattice`] the static isotropic lattice model.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod indefinite;
pub mod linalg;
pub mod rng;
pub mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

pub mod causal;
pub mod correlation;
pub mod solver;
pub mod continuum;
pub mod lattice;
