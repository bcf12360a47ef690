//! Exact computation of obstruction classes for couplings between a base Lie
//! algebra and a finite-dimensional fiber Lie algebra.
//!
//! Everything is done over Q in the invariant model: the base is a finite
//! dimensional Lie algebra `T`, bundles are replaced by their fibers and
//! differential forms by Chevalley-Eilenberg cochains on `T`.

pub mod ce;
pub mod coup;
pub mod derivations;
pub mod error;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod obstruction;
pub mod rational;

pub use error::{Error, Result};
