//! Truncated-jet group algebra, commutator cascades and recurrence
//! detection for groups of local holomorphic diffeomorphisms of `(C^n, 0)`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cascade;
pub mod error;
pub mod fixtures;
pub mod jet;
pub mod linalg;
pub mod linear_analysis;
pub mod orbit_sim;
mod parallel;
pub mod sampling;
pub mod tolerances;
pub mod zassenhaus;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use num_rational::BigRational;
