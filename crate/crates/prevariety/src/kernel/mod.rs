//! Exact rational-arithmetic core: integer vectors, constraint systems and
//! the linear-programming and double-description routines that answer every
//! geometric question the rest of the crate asks.
//!
//! Arithmetic runs on `i128` with overflow detection and transparently
//! retries the whole computation with arbitrary-precision integers when a
//! value does not fit, so results are always exact.

pub mod coeff;
pub mod constraint;
pub mod dd;
pub mod linalg;
pub mod lp;
pub mod vec;

pub use constraint::{ConstraintSystem, FeasibilityVerdict};
pub use dd::extreme_rays;
pub use linalg::{kernel_basis, rank, Echelon};
pub use lp::{dimension, implied_equations, lp_feasible, remove_redundant};
pub use vec::IntVector;
