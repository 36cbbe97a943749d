//! Exact computation of tropical prevarieties.
//!
//! A tropical prevariety is the common refinement of the tropical
//! hypersurfaces of a polynomial system: the set of vectors `w` at which
//! every polynomial's minimum of `<w, a>` over its support is attained at
//! least twice. This crate computes that set exactly, as a collection of
//! polyhedral cones described over arbitrary-precision integers.
//!
//! The computation runs in three stages:
//!
//! 1. `newton` and `cones` build one polyhedral fan per polynomial, each a
//!    disjoint cover of the tropical hypersurface by half-open cones.
//! 2. `enumeration` precomputes relation tables recording which cone pairs
//!    from different fans can possibly meet.
//! 3. `enumeration` and `scheduler` intersect one cone from each fan,
//!    dynamically reordering fans per branch and pruning with the tables,
//!    optionally across work-stealing workers.
//!
//! `postprocess` deduplicates the surviving intersections by canonical
//! closure, extracts extreme rays, and filters maximal cones. All feasibility
//! questions bottom out in `kernel`, an exact rational LP and double
//! description toolkit.

pub mod bits;
pub mod cli;
pub mod cones;
pub mod enumeration;
mod error;
pub mod kernel;
pub mod newton;
pub mod pipeline;
pub mod postprocess;
pub mod relation;
pub mod report;
pub mod scheduler;
pub mod systems;

pub use error::{Error, Result};
