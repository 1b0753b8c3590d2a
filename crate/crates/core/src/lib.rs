//! Numerical index laboratory for Callias-type operators `P = D + iΦ`.
//!
//! The index is computed twice: analytically, by counting zero modes of a
//! finite-difference discretization, and topologically, from the symbol data
//! over the corner of the compactified cotangent bundle. The harness compares
//! the two and records the homotopy certificates that connect them.

// `!(x > tol)` is deliberate: it rejects NaN along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the grid and matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod symbolic;
pub mod topo;

pub use error::{Error, Result};
pub use linalg::C64;
