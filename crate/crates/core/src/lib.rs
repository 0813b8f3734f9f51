//! Spline shallow water moment equations.
//!
//! Vertical velocity profiles in shallow free-surface flow are expanded in a
//! constrained piecewise-polynomial basis; Galerkin projection gives a moment
//! system of nonconservative balance laws in one horizontal direction. The crate
//! builds the bases and tensors exactly, assembles the model, analyses its
//! hyperbolicity and solves it with a first-order finite-volume scheme, next to a
//! vertically resolved reference solver.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod exact;
pub mod experiments;
pub mod fv_solver;
pub mod hyperbolicity;
pub mod model;
pub mod moment_tensors;
pub mod quadrature;
pub mod reference_solver;
pub mod spline_basis;

pub use error::{Error, Result};
