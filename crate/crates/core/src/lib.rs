//! Voronoi-based particle operators, their intermediate integral forms, and
//! computable truncation-error bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod context;
pub mod error;
pub mod functions;
pub mod geometry;
pub mod lemmas;
pub mod operators;
pub mod quadrature;
pub mod study;
pub mod weights;

pub use error::{Error, Result};
