//! Simulator and verification toolkit for preferential attachment with
//! random initial degrees (PARID).

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
pub mod error;
pub mod io;
pub mod process;
pub mod sampling;
pub mod seed;
pub mod theory;

pub use error::{Error, Result};
