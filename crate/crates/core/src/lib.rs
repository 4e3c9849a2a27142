#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod approx;
pub mod chebyshev;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod limit;
pub mod packed;
pub mod process;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod stats;
pub mod tridiag;

pub use error::{Error, Result};
