//! Classical and quantum analysis of a neutral spin-1/2 particle in a 2D
//! Ioffe-Pritchard-type magnetic trap.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod check;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod modes;
pub mod poly;
pub mod quantum;
pub mod report;
pub mod spectrum;
pub mod trap;

pub use error::{Error, Result};
