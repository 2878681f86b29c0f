// Reference constants keep every digit they were computed to.
#![allow(clippy::excessive_precision)]
// `!(x > 0.0)` is the NaN-rejecting form of argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distributed_order;
pub mod error;
pub mod fraccalc;
pub mod oracles;
pub mod quad;
pub mod single_order;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
