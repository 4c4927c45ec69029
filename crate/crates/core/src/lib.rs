//! Fractal calculus on middle-ε Cantor sets and order-n Nambu mechanics
//! driven in staircase time.

// `!(a < b)` is the NaN-rejecting form throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fractal;
pub mod nambu;
pub mod systems;

pub use error::{Error, Result};
