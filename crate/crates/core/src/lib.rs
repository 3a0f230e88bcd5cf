//! Certified best approximations of linear forms in exact arithmetic, the
//! explicit sublattice constructions built on them, and evaluators for the
//! associated dimension formulas.

#![allow(clippy::needless_range_loop)]

pub mod bestapprox;
pub mod constructions;
pub mod dimension;
pub mod error;
pub mod exponents;
pub mod lattice;
pub mod logs;
pub mod minkowski;
pub mod numeric;
pub mod real_enclosure;
pub mod schedule;
pub mod verify;

pub use error::{Error, Result};
