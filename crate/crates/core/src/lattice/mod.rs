//! Exact integer lattice algorithms.

pub mod box_search;
pub mod enumerate;
pub mod hnf;
pub mod lll;
pub mod tools;
pub mod xfloat;

pub use box_search::{enumerate_box, sign_normalize, BoxLimits, BoxResult};
pub use hnf::{hermite_rows, rank, solve_in_span};
pub use tools::*;
