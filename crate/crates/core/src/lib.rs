//! Escape problems for rectangles under a density budget.

pub mod error;
pub mod geometry;
pub mod interval;
pub mod approx;
pub mod exact;
pub mod lp;
pub mod square;
pub mod reductions;
pub mod boxes;
pub mod generate;
pub mod io;
pub mod rng;

pub use error::{Error, Result};
