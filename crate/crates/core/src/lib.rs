//! Exact and certified computation of plane-partition numbers pp(n), the
//! polynomial family Pₙ(x) with Pₙ(1) = pp(n), and verification of the
//! Bessenrodt–Ono and Turán (log-concavity) inequalities they satisfy.

pub mod asymptotics;
pub mod ball;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod family;
pub mod lab;
pub mod partitions;
pub mod poly;
pub mod report;
pub mod roots;

pub use error::{CacheError, Error, Result};
