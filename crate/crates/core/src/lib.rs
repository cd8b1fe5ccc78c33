//! Exact moments of regular permutation statistics over conjugacy classes of
//! the symmetric group.

pub mod asymptotics;
pub mod combinatorics;
pub mod error;
pub mod expectation;
pub mod indicator;
pub mod oracle;
pub mod poly;
pub mod statistic;

pub use error::{Error, Result};
