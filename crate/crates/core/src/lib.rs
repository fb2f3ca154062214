//! Exact and asymptotic analysis of the BG-rank and 2-quotient rank of
//! integer partitions.
//!
//! - [`partition`]: Ferrers-diagram combinatorics and the Littlewood map.
//! - [`qseries`]: exact coefficient tables from truncated q-series.
//! - [`asymptotics`]: circle-method main terms, Lerch/dilogarithm values,
//!   and arc-dominance sampling.
//! - [`turan`]: Jensen polynomials, Sturm root counting, Hermite limits,
//!   and Turán / convexity scans.
//! - [`cli`]: the `bgrank` command-line driver and its on-disk cache.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod partition;
pub mod qseries;
pub mod turan;

pub use error::{Error, Result};
pub use partition::Partition;
