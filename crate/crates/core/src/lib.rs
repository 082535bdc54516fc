//! A laboratory for worst-case behavior of classic TSP heuristics.
//!
//! The crate implements greedy edge selection and the Clarke-Wright savings
//! heuristic over exact integer distance keys, generates the recursive
//! two-row grid family (and its hub and 1-2 variants) on which those
//! heuristics produce tours a logarithmic factor longer than optimal,
//! verifies certified worst-case executions step by step, and provides
//! Held-Karp and brute-force optimum baselines.

pub mod certificates;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod instances;
pub mod metrics;

pub use error::{Error, Result};
