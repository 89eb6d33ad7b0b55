//! Computational companion to upper bounds for Σ_{p<x} f₁(p), where f(p)
//! counts solutions of 4/p = 1/n₁ + 1/n₂ + 1/n₃.
//!
//! * [`arith`]: sieves, factorization and the classical arithmetic functions.
//! * [`congruence`]: root counts of 4lx² + 1 ≡ 0 (mod n) and the linear
//!   counterpart.
//! * [`erdos_straus`]: exhaustive solution enumeration and Type I / Type II
//!   classification for primes.
//! * [`meanvalue`]: Σ f₁(p), Σ f₂(p), the weighted (a, l) sum and its dyadic
//!   summation chain.
//! * [`bilinear`]: the box sum Σ d(4la² + 1), the b·c split, the four-case
//!   partition and the lemma-level quantities behind each case.
//! * [`report`]: the shared tabular report with JSON/CSV emission.

pub mod arith;
pub mod bilinear;
pub mod congruence;
pub mod erdos_straus;
mod error;
pub mod meanvalue;
pub mod par;
pub mod report;

pub use error::{Error, Result};

/// Version stamped into every emitted report.
pub const SCHEMA_VERSION: &str = "1";
