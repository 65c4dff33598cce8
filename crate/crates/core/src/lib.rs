//! Exact real arithmetic on measuring-fraction oracles.
//!
//! * [`rational`]: exact rationals and rounding primitives.
//! * [`omega`]: rational functions in ω, with old (intensional) and new equality.
//! * [`measurable`]: the real-number type, its arithmetic, order semi-decisions and limits.
//! * [`nets`]: approximating intervals and nested rational nets.
//! * [`expr`]: parser and evaluator for infinite number expressions.
//! * [`harness`]: property suites for the order, field, limit and sequence theorems.

pub mod error;
pub mod expr;
pub mod harness;
pub mod measurable;
pub mod nets;
pub mod omega;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use measurable::{Comparison, Measurable, SignResult, Witness};
pub use omega::QOmega;
pub use rational::Rat;
