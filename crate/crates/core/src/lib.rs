//! Analytics for the divisibility network G_N of the natural numbers `1..=N`,
//! where `i` and `j` are linked when one divides the other.
//!
//! Every measure is available twice: in closed form from floor and divisor
//! functions ([`analytic`]) and from an explicitly built graph ([`graph`]).
//! The two paths are expected to agree exactly.

pub mod analysis;
pub mod analytic;
pub mod cli;
pub mod error;
pub mod graph;
pub mod numtheory;
pub mod rational;

pub use error::{DivnetError, Result};
pub use numtheory::{build_sieve, FactoredInteger, SieveTables};
pub use rational::ExactRational;
