//! Heuristic search and fitness-landscape analysis for the axial
//! multidimensional assignment problem (MAP).
//!
//! A MAP instance with `D` dimensions and cardinality `N` assigns a cost
//! coefficient to every tuple in `{1..N}^D`; a feasible solution picks `N`
//! pairwise-disjoint tuples, canonically written as `D - 1` permutations
//! applied to the identity first column. This crate provides:
//!
//! - [`instance`]: dense cost arrays, seeded instance generation, binary I/O;
//! - [`solution`]: feasible assignments, enumeration, canonical encoding;
//! - [`lap`]: an exact integer linear-assignment solver with a deterministic
//!   lexicographic tie-break;
//! - [`projection`]: the dimension-wise and dimension-subset reductions of a
//!   MAP to a sequence of LAPs, plus the corresponding move application;
//! - [`search`]: steepest-descent very large-scale neighborhood (VLSN) search
//!   and order-K variable neighborhood search (VNS), single- and multi-start;
//! - [`landscape`]: recording the digraph of improving moves, exhaustive
//!   landscape enumeration, and the N = 2 hypercube structure verifier;
//! - [`analysis`]: sink statistics, fitness-distance correlation, and paired
//!   algorithm comparison.

pub mod analysis;
pub mod error;
pub mod instance;
pub mod lap;
pub mod landscape;
mod moves;
pub mod perm;
pub mod projection;
pub mod search;
pub mod solution;
#[cfg(test)]
mod testsupport;

pub use error::Error;
pub use instance::{CostArray, InstanceSpec};
pub use perm::Permutation;
pub use solution::Assignment;

/// Objective value of a feasible assignment: the exact integer sum of the
/// `N` selected cost coefficients.
pub type Objective = i64;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
