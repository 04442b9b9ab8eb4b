//! Non-adaptive group testing under runlength and column-weight constraints.
//!
//! The crate builds RandMatrix designs (every column has `alpha` ones, any two
//! at cyclic distance more than `d`), the spacer baseline, i.i.d. Bernoulli
//! designs and the weight-constrained quantitative design; decodes with COMP
//! or by exhaustive search; verifies disjunctness, private sets and
//! quantitative zero-error; evaluates the lower bounds and union-bound
//! failure probabilities; and runs seeded Monte-Carlo experiments.

pub mod bits;
pub mod bounds;
pub mod combinatorics;
pub mod construct;
pub mod decode;
pub mod error;
pub mod matrix;
pub mod rng;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{Outcome, OutcomeKind, SparseSupport, TestMatrix};
