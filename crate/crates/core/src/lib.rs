//! Sum-dominant (MSTD) and restricted-sum-dominant (RSD) sets of integers.
//!
//! - [`setcore`]: sumsets, difference sets, restricted sumsets, classification.
//! - [`scd`]: the `(a | d1,...,dn)` consecutive-difference notation.
//! - [`family`]: generators for the block-structured families and the
//!   family membership parser.
//! - [`theorems`]: closed-form predictors checked against brute force.
//! - [`search`]: exhaustive bit-parallel enumeration of subsets of `[0, n]`.
//! - [`fringe`]: the fringe pair construction and density estimates.

mod bits;
pub mod error;
pub mod family;
pub mod fringe;
pub mod scd;
pub mod search;
pub mod setcore;
pub mod theorems;

pub use bits::BitSet;
pub use error::{Error, Result};
pub use scd::Scd;
pub use setcore::{Classification, IntegerSet, SetKind, SignedIntegerSet};
