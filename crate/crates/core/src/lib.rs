//! Zero-sum invariants of finite abelian groups.
//!
//! The crate computes the Davenport constant, cross numbers, the relative
//! constants `D_(d',d)(G)` and the minimal number `Γ_δ(G)` of maximal-order
//! elements in long zero-sumfree sequences. Every quantity is available both
//! as a closed form ([`formulas`]) and through an exhaustive search oracle
//! ([`search`]), so the two can be checked against each other.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel execution and wall
//! clock budgets are supplied by the caller through [`search::Runtime`].

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod constructions;
mod error;
pub mod formulas;
pub mod group;
pub mod rational;
pub mod search;
pub mod seq;
pub mod verifier;

pub use error::{BudgetLimit, Error, Result};
pub use formulas::{DivisorPair, GammaBounds};
pub use group::{AbelianGroup, GroupElement};
pub use rational::ExactRational;
pub use search::{Runtime, SearchBudget, Sequential, Witness};
pub use seq::{GSequence, OrderMode, SubsumTable};
pub use verifier::{CheckKind, CheckReport, Verdict};
