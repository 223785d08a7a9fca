use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which part of a [`crate::SearchBudget`] ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetLimit {
    Nodes,
    Seconds,
}

impl fmt::Display for BudgetLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetLimit::Nodes => f.write_str("node limit"),
            BudgetLimit::Seconds => f.write_str("time limit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group of order {cardinality} exceeds the cap of {cap} elements")]
    GroupTooLarge { cardinality: u64, cap: u64 },
    #[error("element has {got} coordinates but the group has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {value} at position {index} is not reduced modulo {modulus}")]
    NotAMember { index: usize, value: u64, modulus: u64 },
    #[error("operation is only defined for p-groups")]
    NotPGroup,
    #[error("the height of the zero element is undefined")]
    ZeroHeight,
    #[error("{d} does not divide the exponent {exponent}")]
    NotADivisor { d: u64, exponent: u64 },
    #[error("sequence is empty")]
    EmptySequence,
    #[error("sequence contains the zero element")]
    ZeroElement,
    #[error("invalid divisor pair d' = {d_prime}, d = {d}")]
    InvalidPair { d_prime: u64, d: u64 },
    #[error("delta {delta} is outside [0, {max}]")]
    DeltaOutOfRange { delta: u64, max: u64 },
    #[error("reduced group {factors:?} has no closed form; the search oracle is needed")]
    NeedsOracle { factors: Vec<u64> },
    #[error("j_0 = {j0} is smaller than r = {rank}; the exact formula needs j_0 = r")]
    NotApplicable { j0: usize, rank: usize },
    #[error("search budget exhausted ({limit}) after {nodes} nodes, {completed_roots}/{total_roots} subtrees finished")]
    BudgetExceeded {
        limit: BudgetLimit,
        nodes: u64,
        completed_roots: usize,
        total_roots: usize,
    },
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
