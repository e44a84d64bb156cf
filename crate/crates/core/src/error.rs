//! Error type shared by all operations in the crate.

use thiserror::Error;

use crate::reductions::NumberKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A ballot has duplicates, out-of-range candidates, or is empty.
    #[error("invalid ballot: {0}")]
    InvalidBallot(String),

    /// A scoring vector's length does not match the candidate count.
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The operation's preconditions reject this rule.
    #[error("unsupported rule for this operation: {0}")]
    UnsupportedRule(String),

    /// An exhaustive search would exceed the configured evaluation budget.
    #[error("search space of {required} evaluations exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// Partition and Fixed-Difference Subset Sum instances must sum to 2K.
    #[error("number instance must have an even sum, got {0}")]
    OddSum(u64),

    /// A reduction was fed the wrong kind of number instance.
    #[error("expected a {expected:?} instance, got a {got:?} instance")]
    WrongKind {
        expected: NumberKind,
        got: NumberKind,
    },

    /// The scoring parameters violate a reduction family's case constraints.
    #[error("rule parameters do not match the reduction family: {0}")]
    CaseMismatch(String),

    /// Clearing rational construction weights to integers overflowed the bound.
    #[error("clearing rational weights to integers exceeds the configured bound")]
    NonIntegerWeights,

    /// A domain constraint was violated (vector monotonicity, α range, ...).
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
