//! Weighted elections with top-truncated ballots.
//!
//! A top-truncated ballot (a "top order") ranks a non-empty subset of the
//! candidates; every unranked candidate is tied with the other unranked ones
//! and sits below all ranked candidates. This crate provides:
//!
//! - winner determination for positional scoring rules under the round-up,
//!   round-down and average evaluation schemes, scoring elimination rules,
//!   plurality with runoff, Copeland^α, and maximin ([`rules`]);
//! - exact solvers for constructive, destructive and "anti" weighted
//!   coalitional manipulation: polynomial fast paths, exhaustive search, and
//!   pseudo-polynomial dynamic programming for the hard 3-candidate cases
//!   ([`manipulation`]);
//! - generators for the hardness-reduction instances that witness the
//!   NP-complete cases, together with independent number-theoretic oracles
//!   and a biconditional verifier ([`reductions`]);
//! - possible-winner evaluation over partially revealed ballots, zero-cost
//!   extension bribery, and exact probabilistic evaluation when only a
//!   distribution over the votes is known ([`uncertainty`]).
//!
//! All scoring arithmetic is exact: weights are integers and scores are
//! rationals. No floating point is used anywhere.

pub mod ballot;
pub mod classify;
pub mod error;
pub mod gen;
pub mod manipulation;
pub mod rational;
pub mod reductions;
pub mod rules;
pub mod uncertainty;

pub use ballot::{
    canonicalize_ballot, enumerate_ballots, CandidateId, Profile, TieBreak, TopOrder,
    WeightedVote, WinnerModel,
};
pub use error::{Error, Result};
pub use rational::{int, rat, Rational};
