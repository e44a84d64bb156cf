//! Ballot and profile data model.
//!
//! The election is a pair of a candidate set and a list of weighted votes.
//! Every vote is a [`TopOrder`]: a linear order over a non-empty subset of
//! the candidates, with the unranked candidates tied with each other below
//! all ranked ones. Weights are non-negative integers; a weight of 0 is legal
//! (the uncertainty reductions add weight-0 manipulators) and never affects
//! any score.

use std::fmt;

use crate::error::{Error, Result};

/// A candidate, identified by its dense index within a profile.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub u32);

impl CandidateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A voter's ranked prefix over the candidates: a linear order over a
/// non-empty subset, with every unranked candidate tied below the ranked
/// ones.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TopOrder {
    ranked: Vec<CandidateId>,
}

impl TopOrder {
    /// Builds a top order over `m` candidates, rejecting empty ballots,
    /// duplicates and out-of-range indices.
    pub fn new(ranked: Vec<CandidateId>, m: usize) -> Result<Self> {
        if ranked.is_empty() {
            return Err(Error::InvalidBallot("ballot must rank at least one candidate".into()));
        }
        let mut seen = vec![false; m];
        for c in &ranked {
            let idx = c.index();
            if idx >= m {
                return Err(Error::InvalidBallot(format!(
                    "candidate index {idx} out of range for {m} candidates"
                )));
            }
            if seen[idx] {
                return Err(Error::InvalidBallot(format!("duplicate candidate index {idx}")));
            }
            seen[idx] = true;
        }
        Ok(TopOrder { ranked })
    }

    /// Convenience constructor from raw indices.
    pub fn from_indices(ranked: &[u32], m: usize) -> Result<Self> {
        Self::new(ranked.iter().map(|&i| CandidateId(i)).collect(), m)
    }

    pub fn ranked(&self) -> &[CandidateId] {
        &self.ranked
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty ballots
    }

    pub fn is_complete(&self, m: usize) -> bool {
        self.ranked.len() == m
    }

    /// Position of `c` in the ranking (0-based), if ranked.
    pub fn position(&self, c: CandidateId) -> Option<usize> {
        self.ranked.iter().position(|&x| x == c)
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        self.position(c).is_some()
    }
}

impl fmt::Debug for TopOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.ranked.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

/// A ballot together with its voter's non-negative integer weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedVote {
    pub ballot: TopOrder,
    pub weight: i64,
}

impl WeightedVote {
    pub fn new(ballot: TopOrder, weight: i64) -> Result<Self> {
        if weight < 0 {
            return Err(Error::ConstraintViolation(format!(
                "vote weight must be non-negative, got {weight}"
            )));
        }
        Ok(WeightedVote { ballot, weight })
    }
}

/// The election `E = (C, V)`: a candidate set plus weighted votes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    names: Vec<String>,
    votes: Vec<WeightedVote>,
}

impl Profile {
    /// Builds a profile with explicit candidate names. Every ballot must
    /// reference only this profile's candidates.
    pub fn new(names: Vec<String>, votes: Vec<WeightedVote>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::ConstraintViolation("a profile needs at least one candidate".into()));
        }
        let m = names.len();
        for v in &votes {
            validate_ballot(&v.ballot, m)?;
            if v.weight < 0 {
                return Err(Error::ConstraintViolation("negative vote weight".into()));
            }
        }
        Ok(Profile { names, votes })
    }

    /// Builds a profile with placeholder names `c1..cm`.
    pub fn unnamed(m: usize, votes: Vec<WeightedVote>) -> Result<Self> {
        Self::new((1..=m).map(|i| format!("c{i}")).collect(), votes)
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn votes(&self) -> &[WeightedVote] {
        &self.votes
    }

    /// In-place access for the exhaustive solver, which rewrites manipulator
    /// ballot slots instead of rebuilding the profile per assignment.
    pub(crate) fn votes_mut(&mut self) -> &mut [WeightedVote] {
        &mut self.votes
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.names.len() as u32).map(CandidateId)
    }

    pub fn total_weight(&self) -> i64 {
        self.votes.iter().map(|v| v.weight).sum()
    }

    /// The same profile with every ballot canonicalized.
    pub fn canonicalized(&self) -> Profile {
        let m = self.m();
        Profile {
            names: self.names.clone(),
            votes: self
                .votes
                .iter()
                .map(|v| WeightedVote {
                    ballot: canonicalize_ballot(&v.ballot, m).expect("profile ballots are valid"),
                    weight: v.weight,
                })
                .collect(),
        }
    }

    /// Extends the profile with further votes (used to replay manipulation
    /// witnesses through winner determination).
    pub fn with_votes(&self, extra: &[WeightedVote]) -> Result<Profile> {
        let mut votes = self.votes.clone();
        votes.extend_from_slice(extra);
        Profile::new(self.names.clone(), votes)
    }
}

fn validate_ballot(ballot: &TopOrder, m: usize) -> Result<()> {
    // TopOrder::new already validated against *some* m; re-check the range
    // against this profile's m.
    let mut seen = vec![false; m];
    for c in ballot.ranked() {
        if c.index() >= m {
            return Err(Error::InvalidBallot(format!(
                "candidate index {} out of range for {m} candidates",
                c.index()
            )));
        }
        if seen[c.index()] {
            return Err(Error::InvalidBallot(format!("duplicate candidate index {}", c.index())));
        }
        seen[c.index()] = true;
    }
    Ok(())
}

/// Whether the target must be *a* winner or *the* winner.
///
/// `NonUnique` is the standard model everywhere in this crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WinnerModel {
    #[default]
    NonUnique,
    Unique,
}

/// How score ties are resolved when an elimination-style rule has to pick a
/// candidate to remove.
///
/// `Lexicographic` eliminates the tied candidate with the largest index and
/// is fully deterministic. `Optimistic` asks whether *some* resolution of
/// every tie achieves the goal at hand, `Pessimistic` whether *every*
/// resolution does. Score-based rules never consult this.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    Lexicographic,
    Optimistic,
    Pessimistic,
}

/// Normalizes a ballot: ranking `m - 1` candidates determines the full order
/// under every rule and scheme, so such ballots are completed by appending
/// the unique missing candidate. All other ballots are returned unchanged.
pub fn canonicalize_ballot(ballot: &TopOrder, m: usize) -> Result<TopOrder> {
    validate_ballot(ballot, m)?;
    if ballot.len() + 1 != m {
        return Ok(ballot.clone());
    }
    let mut seen = vec![false; m];
    for c in ballot.ranked() {
        seen[c.index()] = true;
    }
    let missing = seen.iter().position(|&s| !s).expect("exactly one candidate is missing");
    let mut ranked = ballot.ranked().to_vec();
    ranked.push(CandidateId(missing as u32));
    TopOrder::new(ranked, m)
}

/// Enumerates every canonical top order over `m` candidates exactly once:
/// all top orders of length `1..=m-2` plus all `m!` complete orders, in
/// order of increasing length and lexicographic within a length.
pub fn enumerate_ballots(m: usize) -> Vec<TopOrder> {
    assert!(m >= 1, "need at least one candidate");
    let mut out = Vec::new();
    for k in 1..=m {
        if k + 1 == m {
            continue; // length m-1 ballots canonicalize to complete orders
        }
        let mut prefix = Vec::with_capacity(k);
        let mut used = vec![false; m];
        arrangements(m, k, &mut prefix, &mut used, &mut out);
    }
    out
}

fn arrangements(
    m: usize,
    k: usize,
    prefix: &mut Vec<CandidateId>,
    used: &mut Vec<bool>,
    out: &mut Vec<TopOrder>,
) {
    if prefix.len() == k {
        out.push(TopOrder { ranked: prefix.clone() });
        return;
    }
    for i in 0..m {
        if !used[i] {
            used[i] = true;
            prefix.push(CandidateId(i as u32));
            arrangements(m, k, prefix, used, out);
            prefix.pop();
            used[i] = false;
        }
    }
}

/// All `m!` complete orders, lexicographic.
pub fn complete_orders(m: usize) -> Vec<TopOrder> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    let mut used = vec![false; m];
    arrangements(m, m, &mut prefix, &mut used, &mut out);
    out
}

/// A complete order that starts with `first` (if given), ends with `last`
/// (if given), and fills the middle with the remaining candidates in index
/// order. Several fast-path solvers build their witnesses this way.
pub fn complete_order_with(m: usize, first: Option<CandidateId>, last: Option<CandidateId>) -> TopOrder {
    let mut ranked = Vec::with_capacity(m);
    if let Some(f) = first {
        ranked.push(f);
    }
    for i in 0..m as u32 {
        let c = CandidateId(i);
        if Some(c) != first && Some(c) != last {
            ranked.push(c);
        }
    }
    if let Some(l) = last {
        if Some(l) != first {
            ranked.push(l);
        }
    }
    TopOrder { ranked }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(ranked: &[u32], m: usize) -> TopOrder {
        TopOrder::from_indices(ranked, m).unwrap()
    }

    #[test]
    fn rejects_invalid_ballots() {
        assert!(matches!(TopOrder::from_indices(&[], 3), Err(Error::InvalidBallot(_))));
        assert!(matches!(TopOrder::from_indices(&[0, 0], 3), Err(Error::InvalidBallot(_))));
        assert!(matches!(TopOrder::from_indices(&[3], 3), Err(Error::InvalidBallot(_))));
    }

    #[test]
    fn canonicalize_short_ballot_unchanged() {
        // m=4, (c3,c1) ranks 2 < m-1 candidates: unchanged
        let b = order(&[2, 0], 4);
        assert_eq!(canonicalize_ballot(&b, 4).unwrap(), b);
    }

    #[test]
    fn canonicalize_completes_m_minus_one() {
        let b = order(&[0, 1], 3);
        assert_eq!(canonicalize_ballot(&b, 3).unwrap(), order(&[0, 1, 2], 3));
        let b = order(&[0], 2);
        assert_eq!(canonicalize_ballot(&b, 2).unwrap(), order(&[0, 1], 2));
    }

    #[test]
    fn enumeration_counts() {
        // count = sum_{k=1}^{m-2} m!/(m-k)! + m!
        assert_eq!(enumerate_ballots(1).len(), 1);
        assert_eq!(enumerate_ballots(2).len(), 2);
        assert_eq!(enumerate_ballots(3).len(), 9);
        assert_eq!(enumerate_ballots(4).len(), 40);
        assert_eq!(enumerate_ballots(5).len(), 5 + 20 + 60 + 120);
    }

    #[test]
    fn enumeration_is_canonical_and_distinct() {
        for m in 1..=4 {
            let all = enumerate_ballots(m);
            let mut seen = std::collections::HashSet::new();
            for b in &all {
                assert_ne!(b.len() + 1, m, "no length m-1 ballots");
                assert_eq!(&canonicalize_ballot(b, m).unwrap(), b);
                assert!(seen.insert(b.clone()), "duplicate ballot {b:?}");
            }
        }
    }

    #[test]
    fn complete_order_with_fills_index_order() {
        let o = complete_order_with(4, Some(CandidateId(2)), Some(CandidateId(1)));
        assert_eq!(o, order(&[2, 0, 3, 1], 4));
        let o = complete_order_with(3, None, Some(CandidateId(0)));
        assert_eq!(o, order(&[1, 2, 0], 3));
    }

    #[test]
    fn weight_zero_votes_are_legal() {
        let v = WeightedVote::new(order(&[0], 2), 0).unwrap();
        assert_eq!(v.weight, 0);
        assert!(WeightedVote::new(order(&[0], 2), -1).is_err());
    }
}
