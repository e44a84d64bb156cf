//! Winner determination for all five rule families under top-truncated
//! ballots.
//!
//! Positional scoring rules evaluate a truncated ballot with one of three
//! schemes: round up (ranked candidates keep their positional scores,
//! unranked ones get the last score), round down (ranked candidates are
//! shifted towards the bottom of the vector), or average (unranked
//! candidates share the leftover scores equally). Elimination rules and
//! plurality with runoff re-score the surviving candidates each round,
//! ignoring a vote once all of its ranked candidates are eliminated.
//! Copeland^α and maximin work off the weighted pairwise comparison matrix,
//! where a vote says nothing about a pair it leaves entirely unranked.

use std::collections::BTreeSet;
use std::fmt;

use crate::ballot::{CandidateId, Profile, TieBreak, WinnerModel};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// How positional scores are assigned to a ballot that ranks only `k < m`
/// candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationScheme {
    RoundUp,
    RoundDown,
    Average,
}

impl fmt::Display for TruncationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationScheme::RoundUp => write!(f, "up"),
            TruncationScheme::RoundDown => write!(f, "down"),
            TruncationScheme::Average => write!(f, "avg"),
        }
    }
}

/// Named scoring families keep their shape when an elimination rule
/// re-instantiates the vector for a smaller candidate set; an explicit
/// vector is restricted to its first `m' - 1` entries plus its last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorFamily {
    Plurality,
    Veto,
    Borda,
    Explicit,
}

/// A positional scoring vector `α_1 ≥ α_2 ≥ … ≥ α_m ≥ 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct ScoringVector {
    family: VectorFamily,
    alphas: Vec<Rational>,
}

impl ScoringVector {
    /// `⟨1, 0, …, 0⟩`
    pub fn plurality(m: usize) -> Self {
        assert!(m >= 1);
        let mut alphas = vec![int(0); m];
        alphas[0] = int(1);
        ScoringVector { family: VectorFamily::Plurality, alphas }
    }

    /// `⟨1, …, 1, 0⟩`
    pub fn veto(m: usize) -> Self {
        assert!(m >= 1);
        let mut alphas = vec![int(1); m];
        alphas[m - 1] = int(0);
        ScoringVector { family: VectorFamily::Veto, alphas }
    }

    /// `⟨m-1, m-2, …, 0⟩`
    pub fn borda(m: usize) -> Self {
        assert!(m >= 1);
        let alphas = (0..m).map(|i| int((m - 1 - i) as i64)).collect();
        ScoringVector { family: VectorFamily::Borda, alphas }
    }

    /// An arbitrary vector; must be non-increasing with `α_m ≥ 0`.
    pub fn explicit(alphas: Vec<Rational>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::ConstraintViolation("scoring vector must be non-empty".into()));
        }
        for w in alphas.windows(2) {
            if w[0] < w[1] {
                return Err(Error::ConstraintViolation(
                    "scoring vector must be non-increasing".into(),
                ));
            }
        }
        if *alphas.last().unwrap() < int(0) {
            return Err(Error::ConstraintViolation("scoring vector entries must be ≥ 0".into()));
        }
        Ok(ScoringVector { family: VectorFamily::Explicit, alphas })
    }

    pub fn family(&self) -> VectorFamily {
        self.family
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    /// The vector this rule uses once only `m_alive` candidates remain:
    /// named families are re-instantiated at the smaller size, explicit
    /// vectors keep their first `m_alive - 1` entries plus the last one.
    pub fn restricted_to(&self, m_alive: usize) -> ScoringVector {
        assert!(m_alive >= 1 && m_alive <= self.m());
        if m_alive == self.m() {
            return self.clone();
        }
        match self.family {
            VectorFamily::Plurality => ScoringVector::plurality(m_alive),
            VectorFamily::Veto => ScoringVector::veto(m_alive),
            VectorFamily::Borda => ScoringVector::borda(m_alive),
            VectorFamily::Explicit => {
                let mut alphas: Vec<Rational> = self.alphas[..m_alive - 1].to_vec();
                alphas.push(self.alphas[self.m() - 1]);
                ScoringVector { family: VectorFamily::Explicit, alphas }
            }
        }
    }

    /// `α_1 = … = α_{m-1}`: the rule is veto up to adding a constant (or is
    /// entirely flat).
    pub fn is_veto_like(&self) -> bool {
        self.alphas[..self.m() - 1].windows(2).all(|w| w[0] == w[1])
    }

    /// `α_1 > α_2 = … = α_m`: the rule is plurality up to translation.
    pub fn is_plurality_like(&self) -> bool {
        let m = self.m();
        m >= 2
            && self.alphas[0] > self.alphas[1]
            && self.alphas[1..].windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Debug for ScoringVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.family, self.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>())
    }
}

/// Which voting rule to apply.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleSpec {
    Scoring { vector: ScoringVector, scheme: TruncationScheme },
    Eliminate { vector: ScoringVector },
    PluralityRunoff,
    Copeland { alpha: Rational },
    Maximin,
}

impl RuleSpec {
    pub fn scoring(vector: ScoringVector, scheme: TruncationScheme) -> Self {
        RuleSpec::Scoring { vector, scheme }
    }

    pub fn eliminate(vector: ScoringVector) -> Self {
        RuleSpec::Eliminate { vector }
    }

    /// Copeland with tie value `alpha`; requires `0 ≤ alpha ≤ 1`.
    pub fn copeland(alpha: Rational) -> Result<Self> {
        if alpha < int(0) || alpha > int(1) {
            return Err(Error::ConstraintViolation(format!(
                "Copeland parameter must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(RuleSpec::Copeland { alpha })
    }

    /// True for rules that assign every candidate a single numerical score.
    pub fn is_score_based(&self) -> bool {
        matches!(
            self,
            RuleSpec::Scoring { .. } | RuleSpec::Copeland { .. } | RuleSpec::Maximin
        )
    }

    pub fn describe(&self) -> String {
        match self {
            RuleSpec::Scoring { vector, scheme } => format!("scoring {vector:?} ({scheme})"),
            RuleSpec::Eliminate { vector } => format!("eliminate {vector:?}"),
            RuleSpec::PluralityRunoff => "plurality with runoff".into(),
            RuleSpec::Copeland { alpha } => format!("Copeland^{alpha}"),
            RuleSpec::Maximin => "maximin".into(),
        }
    }
}

/// Weighted pairwise comparison matrix: `support(i, j)` is the total weight
/// of votes ranking `i` above `j`. A vote that leaves both candidates
/// unranked contributes to neither direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMatrix {
    m: usize,
    n: Vec<i64>,
}

impl PairwiseMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn support(&self, i: CandidateId, j: CandidateId) -> i64 {
        self.n[i.index() * self.m + j.index()]
    }

    /// `D(i, j) = N(i, j) - N(j, i)`.
    pub fn margin(&self, i: CandidateId, j: CandidateId) -> i64 {
        self.support(i, j) - self.support(j, i)
    }
}

/// Builds the pairwise matrix of a profile. A ballot ranks `i` above `j`
/// when both are ranked in that order, or when `i` is ranked and `j` is not.
pub fn pairwise_matrix(profile: &Profile) -> PairwiseMatrix {
    let m = profile.m();
    let mut n = vec![0i64; m * m];
    let mut ranked_buf = vec![false; m];
    for vote in profile.votes() {
        let w = vote.weight;
        let ranked = vote.ballot.ranked();
        for c in ranked {
            ranked_buf[c.index()] = true;
        }
        for (a_pos, a) in ranked.iter().enumerate() {
            for b in &ranked[a_pos + 1..] {
                n[a.index() * m + b.index()] += w;
            }
            for u in 0..m {
                if !ranked_buf[u] {
                    n[a.index() * m + u] += w;
                }
            }
        }
        for c in ranked {
            ranked_buf[c.index()] = false;
        }
    }
    PairwiseMatrix { m, n }
}

/// Positional scores of every candidate under `vector` and `scheme`,
/// indexed by candidate.
pub fn positional_scores(
    profile: &Profile,
    vector: &ScoringVector,
    scheme: TruncationScheme,
) -> Result<Vec<Rational>> {
    let m = profile.m();
    if vector.m() != m {
        return Err(Error::DimensionMismatch { expected: m, got: vector.m() });
    }
    let alphas = vector.alphas();
    let mut scores = vec![int(0); m];
    let mut ranked_buf = vec![false; m];
    for vote in profile.votes() {
        let w = int(vote.weight);
        let ranked = vote.ballot.ranked();
        let k = ranked.len();
        for c in ranked {
            ranked_buf[c.index()] = true;
        }
        // ranked candidates
        for (i, c) in ranked.iter().enumerate() {
            let alpha = match scheme {
                TruncationScheme::RoundUp | TruncationScheme::Average => alphas[i],
                TruncationScheme::RoundDown => {
                    if k == m {
                        alphas[i]
                    } else {
                        alphas[m - k + i - 1]
                    }
                }
            };
            scores[c.index()] += alpha * w;
        }
        // unranked candidates
        if k < m {
            let unranked_alpha = match scheme {
                TruncationScheme::RoundUp | TruncationScheme::RoundDown => alphas[m - 1],
                TruncationScheme::Average => {
                    let tail: Rational = alphas[k..].iter().sum();
                    tail / int((m - k) as i64)
                }
            };
            for u in 0..m {
                if !ranked_buf[u] {
                    scores[u] += unranked_alpha * w;
                }
            }
        }
        for c in ranked {
            ranked_buf[c.index()] = false;
        }
    }
    Ok(scores)
}

/// Copeland^α scores: 1 per strict pairwise win by weight, α per tie
/// (including the tie of two mutually unranked candidates), 0 per loss.
fn copeland_scores(profile: &Profile, alpha: Rational) -> Result<Vec<Rational>> {
    if alpha < int(0) || alpha > int(1) {
        return Err(Error::ConstraintViolation(format!(
            "Copeland parameter must lie in [0, 1], got {alpha}"
        )));
    }
    let m = profile.m();
    let matrix = pairwise_matrix(profile);
    let mut scores = vec![int(0); m];
    for (i, score) in scores.iter_mut().enumerate() {
        for j in 0..m {
            if i == j {
                continue;
            }
            let d = matrix.margin(CandidateId(i as u32), CandidateId(j as u32));
            if d > 0 {
                *score += int(1);
            } else if d == 0 {
                *score += alpha;
            }
        }
    }
    Ok(scores)
}

/// Maximin scores: `s_i = min_{j≠i} N(i, j)`.
fn maximin_scores(profile: &Profile) -> Vec<Rational> {
    let m = profile.m();
    if m == 1 {
        return vec![int(0)];
    }
    let matrix = pairwise_matrix(profile);
    (0..m)
        .map(|i| {
            let min = (0..m)
                .filter(|&j| j != i)
                .map(|j| matrix.support(CandidateId(i as u32), CandidateId(j as u32)))
                .min()
                .expect("m >= 2");
            int(min)
        })
        .collect()
}

/// Scores for the score-based rules. Elimination rules and plurality with
/// runoff have no single score map and are rejected.
pub fn rule_scores(profile: &Profile, rule: &RuleSpec) -> Result<Vec<Rational>> {
    match rule {
        RuleSpec::Scoring { vector, scheme } => positional_scores(profile, vector, *scheme),
        RuleSpec::Copeland { alpha } => copeland_scores(profile, *alpha),
        RuleSpec::Maximin => Ok(maximin_scores(profile)),
        RuleSpec::Eliminate { .. } | RuleSpec::PluralityRunoff => {
            Err(Error::UnsupportedRule(format!("{} has no score map", rule.describe())))
        }
    }
}

pub(crate) fn argmax_set(scores: &[Rational]) -> BTreeSet<CandidateId> {
    let max = scores.iter().max().expect("non-empty");
    scores
        .iter()
        .enumerate()
        .filter(|(_, s)| *s == max)
        .map(|(i, _)| CandidateId(i as u32))
        .collect()
}

fn argmin_alive(scores: &[Rational], alive: &[bool]) -> Vec<usize> {
    let min = scores
        .iter()
        .zip(alive)
        .filter(|(_, &a)| a)
        .map(|(s, _)| s)
        .min()
        .expect("at least one alive candidate");
    (0..scores.len()).filter(|&i| alive[i] && scores[i] == *min).collect()
}

/// Scores of the surviving candidates for one elimination round, using the
/// round-up analog: the induced order of survivors is scored positionally
/// and unranked survivors get the last entry; a vote none of whose ranked
/// candidates survives is ignored.
fn round_scores(profile: &Profile, alive: &[bool], vector: &ScoringVector) -> Vec<Rational> {
    let m = profile.m();
    let m_alive = alive.iter().filter(|&&a| a).count();
    let round_vector = vector.restricted_to(m_alive);
    let alphas = round_vector.alphas();
    let mut scores = vec![int(0); m];
    let mut scored = vec![false; m];
    for vote in profile.votes() {
        let w = int(vote.weight);
        let mut pos = 0usize;
        for c in vote.ballot.ranked() {
            if alive[c.index()] {
                scores[c.index()] += alphas[pos] * w;
                scored[c.index()] = true;
                pos += 1;
            }
        }
        if pos == 0 {
            continue; // vote is exhausted: all its candidates are eliminated
        }
        for u in 0..m {
            if alive[u] && !scored[u] {
                scores[u] += alphas[m_alive - 1] * w;
            }
        }
        scored.fill(false);
    }
    scores
}

/// One complete tie-resolution branch of an elimination run.
#[derive(Clone, Debug)]
pub struct EliminationBranch {
    pub order: Vec<CandidateId>,
    pub survivor: CandidateId,
}

/// All tie-resolution branches of eliminate(`vector`). Under
/// `Lexicographic` there is exactly one branch (ties eliminate the largest
/// index); under `Optimistic`/`Pessimistic` every resolution of every tie
/// is explored.
pub fn elimination_branches(
    profile: &Profile,
    vector: &ScoringVector,
    tiebreak: TieBreak,
) -> Result<Vec<EliminationBranch>> {
    let m = profile.m();
    if vector.m() != m {
        return Err(Error::DimensionMismatch { expected: m, got: vector.m() });
    }
    let mut branches = Vec::new();
    let mut alive = vec![true; m];
    let mut order = Vec::new();
    explore_elimination(profile, vector, tiebreak, &mut alive, &mut order, &mut branches);
    Ok(branches)
}

fn explore_elimination(
    profile: &Profile,
    vector: &ScoringVector,
    tiebreak: TieBreak,
    alive: &mut Vec<bool>,
    order: &mut Vec<CandidateId>,
    branches: &mut Vec<EliminationBranch>,
) {
    let survivors: Vec<usize> = (0..alive.len()).filter(|&i| alive[i]).collect();
    if survivors.len() == 1 {
        branches.push(EliminationBranch {
            order: order.clone(),
            survivor: CandidateId(survivors[0] as u32),
        });
        return;
    }
    let scores = round_scores(profile, alive, vector);
    let lowest = argmin_alive(&scores, alive);
    let choices: Vec<usize> = match tiebreak {
        TieBreak::Lexicographic => vec![*lowest.last().expect("non-empty")],
        TieBreak::Optimistic | TieBreak::Pessimistic => lowest,
    };
    for out in choices {
        alive[out] = false;
        order.push(CandidateId(out as u32));
        explore_elimination(profile, vector, tiebreak, alive, order, branches);
        order.pop();
        alive[out] = true;
    }
}

/// Runs eliminate(`vector`) and folds the branches: `Lexicographic` yields
/// the single branch's order and survivor; `Optimistic`/`Pessimistic` yield
/// the candidates that survive under some/every tie resolution (the
/// returned order is that of the first branch and is meaningful only under
/// `Lexicographic`).
pub fn run_elimination(
    profile: &Profile,
    vector: &ScoringVector,
    tiebreak: TieBreak,
) -> Result<(Vec<CandidateId>, BTreeSet<CandidateId>)> {
    let branches = elimination_branches(profile, vector, tiebreak)?;
    let sets: Vec<BTreeSet<CandidateId>> =
        branches.iter().map(|b| BTreeSet::from([b.survivor])).collect();
    let winners = fold_branch_sets(&sets, tiebreak);
    Ok((branches[0].order.clone(), winners))
}

fn fold_branch_sets(sets: &[BTreeSet<CandidateId>], tiebreak: TieBreak) -> BTreeSet<CandidateId> {
    match tiebreak {
        TieBreak::Lexicographic => sets[0].clone(),
        TieBreak::Optimistic => sets.iter().flatten().copied().collect(),
        TieBreak::Pessimistic => sets
            .iter()
            .skip(1)
            .fold(sets[0].clone(), |acc, s| acc.intersection(s).copied().collect()),
    }
}

/// Winner sets of plurality with runoff, one per achievable choice of the
/// surviving pair. An exact tie in the head-to-head round makes both
/// finalists winners of that branch.
pub fn runoff_branches(profile: &Profile, tiebreak: TieBreak) -> Result<Vec<BTreeSet<CandidateId>>> {
    let m = profile.m();
    if m == 1 {
        return Ok(vec![BTreeSet::from([CandidateId(0)])]);
    }
    let scores = positional_scores(profile, &ScoringVector::plurality(m), TruncationScheme::RoundUp)?;
    let pairs: Vec<(usize, usize)> = match tiebreak {
        TieBreak::Lexicographic => {
            // keep the top two by (score desc, index asc): ties eliminate the
            // largest index first
            let mut by_rank: Vec<usize> = (0..m).collect();
            by_rank.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
            vec![(by_rank[0].min(by_rank[1]), by_rank[0].max(by_rank[1]))]
        }
        TieBreak::Optimistic | TieBreak::Pessimistic => {
            let mut pairs = Vec::new();
            for x in 0..m {
                for y in x + 1..m {
                    let threshold = scores[x].min(scores[y]);
                    if (0..m).all(|z| z == x || z == y || scores[z] <= threshold) {
                        pairs.push((x, y));
                    }
                }
            }
            pairs
        }
    };
    Ok(pairs
        .into_iter()
        .map(|(x, y)| head_to_head(profile, CandidateId(x as u32), CandidateId(y as u32)))
        .collect())
}

/// Majority between `x` and `y` on the induced two-candidate profile; votes
/// ranking neither are ignored and an exact tie returns both.
fn head_to_head(profile: &Profile, x: CandidateId, y: CandidateId) -> BTreeSet<CandidateId> {
    let mut wx = 0i64;
    let mut wy = 0i64;
    for vote in profile.votes() {
        for c in vote.ballot.ranked() {
            if *c == x {
                wx += vote.weight;
                break;
            }
            if *c == y {
                wy += vote.weight;
                break;
            }
        }
    }
    match wx.cmp(&wy) {
        std::cmp::Ordering::Greater => BTreeSet::from([x]),
        std::cmp::Ordering::Less => BTreeSet::from([y]),
        std::cmp::Ordering::Equal => BTreeSet::from([x, y]),
    }
}

/// Plurality-with-runoff winners folded over the achievable pairs per the
/// tie-break policy.
pub fn runoff_winners(profile: &Profile, tiebreak: TieBreak) -> Result<BTreeSet<CandidateId>> {
    let sets = runoff_branches(profile, tiebreak)?;
    Ok(fold_branch_sets(&sets, tiebreak))
}

/// The winner set of each tie-resolution branch. Score-based rules have a
/// single branch: the argmax set of their scores.
pub fn branch_winner_sets(
    profile: &Profile,
    rule: &RuleSpec,
    tiebreak: TieBreak,
) -> Result<Vec<BTreeSet<CandidateId>>> {
    match rule {
        RuleSpec::Scoring { .. } | RuleSpec::Copeland { .. } | RuleSpec::Maximin => {
            Ok(vec![argmax_set(&rule_scores(profile, rule)?)])
        }
        RuleSpec::Eliminate { vector } => Ok(elimination_branches(profile, vector, tiebreak)?
            .into_iter()
            .map(|b| BTreeSet::from([b.survivor]))
            .collect()),
        RuleSpec::PluralityRunoff => runoff_branches(profile, tiebreak),
    }
}

/// The winner set under `rule`, folded per the winner model and tie-break
/// policy. Under the unique model only branches with a single winner count,
/// so an exact tie yields the empty set.
pub fn winners(
    profile: &Profile,
    rule: &RuleSpec,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> Result<BTreeSet<CandidateId>> {
    let mut sets = branch_winner_sets(profile, rule, tiebreak)?;
    if model == WinnerModel::Unique {
        for s in &mut sets {
            if s.len() != 1 {
                s.clear();
            }
        }
    }
    Ok(fold_branch_sets(&sets, tiebreak))
}
