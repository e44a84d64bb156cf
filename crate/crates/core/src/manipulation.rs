//! Coalitional manipulation solvers.
//!
//! An instance fixes the non-manipulators' weighted votes `S`, the weights of
//! the manipulators `T`, and a goal: make `p` win (constructive), make `h`
//! lose (destructive), or give `d` the lowest score (anti). [`solve_brute`]
//! is the ground-truth oracle: it exhaustively assigns every manipulator a
//! canonical ballot. The polynomial fast paths ([`cwcm_fast`], [`dwcm_fast`],
//! [`antiwcm_fast`], [`cwcm_eliminate_veto_unique`]) each try the single
//! candidate-specific witness that is provably optimal for their rule, and
//! [`solve_dp3`] is an exact pseudo-polynomial dynamic program for the hard
//! 3-candidate scoring and Copeland cases.

use std::collections::BTreeMap;

use crate::ballot::{
    complete_order_with, complete_orders, enumerate_ballots, CandidateId, Profile, TieBreak,
    TopOrder, WeightedVote, WinnerModel,
};
use crate::error::{Error, Result};
use crate::rational::{clear_to_integer, denominator_lcm, int, Rational};
use crate::rules::{
    branch_winner_sets, pairwise_matrix, positional_scores, rule_scores, RuleSpec, ScoringVector,
    TruncationScheme,
};

/// What the manipulators are trying to achieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    /// Make `p` a winner (the winner, under the unique model).
    Constructive(CandidateId),
    /// Make sure `h` does not win.
    Destructive(CandidateId),
    /// Give `d` the (strictly, by default) lowest score. Score-based rules
    /// only.
    AntiLowest { disliked: CandidateId, strict: bool },
}

impl Goal {
    pub fn anti(disliked: CandidateId) -> Self {
        Goal::AntiLowest { disliked, strict: true }
    }

    pub fn target(&self) -> CandidateId {
        match *self {
            Goal::Constructive(c) | Goal::Destructive(c) => c,
            Goal::AntiLowest { disliked, .. } => disliked,
        }
    }
}

/// A coalitional manipulation problem: fixed votes `S`, manipulator weights
/// `T`, and the goal, rule, winner model and tie-break policy to use.
#[derive(Clone, Debug)]
pub struct ManipulationInstance {
    pub m: usize,
    pub fixed: Vec<WeightedVote>,
    pub manipulator_weights: Vec<i64>,
    pub goal: Goal,
    pub rule: RuleSpec,
    pub model: WinnerModel,
    pub tiebreak: TieBreak,
}

impl ManipulationInstance {
    pub fn new(
        m: usize,
        fixed: Vec<WeightedVote>,
        manipulator_weights: Vec<i64>,
        goal: Goal,
        rule: RuleSpec,
        model: WinnerModel,
        tiebreak: TieBreak,
    ) -> Result<Self> {
        if goal.target().index() >= m {
            return Err(Error::ConstraintViolation(format!(
                "goal candidate {} out of range for {m} candidates",
                goal.target().index()
            )));
        }
        if manipulator_weights.iter().any(|&w| w < 0) {
            return Err(Error::ConstraintViolation("negative manipulator weight".into()));
        }
        // Profile construction validates the fixed ballots against m.
        Profile::unnamed(m, fixed.clone())?;
        Ok(ManipulationInstance { m, fixed, manipulator_weights, goal, rule, model, tiebreak })
    }

    /// The non-manipulators' profile.
    pub fn fixed_profile(&self) -> Profile {
        Profile::unnamed(self.m, self.fixed.clone()).expect("validated at construction")
    }

    /// The full profile once each manipulator casts the corresponding ballot.
    pub fn profile_with(&self, ballots: &[TopOrder]) -> Result<Profile> {
        if ballots.len() != self.manipulator_weights.len() {
            return Err(Error::ConstraintViolation(format!(
                "expected {} manipulator ballots, got {}",
                self.manipulator_weights.len(),
                ballots.len()
            )));
        }
        let extra: Vec<WeightedVote> = ballots
            .iter()
            .zip(&self.manipulator_weights)
            .map(|(b, &w)| WeightedVote { ballot: b.clone(), weight: w })
            .collect();
        self.fixed_profile().with_votes(&extra)
    }

    /// Replays a candidate witness through winner determination.
    pub fn check_witness(&self, ballots: &[TopOrder]) -> Result<bool> {
        let profile = self.profile_with(ballots)?;
        goal_satisfied(&profile, &self.rule, &self.goal, self.model, self.tiebreak)
    }

    pub fn total_weight(&self) -> i64 {
        self.fixed.iter().map(|v| v.weight).sum::<i64>()
            + self.manipulator_weights.iter().sum::<i64>()
    }
}

/// The answer of a solver: whether the goal is achievable and, if so, one
/// ballot per manipulator achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationOutcome {
    pub feasible: bool,
    pub witness: Option<Vec<TopOrder>>,
}

impl ManipulationOutcome {
    fn infeasible() -> Self {
        ManipulationOutcome { feasible: false, witness: None }
    }

    fn feasible_with(witness: Vec<TopOrder>) -> Self {
        ManipulationOutcome { feasible: true, witness: Some(witness) }
    }
}

/// Whether `goal` holds for this profile.
///
/// For elimination-style rules the tie-break policy quantifies over the
/// goal: `Optimistic` asks for some tie resolution achieving it,
/// `Pessimistic` for all of them. Note that for a destructive goal this is
/// *not* the same as consulting the folded winner set: "every resolution
/// makes `h` lose" means `h` wins in no branch.
pub fn goal_satisfied(
    profile: &Profile,
    rule: &RuleSpec,
    goal: &Goal,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> Result<bool> {
    if let Goal::AntiLowest { disliked, strict } = goal {
        let scores = rule_scores(profile, rule)?;
        let d = disliked.index();
        return Ok(scores.iter().enumerate().all(|(c, s)| {
            c == d || if *strict { *s > scores[d] } else { *s >= scores[d] }
        }));
    }
    let sets = branch_winner_sets(profile, rule, tiebreak)?;
    let holds = |set: &std::collections::BTreeSet<CandidateId>| match (goal, model) {
        (Goal::Constructive(p), WinnerModel::NonUnique) => set.contains(p),
        (Goal::Constructive(p), WinnerModel::Unique) => set.len() == 1 && set.contains(p),
        (Goal::Destructive(h), WinnerModel::NonUnique) => !set.contains(h),
        (Goal::Destructive(h), WinnerModel::Unique) => !(set.len() == 1 && set.contains(h)),
        (Goal::AntiLowest { .. }, _) => unreachable!("handled above"),
    };
    Ok(match tiebreak {
        TieBreak::Lexicographic => holds(&sets[0]),
        TieBreak::Optimistic => sets.iter().any(holds),
        TieBreak::Pessimistic => sets.iter().all(holds),
    })
}

/// Default cap on the number of goal evaluations an exhaustive search may
/// perform.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Options for the exhaustive solver.
#[derive(Clone, Debug)]
pub struct BruteOptions {
    /// Upper bound on the number of goal evaluations.
    pub budget: u64,
    /// Restrict the manipulators to complete orders (used by the
    /// truncation-invariance checks).
    pub complete_only: bool,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions { budget: DEFAULT_BUDGET, complete_only: false }
    }
}

/// Exhaustive ground-truth solver: assigns every manipulator each canonical
/// ballot in turn and reports the first satisfying assignment.
///
/// Manipulators of equal weight are interchangeable, so the search runs over
/// multisets of ballots per weight class; the reported witness is the first
/// satisfying assignment in that fixed enumeration order.
pub fn solve_brute(instance: &ManipulationInstance) -> Result<ManipulationOutcome> {
    solve_brute_opts(instance, &BruteOptions::default())
}

pub fn solve_brute_opts(
    instance: &ManipulationInstance,
    opts: &BruteOptions,
) -> Result<ManipulationOutcome> {
    if matches!(instance.goal, Goal::AntiLowest { .. }) && !instance.rule.is_score_based() {
        return Err(Error::UnsupportedRule(format!(
            "anti manipulation needs a score-based rule, got {}",
            instance.rule.describe()
        )));
    }
    let m = instance.m;
    let ballots = if opts.complete_only { complete_orders(m) } else { enumerate_ballots(m) };

    // Group manipulators by weight; weight-0 manipulators never affect the
    // outcome and are pinned to the first ballot.
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (idx, &w) in instance.manipulator_weights.iter().enumerate() {
        if w > 0 {
            groups.entry(w).or_default().push(idx);
        }
    }
    let group_list: Vec<(i64, Vec<usize>)> = groups.into_iter().collect();

    let required = assignment_count(ballots.len(), group_list.iter().map(|(_, g)| g.len()));
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: opts.budget });
    }

    let slot_weights: Vec<i64> = group_list
        .iter()
        .flat_map(|(w, members)| std::iter::repeat_n(*w, members.len()))
        .collect();
    let mut checker = build_checker(instance, &ballots, &slot_weights)?;

    let group_sizes: Vec<usize> = group_list.iter().map(|(_, g)| g.len()).collect();
    let mut assignment = vec![0usize; slot_weights.len()];
    let found = enumerate_multiset_assignments(
        &group_sizes,
        ballots.len(),
        &mut assignment,
        0,
        0,
        0,
        &mut |assignment| checker.feasible(assignment),
    );

    if !found {
        return Ok(ManipulationOutcome::infeasible());
    }
    // Map the flat slot assignment back to the original manipulator order.
    let mut witness = vec![ballots[0].clone(); instance.manipulator_weights.len()];
    let mut slot = 0;
    for (_, members) in &group_list {
        for &orig in members {
            witness[orig] = ballots[assignment[slot]].clone();
            slot += 1;
        }
    }
    debug_assert_eq!(instance.check_witness(&witness), Ok(true));
    Ok(ManipulationOutcome::feasible_with(witness))
}

fn assignment_count(ballot_count: usize, group_sizes: impl Iterator<Item = usize>) -> u128 {
    let mut total: u128 = 1;
    for g in group_sizes {
        // multisets of size g over ballot_count choices
        let mut c: u128 = 1;
        for i in 0..g {
            c = c.saturating_mul((ballot_count + i) as u128) / (i as u128 + 1);
        }
        total = total.saturating_mul(c);
        if total > u64::MAX as u128 {
            return total;
        }
    }
    total
}

/// Depth-first enumeration of per-group non-decreasing ballot assignments;
/// stops early when `leaf` reports success.
fn enumerate_multiset_assignments(
    group_sizes: &[usize],
    ballot_count: usize,
    assignment: &mut Vec<usize>,
    group: usize,
    slot_in_group: usize,
    slot: usize,
    leaf: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if group == group_sizes.len() {
        return leaf(assignment);
    }
    if slot_in_group == group_sizes[group] {
        return enumerate_multiset_assignments(
            group_sizes,
            ballot_count,
            assignment,
            group + 1,
            0,
            slot,
            leaf,
        );
    }
    let min_ballot = if slot_in_group == 0 { 0 } else { assignment[slot - 1] };
    for b in min_ballot..ballot_count {
        assignment[slot] = b;
        if enumerate_multiset_assignments(
            group_sizes,
            ballot_count,
            assignment,
            group,
            slot_in_group + 1,
            slot + 1,
            leaf,
        ) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Leaf checkers: evaluate one full assignment of manipulator ballots.
//
// Scoring, Copeland and maximin instances are evaluated on integers after
// clearing all rationals to a common denominator; 3-candidate eliminations
// get a specialized two-round evaluator. Everything else replays the profile
// through the generic goal check.
// ---------------------------------------------------------------------------

enum LeafChecker {
    Positional(PositionalChecker),
    Margins(MarginsChecker),
    Support(SupportChecker),
    Eliminate3(Eliminate3Checker),
    Generic(GenericChecker),
}

impl LeafChecker {
    fn feasible(&mut self, assignment: &[usize]) -> bool {
        match self {
            LeafChecker::Positional(c) => c.feasible(assignment),
            LeafChecker::Margins(c) => c.feasible(assignment),
            LeafChecker::Support(c) => c.feasible(assignment),
            LeafChecker::Eliminate3(c) => c.feasible(assignment),
            LeafChecker::Generic(c) => c.feasible(assignment),
        }
    }
}

fn build_checker(
    instance: &ManipulationInstance,
    ballots: &[TopOrder],
    slot_weights: &[i64],
) -> Result<LeafChecker> {
    Ok(match &instance.rule {
        RuleSpec::Scoring { vector, scheme } => LeafChecker::Positional(PositionalChecker::new(
            instance,
            vector,
            *scheme,
            ballots,
            slot_weights,
        )?),
        RuleSpec::Copeland { alpha } => {
            LeafChecker::Margins(MarginsChecker::new(instance, *alpha, ballots, slot_weights))
        }
        RuleSpec::Maximin => {
            LeafChecker::Support(SupportChecker::new(instance, ballots, slot_weights))
        }
        RuleSpec::Eliminate { vector } if instance.m == 3 => LeafChecker::Eliminate3(
            Eliminate3Checker::new(instance, vector, ballots, slot_weights)?,
        ),
        _ => LeafChecker::Generic(GenericChecker::new(instance, ballots, slot_weights)?),
    })
}

/// Goal check over one integer score per candidate.
fn int_score_goal_holds(scores: &[i64], goal: &Goal, model: WinnerModel) -> bool {
    match *goal {
        Goal::Constructive(p) => {
            let sp = scores[p.index()];
            match model {
                WinnerModel::NonUnique => scores.iter().all(|&s| s <= sp),
                WinnerModel::Unique => {
                    scores.iter().enumerate().all(|(c, &s)| c == p.index() || s < sp)
                }
            }
        }
        Goal::Destructive(h) => {
            let sh = scores[h.index()];
            let best_other =
                scores.iter().enumerate().filter(|(c, _)| *c != h.index()).map(|(_, &s)| s).max();
            match (best_other, model) {
                (None, _) => false, // h is the only candidate
                (Some(b), WinnerModel::NonUnique) => b > sh,
                (Some(b), WinnerModel::Unique) => b >= sh,
            }
        }
        Goal::AntiLowest { disliked, strict } => {
            let sd = scores[disliked.index()];
            scores.iter().enumerate().all(|(c, &s)| {
                c == disliked.index() || if strict { s > sd } else { s >= sd }
            })
        }
    }
}

struct PositionalChecker {
    base: Vec<i64>,
    contrib: Vec<Vec<i64>>, // per ballot, per candidate, unit weight, cleared
    slot_weights: Vec<i64>,
    goal: Goal,
    model: WinnerModel,
    scores: Vec<i64>,
}

impl PositionalChecker {
    fn new(
        instance: &ManipulationInstance,
        vector: &ScoringVector,
        scheme: TruncationScheme,
        ballots: &[TopOrder],
        slot_weights: &[i64],
    ) -> Result<Self> {
        let m = instance.m;
        let fixed = instance.fixed_profile();
        let base_rat = positional_scores(&fixed, vector, scheme)?;
        let mut unit_rat = Vec::with_capacity(ballots.len());
        for b in ballots {
            let one_vote =
                Profile::unnamed(m, vec![WeightedVote { ballot: b.clone(), weight: 1 }])
                    .expect("ballot is valid");
            unit_rat.push(positional_scores(&one_vote, vector, scheme)?);
        }
        let scale =
            denominator_lcm(base_rat.iter().chain(unit_rat.iter().flat_map(|v| v.iter())));
        let base = base_rat.iter().map(|s| clear_to_integer(s, scale)).collect();
        let contrib = unit_rat
            .iter()
            .map(|v| v.iter().map(|s| clear_to_integer(s, scale)).collect())
            .collect();
        Ok(PositionalChecker {
            base,
            contrib,
            slot_weights: slot_weights.to_vec(),
            goal: instance.goal,
            model: instance.model,
            scores: vec![0; m],
        })
    }

    fn feasible(&mut self, assignment: &[usize]) -> bool {
        self.scores.copy_from_slice(&self.base);
        for (slot, &b) in assignment.iter().enumerate() {
            let w = self.slot_weights[slot];
            for (c, s) in self.scores.iter_mut().enumerate() {
                *s += self.contrib[b][c] * w;
            }
        }
        int_score_goal_holds(&self.scores, &self.goal, self.model)
    }
}

struct MarginsChecker {
    base: Vec<i64>, // pairwise margins, row-major
    contrib: Vec<Vec<i64>>,
    slot_weights: Vec<i64>,
    m: usize,
    alpha_num: i64,
    alpha_den: i64,
    goal: Goal,
    model: WinnerModel,
    margins: Vec<i64>,
    scores: Vec<i64>,
}

impl MarginsChecker {
    fn new(
        instance: &ManipulationInstance,
        alpha: Rational,
        ballots: &[TopOrder],
        slot_weights: &[i64],
    ) -> Self {
        let m = instance.m;
        let matrix = pairwise_matrix(&instance.fixed_profile());
        let mut base = vec![0i64; m * m];
        for i in 0..m {
            for j in 0..m {
                base[i * m + j] = matrix.margin(CandidateId(i as u32), CandidateId(j as u32));
            }
        }
        let contrib = ballots
            .iter()
            .map(|b| {
                let one = Profile::unnamed(m, vec![WeightedVote { ballot: b.clone(), weight: 1 }])
                    .expect("ballot is valid");
                let unit = pairwise_matrix(&one);
                let mut d = vec![0i64; m * m];
                for i in 0..m {
                    for j in 0..m {
                        d[i * m + j] = unit.margin(CandidateId(i as u32), CandidateId(j as u32));
                    }
                }
                d
            })
            .collect();
        MarginsChecker {
            base,
            contrib,
            slot_weights: slot_weights.to_vec(),
            m,
            alpha_num: *alpha.numer(),
            alpha_den: *alpha.denom(),
            goal: instance.goal,
            model: instance.model,
            margins: vec![0; m * m],
            scores: vec![0; m],
        }
    }

    fn feasible(&mut self, assignment: &[usize]) -> bool {
        self.margins.copy_from_slice(&self.base);
        for (slot, &b) in assignment.iter().enumerate() {
            let w = self.slot_weights[slot];
            for (cell, d) in self.margins.iter_mut().zip(&self.contrib[b]) {
                *cell += d * w;
            }
        }
        // score * den = wins * den + ties * num
        for i in 0..self.m {
            let mut s = 0i64;
            for j in 0..self.m {
                if i == j {
                    continue;
                }
                let d = self.margins[i * self.m + j];
                if d > 0 {
                    s += self.alpha_den;
                } else if d == 0 {
                    s += self.alpha_num;
                }
            }
            self.scores[i] = s;
        }
        int_score_goal_holds(&self.scores, &self.goal, self.model)
    }
}

struct SupportChecker {
    base: Vec<i64>, // pairwise support, row-major
    contrib: Vec<Vec<i64>>,
    slot_weights: Vec<i64>,
    m: usize,
    goal: Goal,
    model: WinnerModel,
    support: Vec<i64>,
    scores: Vec<i64>,
}

impl SupportChecker {
    fn new(instance: &ManipulationInstance, ballots: &[TopOrder], slot_weights: &[i64]) -> Self {
        let m = instance.m;
        let matrix = pairwise_matrix(&instance.fixed_profile());
        let mut base = vec![0i64; m * m];
        for i in 0..m {
            for j in 0..m {
                base[i * m + j] = matrix.support(CandidateId(i as u32), CandidateId(j as u32));
            }
        }
        let contrib = ballots
            .iter()
            .map(|b| {
                let one = Profile::unnamed(m, vec![WeightedVote { ballot: b.clone(), weight: 1 }])
                    .expect("ballot is valid");
                let unit = pairwise_matrix(&one);
                let mut d = vec![0i64; m * m];
                for i in 0..m {
                    for j in 0..m {
                        d[i * m + j] = unit.support(CandidateId(i as u32), CandidateId(j as u32));
                    }
                }
                d
            })
            .collect();
        SupportChecker {
            base,
            contrib,
            slot_weights: slot_weights.to_vec(),
            m,
            goal: instance.goal,
            model: instance.model,
            support: vec![0; m * m],
            scores: vec![0; m],
        }
    }

    fn feasible(&mut self, assignment: &[usize]) -> bool {
        self.support.copy_from_slice(&self.base);
        for (slot, &b) in assignment.iter().enumerate() {
            let w = self.slot_weights[slot];
            for (cell, d) in self.support.iter_mut().zip(&self.contrib[b]) {
                *cell += d * w;
            }
        }
        if self.m == 1 {
            self.scores[0] = 0;
        } else {
            for i in 0..self.m {
                self.scores[i] = (0..self.m)
                    .filter(|&j| j != i)
                    .map(|j| self.support[i * self.m + j])
                    .min()
                    .expect("m >= 2");
            }
        }
        int_score_goal_holds(&self.scores, &self.goal, self.model)
    }
}

/// Two-round evaluator for 3-candidate scoring eliminations: round one scores
/// all three candidates, round two is the induced two-candidate contest for
/// each possible first elimination.
struct Eliminate3Checker {
    r1_base: [i64; 3],
    r1_contrib: Vec<[i64; 3]>,
    // indexed by first-eliminated candidate e: scores of the remaining pair
    // (x, y) with x < y
    r2_base: [[i64; 2]; 3],
    r2_contrib: Vec<[[i64; 2]; 3]>,
    slot_weights: Vec<i64>,
    goal: Goal,
    tiebreak: TieBreak,
}

impl Eliminate3Checker {
    fn new(
        instance: &ManipulationInstance,
        vector: &ScoringVector,
        ballots: &[TopOrder],
        slot_weights: &[i64],
    ) -> Result<Self> {
        if vector.m() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: vector.m() });
        }
        let fixed = instance.fixed_profile();
        let r1 = |profile: &Profile| -> Result<Vec<Rational>> {
            positional_scores(profile, vector, TruncationScheme::RoundUp)
        };
        let pair_of = |e: usize| -> (usize, usize) {
            match e {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            }
        };
        // round-2 vector: the rule restricted to two candidates
        let v2 = vector.restricted_to(2);
        let (beta1, beta2) = (v2.alphas()[0], v2.alphas()[1]);

        // two-candidate scores of a single vote, given the eliminated
        // candidate: the induced top survivor gets β1 and the other gets β2
        // whether it is ranked later or left unranked; exhausted votes are
        // ignored
        let r2_unit = |ballot: &TopOrder, e: usize| -> [Rational; 2] {
            let (x, y) = pair_of(e);
            let first = ballot.ranked().iter().find(|c| c.index() == x || c.index() == y);
            match first {
                None => [int(0), int(0)],
                Some(f) if f.index() == x => [beta1, beta2],
                Some(_) => [beta2, beta1],
            }
        };

        let mut all_values: Vec<Rational> = Vec::new();
        let r1_base_rat = r1(&fixed)?;
        all_values.extend(r1_base_rat.iter().copied());
        let mut r1_unit_rat = Vec::with_capacity(ballots.len());
        for b in ballots {
            let one = Profile::unnamed(3, vec![WeightedVote { ballot: b.clone(), weight: 1 }])?;
            let u = r1(&one)?;
            all_values.extend(u.iter().copied());
            r1_unit_rat.push(u);
        }
        let mut r2_base_rat = [[int(0); 2]; 3];
        for (e, base) in r2_base_rat.iter_mut().enumerate() {
            for vote in fixed.votes() {
                let u = r2_unit(&vote.ballot, e);
                base[0] += u[0] * int(vote.weight);
                base[1] += u[1] * int(vote.weight);
            }
            all_values.extend(base.iter().copied());
        }
        let mut r2_unit_rat = Vec::with_capacity(ballots.len());
        for b in ballots {
            let mut per_e = [[int(0); 2]; 3];
            for (e, entry) in per_e.iter_mut().enumerate() {
                *entry = r2_unit(b, e);
                all_values.extend(entry.iter().copied());
            }
            r2_unit_rat.push(per_e);
        }
        let scale = denominator_lcm(all_values.iter());

        let clear3 = |v: &[Rational]| -> [i64; 3] {
            [
                clear_to_integer(&v[0], scale),
                clear_to_integer(&v[1], scale),
                clear_to_integer(&v[2], scale),
            ]
        };
        let clear2 = |v: &[Rational; 2]| -> [i64; 2] {
            [clear_to_integer(&v[0], scale), clear_to_integer(&v[1], scale)]
        };
        Ok(Eliminate3Checker {
            r1_base: clear3(&r1_base_rat),
            r1_contrib: r1_unit_rat.iter().map(|v| clear3(v)).collect(),
            r2_base: [
                clear2(&r2_base_rat[0]),
                clear2(&r2_base_rat[1]),
                clear2(&r2_base_rat[2]),
            ],
            r2_contrib: r2_unit_rat
                .iter()
                .map(|per_e| [clear2(&per_e[0]), clear2(&per_e[1]), clear2(&per_e[2])])
                .collect(),
            slot_weights: slot_weights.to_vec(),
            goal: instance.goal,
            tiebreak: instance.tiebreak,
        })
    }

    fn feasible(&mut self, assignment: &[usize]) -> bool {
        let mut s1 = self.r1_base;
        for (slot, &b) in assignment.iter().enumerate() {
            let w = self.slot_weights[slot];
            let u = &self.r1_contrib[b];
            s1[0] += u[0] * w;
            s1[1] += u[1] * w;
            s1[2] += u[2] * w;
        }
        let min1 = s1[0].min(s1[1]).min(s1[2]);
        let tied: Vec<usize> = (0..3).filter(|&c| s1[c] == min1).collect();
        let first_out: Vec<usize> = match self.tiebreak {
            TieBreak::Lexicographic => vec![*tied.last().expect("non-empty")],
            _ => tied,
        };
        let holds = |survivor: usize| match self.goal {
            Goal::Constructive(p) => survivor == p.index(),
            Goal::Destructive(h) => survivor != h.index(),
            Goal::AntiLowest { .. } => unreachable!("anti goals are score-based"),
        };
        let mut any = false;
        let mut all = true;
        for &e in &first_out {
            let mut s2 = self.r2_base[e];
            for (slot, &b) in assignment.iter().enumerate() {
                let w = self.slot_weights[slot];
                let u = &self.r2_contrib[b][e];
                s2[0] += u[0] * w;
                s2[1] += u[1] * w;
            }
            let (x, y) = match e {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let survivors: Vec<usize> = match s2[0].cmp(&s2[1]) {
                std::cmp::Ordering::Greater => vec![x],
                std::cmp::Ordering::Less => vec![y],
                std::cmp::Ordering::Equal => match self.tiebreak {
                    // the larger index is eliminated on a tie
                    TieBreak::Lexicographic => vec![x],
                    _ => vec![x, y],
                },
            };
            for &s in &survivors {
                if holds(s) {
                    any = true;
                } else {
                    all = false;
                }
            }
        }
        match self.tiebreak {
            TieBreak::Lexicographic => any, // single branch
            TieBreak::Optimistic => any,
            TieBreak::Pessimistic => all,
        }
    }
}

/// Fallback: replay the full profile through the generic goal check.
struct GenericChecker {
    profile: Profile,
    fixed_len: usize,
    ballots: Vec<TopOrder>,
    rule: RuleSpec,
    goal: Goal,
    model: WinnerModel,
    tiebreak: TieBreak,
}

impl GenericChecker {
    fn new(
        instance: &ManipulationInstance,
        ballots: &[TopOrder],
        slot_weights: &[i64],
    ) -> Result<Self> {
        let fixed_len = instance.fixed.len();
        let mut votes = instance.fixed.clone();
        for &w in slot_weights {
            votes.push(WeightedVote { ballot: ballots[0].clone(), weight: w });
        }
        Ok(GenericChecker {
            profile: Profile::unnamed(instance.m, votes)?,
            fixed_len,
            ballots: ballots.to_vec(),
            rule: instance.rule.clone(),
            goal: instance.goal,
            model: instance.model,
            tiebreak: instance.tiebreak,
        })
    }

    fn feasible(&mut self, assignment: &[usize]) -> bool {
        for (slot, &b) in assignment.iter().enumerate() {
            self.profile.votes_mut()[self.fixed_len + slot].ballot = self.ballots[b].clone();
        }
        goal_satisfied(&self.profile, &self.rule, &self.goal, self.model, self.tiebreak)
            .expect("profile and rule were validated")
    }
}

// ---------------------------------------------------------------------------
// Polynomial fast paths
// ---------------------------------------------------------------------------

fn identical_witness(instance: &ManipulationInstance, ballot: &TopOrder) -> Vec<TopOrder> {
    vec![ballot.clone(); instance.manipulator_weights.len()]
}

/// Polynomial constructive manipulation for the rules where a single
/// candidate-specific vote is provably optimal: every scoring rule under
/// round-up, plurality and veto under round-down, plurality under the
/// average scheme, and maximin. All manipulators cast `(p)` — except under
/// plurality round-down, where they cast the complete order with `p` first —
/// and the goal is checked once.
pub fn cwcm_fast(instance: &ManipulationInstance) -> Result<ManipulationOutcome> {
    let p = match instance.goal {
        Goal::Constructive(p) => p,
        _ => {
            return Err(Error::UnsupportedRule(
                "cwcm_fast solves constructive goals only".into(),
            ))
        }
    };
    let p_alone = TopOrder::new(vec![p], instance.m).expect("p is in range");
    let ballot = match &instance.rule {
        RuleSpec::Scoring { scheme: TruncationScheme::RoundUp, .. } => p_alone,
        RuleSpec::Scoring { vector, scheme: TruncationScheme::RoundDown }
            if vector.is_plurality_like() =>
        {
            complete_order_with(instance.m, Some(p), None)
        }
        RuleSpec::Scoring { vector, scheme: TruncationScheme::RoundDown }
            if vector.is_veto_like() =>
        {
            p_alone
        }
        RuleSpec::Scoring { vector, scheme: TruncationScheme::Average }
            if vector.is_plurality_like() =>
        {
            p_alone
        }
        RuleSpec::Maximin => p_alone,
        other => {
            return Err(Error::UnsupportedRule(format!(
                "no constructive fast path for {}",
                other.describe()
            )))
        }
    };
    let witness = identical_witness(instance, &ballot);
    if instance.check_witness(&witness)? {
        Ok(ManipulationOutcome::feasible_with(witness))
    } else {
        Ok(ManipulationOutcome::infeasible())
    }
}

/// Constructive manipulation of eliminate(veto) in the unique winner model:
/// some identical complete order for all manipulators works whenever any
/// combination of top-truncated ballots does, so all `m!` orders are tried.
pub fn cwcm_eliminate_veto_unique(instance: &ManipulationInstance) -> Result<ManipulationOutcome> {
    let p = match instance.goal {
        Goal::Constructive(p) => p,
        _ => {
            return Err(Error::UnsupportedRule(
                "cwcm_eliminate_veto_unique solves constructive goals only".into(),
            ))
        }
    };
    match &instance.rule {
        RuleSpec::Eliminate { vector } if vector.is_veto_like() => {}
        other => {
            return Err(Error::UnsupportedRule(format!(
                "cwcm_eliminate_veto_unique needs eliminate(veto), got {}",
                other.describe()
            )))
        }
    }
    if instance.model != WinnerModel::Unique {
        return Err(Error::UnsupportedRule(
            "cwcm_eliminate_veto_unique runs in the unique winner model".into(),
        ));
    }
    if instance.m > 8 {
        return Err(Error::BudgetExceeded {
            required: (1..=instance.m as u128).product(),
            budget: 40_320,
        });
    }
    let _ = p;
    if instance.manipulator_weights.is_empty() {
        let witness = Vec::new();
        return if instance.check_witness(&witness)? {
            Ok(ManipulationOutcome::feasible_with(witness))
        } else {
            Ok(ManipulationOutcome::infeasible())
        };
    }
    for order in complete_orders(instance.m) {
        let witness = identical_witness(instance, &order);
        if instance.check_witness(&witness)? {
            return Ok(ManipulationOutcome::feasible_with(witness));
        }
    }
    Ok(ManipulationOutcome::infeasible())
}

/// Polynomial destructive manipulation for monotone score-based rules
/// (scoring under any scheme, Copeland^α, maximin): for each candidate
/// `c ≠ h`, all manipulators cast the complete order with `c` first and `h`
/// last.
pub fn dwcm_fast(instance: &ManipulationInstance) -> Result<ManipulationOutcome> {
    let h = match instance.goal {
        Goal::Destructive(h) => h,
        _ => {
            return Err(Error::UnsupportedRule("dwcm_fast solves destructive goals only".into()))
        }
    };
    if !instance.rule.is_score_based() {
        return Err(Error::UnsupportedRule(format!(
            "no destructive fast path for {}",
            instance.rule.describe()
        )));
    }
    if instance.manipulator_weights.is_empty() {
        let witness = Vec::new();
        return if instance.check_witness(&witness)? {
            Ok(ManipulationOutcome::feasible_with(witness))
        } else {
            Ok(ManipulationOutcome::infeasible())
        };
    }
    for c in 0..instance.m as u32 {
        let c = CandidateId(c);
        if c == h {
            continue;
        }
        let ballot = complete_order_with(instance.m, Some(c), Some(h));
        let witness = identical_witness(instance, &ballot);
        if instance.check_witness(&witness)? {
            return Ok(ManipulationOutcome::feasible_with(witness));
        }
    }
    Ok(ManipulationOutcome::infeasible())
}

/// Polynomial anti manipulation for veto-like scoring rules
/// (`α_1 = … = α_{m-1}`): all manipulators cast a complete order with `d`
/// last, which simultaneously minimizes `d`'s score and maximizes everyone
/// else's.
pub fn antiwcm_fast(instance: &ManipulationInstance) -> Result<ManipulationOutcome> {
    let d = match instance.goal {
        Goal::AntiLowest { disliked, .. } => disliked,
        _ => return Err(Error::UnsupportedRule("antiwcm_fast solves anti goals only".into())),
    };
    match &instance.rule {
        RuleSpec::Scoring { vector, .. } if vector.is_veto_like() => {}
        other => {
            return Err(Error::UnsupportedRule(format!(
                "antiwcm_fast needs a veto-like scoring rule, got {}",
                other.describe()
            )))
        }
    }
    let ballot = complete_order_with(instance.m, None, Some(d));
    let witness = identical_witness(instance, &ballot);
    if instance.check_witness(&witness)? {
        Ok(ManipulationOutcome::feasible_with(witness))
    } else {
        Ok(ManipulationOutcome::infeasible())
    }
}

// ---------------------------------------------------------------------------
// Pseudo-polynomial dynamic programming for the hard 3-candidate cases
// ---------------------------------------------------------------------------

const DP_STATE_BOUND: usize = 8_000_000;

/// Exact pseudo-polynomial solver for 3-candidate constructive manipulation
/// under round-down or average scoring, or Copeland^α.
///
/// Some optimal witness ranks `p` first everywhere, so each manipulator
/// chooses among `(p)`, `(p, a, b)` and `(p, b, a)`. For scoring rules the
/// program tracks the achievable pairs of score contributions to `a` and `b`
/// (keeping the best contribution to `p` per pair) after clearing all
/// rationals to integers; for Copeland it tracks the achievable pairwise
/// margins between `a` and `b`.
pub fn solve_dp3(instance: &ManipulationInstance) -> Result<ManipulationOutcome> {
    let p = match instance.goal {
        Goal::Constructive(p) => p,
        _ => return Err(Error::UnsupportedRule("solve_dp3 solves constructive goals only".into())),
    };
    if instance.m != 3 {
        return Err(Error::UnsupportedRule("solve_dp3 requires exactly 3 candidates".into()));
    }
    let others: Vec<CandidateId> =
        (0..3u32).map(CandidateId).filter(|&c| c != p).collect();
    let (a, b) = (others[0], others[1]);
    match &instance.rule {
        RuleSpec::Scoring { vector, scheme } => match scheme {
            TruncationScheme::RoundDown | TruncationScheme::Average => {
                dp3_scoring(instance, vector, *scheme, p, a, b)
            }
            TruncationScheme::RoundUp => Err(Error::UnsupportedRule(
                "round-up is a polynomial case; use cwcm_fast".into(),
            )),
        },
        RuleSpec::Copeland { alpha } => dp3_copeland(instance, *alpha, p, a, b),
        other => Err(Error::UnsupportedRule(format!("no 3-candidate DP for {}", other.describe()))),
    }
}

/// The three p-first vote types of the 3-candidate programs.
fn dp3_ballots(p: CandidateId, a: CandidateId, b: CandidateId, m: usize) -> [TopOrder; 3] {
    [
        TopOrder::new(vec![p], m).expect("valid"),
        TopOrder::new(vec![p, a, b], m).expect("valid"),
        TopOrder::new(vec![p, b, a], m).expect("valid"),
    ]
}

fn dp3_scoring(
    instance: &ManipulationInstance,
    vector: &ScoringVector,
    scheme: TruncationScheme,
    p: CandidateId,
    a: CandidateId,
    b: CandidateId,
) -> Result<ManipulationOutcome> {
    if vector.m() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: vector.m() });
    }
    let ballots = dp3_ballots(p, a, b, 3);
    let fixed = instance.fixed_profile();
    let base_rat = positional_scores(&fixed, vector, scheme)?;
    let mut unit_rat = Vec::with_capacity(3);
    for ballot in &ballots {
        let one = Profile::unnamed(3, vec![WeightedVote { ballot: ballot.clone(), weight: 1 }])?;
        unit_rat.push(positional_scores(&one, vector, scheme)?);
    }
    let scale = denominator_lcm(base_rat.iter().chain(unit_rat.iter().flat_map(|v| v.iter())));
    let clear = |r: &Rational| clear_to_integer(r, scale);
    let base = [clear(&base_rat[p.index()]), clear(&base_rat[a.index()]), clear(&base_rat[b.index()])];
    // per vote type: (Δp, Δa, Δb) per unit of weight
    let units: Vec<[i64; 3]> = unit_rat
        .iter()
        .map(|v| [clear(&v[p.index()]), clear(&v[a.index()]), clear(&v[b.index()])])
        .collect();

    // DP over (Δa, Δb) keeping the largest achievable Δp per state.
    let mut layers: Vec<BTreeMap<(i64, i64), (i64, u8)>> = Vec::new();
    let mut current: BTreeMap<(i64, i64), (i64, u8)> = BTreeMap::new();
    current.insert((0, 0), (0, 0));
    let active: Vec<(usize, i64)> = instance
        .manipulator_weights
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, w)| w > 0)
        .collect();
    for &(_, w) in &active {
        let mut next: BTreeMap<(i64, i64), (i64, u8)> = BTreeMap::new();
        for (&(da, db), &(dp, _)) in &current {
            for (choice, unit) in units.iter().enumerate() {
                let key = (da + unit[1] * w, db + unit[2] * w);
                let cand = dp + unit[0] * w;
                match next.get_mut(&key) {
                    Some(entry) if entry.0 >= cand => {}
                    Some(entry) => *entry = (cand, choice as u8),
                    None => {
                        next.insert(key, (cand, choice as u8));
                    }
                }
            }
        }
        if next.len() > DP_STATE_BOUND {
            return Err(Error::BudgetExceeded {
                required: next.len() as u128,
                budget: DP_STATE_BOUND as u64,
            });
        }
        layers.push(std::mem::replace(&mut current, next));
    }

    let feasible_state = current.iter().find(|(&(da, db), &(dp, _))| {
        let sp = base[0] + dp;
        let sa = base[1] + da;
        let sb = base[2] + db;
        match instance.model {
            WinnerModel::NonUnique => sp >= sa && sp >= sb,
            WinnerModel::Unique => sp > sa && sp > sb,
        }
    });
    let Some((&final_state, &(final_dp, final_choice))) = feasible_state else {
        return Ok(ManipulationOutcome::infeasible());
    };

    // Walk the layers backwards to recover one choice per active manipulator.
    let mut choices = vec![0u8; active.len()];
    let mut state = final_state;
    let mut dp = final_dp;
    let mut choice = final_choice;
    for i in (0..active.len()).rev() {
        choices[i] = choice;
        let w = active[i].1;
        let unit = &units[choice as usize];
        state = (state.0 - unit[1] * w, state.1 - unit[2] * w);
        dp -= unit[0] * w;
        if i > 0 {
            let (prev_dp, prev_choice) = layers[i][&state];
            debug_assert_eq!(prev_dp, dp);
            choice = prev_choice;
        }
    }
    let mut witness = vec![ballots[0].clone(); instance.manipulator_weights.len()];
    for (slot, &(orig, _)) in active.iter().enumerate() {
        witness[orig] = ballots[choices[slot] as usize].clone();
    }
    debug_assert_eq!(instance.check_witness(&witness), Ok(true));
    Ok(ManipulationOutcome::feasible_with(witness))
}

fn dp3_copeland(
    instance: &ManipulationInstance,
    alpha: Rational,
    p: CandidateId,
    a: CandidateId,
    b: CandidateId,
) -> Result<ManipulationOutcome> {
    if alpha < int(0) || alpha > int(1) {
        return Err(Error::ConstraintViolation(format!(
            "Copeland parameter must lie in [0, 1], got {alpha}"
        )));
    }
    let ballots = dp3_ballots(p, a, b, 3);
    let matrix = pairwise_matrix(&instance.fixed_profile());
    let base_pa = matrix.margin(p, a);
    let base_pb = matrix.margin(p, b);
    let base_ab = matrix.margin(a, b);
    let active: Vec<(usize, i64)> = instance
        .manipulator_weights
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, w)| w > 0)
        .collect();
    let total: i64 = active.iter().map(|&(_, w)| w).sum();

    // Every manipulator ranks p first, contributing its full weight to
    // p-over-a and p-over-b; only the a-vs-b margin varies: +w, -w, or 0.
    let mut layers: Vec<BTreeMap<i64, u8>> = Vec::new();
    let mut current: BTreeMap<i64, u8> = BTreeMap::new();
    current.insert(0, 0);
    for &(_, w) in &active {
        let mut next: BTreeMap<i64, u8> = BTreeMap::new();
        for &delta in current.keys() {
            // choices match dp3_ballots: (p) → 0, (p,a,b) → +w, (p,b,a) → -w
            for (choice, shift) in [(0u8, 0i64), (1, w), (2, -w)] {
                next.entry(delta + shift).or_insert(choice);
            }
        }
        layers.push(std::mem::replace(&mut current, next));
    }

    let num = *alpha.numer();
    let den = *alpha.denom();
    let pts = |d: i64| -> i64 {
        // score * den
        if d > 0 {
            den
        } else if d == 0 {
            num
        } else {
            0
        }
    };
    let d_pa = base_pa + total;
    let d_pb = base_pb + total;
    let feasible_delta = current.iter().find(|(&delta, _)| {
        let sp = pts(d_pa) + pts(d_pb);
        let sa = pts(-d_pa) + pts(base_ab + delta);
        let sb = pts(-d_pb) + pts(-(base_ab + delta));
        match instance.model {
            WinnerModel::NonUnique => sp >= sa && sp >= sb,
            WinnerModel::Unique => sp > sa && sp > sb,
        }
    });
    let Some((&final_delta, &final_choice)) = feasible_delta else {
        return Ok(ManipulationOutcome::infeasible());
    };

    let mut choices = vec![0u8; active.len()];
    let mut delta = final_delta;
    let mut choice = final_choice;
    for i in (0..active.len()).rev() {
        choices[i] = choice;
        let w = active[i].1;
        let shift = match choice {
            0 => 0,
            1 => w,
            _ => -w,
        };
        delta -= shift;
        if i > 0 {
            choice = layers[i][&delta];
        }
    }
    let mut witness = vec![ballots[0].clone(); instance.manipulator_weights.len()];
    for (slot, &(orig, _)) in active.iter().enumerate() {
        witness[orig] = ballots[choices[slot] as usize].clone();
    }
    debug_assert_eq!(instance.check_witness(&witness), Ok(true));
    Ok(ManipulationOutcome::feasible_with(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn votes(m: usize, list: &[(i64, &[u32])]) -> Vec<WeightedVote> {
        list.iter()
            .map(|(w, b)| WeightedVote::new(TopOrder::from_indices(b, m).unwrap(), *w).unwrap())
            .collect()
    }

    fn cwcm(
        m: usize,
        fixed: &[(i64, &[u32])],
        weights: &[i64],
        p: u32,
        rule: RuleSpec,
        model: WinnerModel,
    ) -> ManipulationInstance {
        ManipulationInstance::new(
            m,
            votes(m, fixed),
            weights.to_vec(),
            Goal::Constructive(CandidateId(p)),
            rule,
            model,
            TieBreak::Lexicographic,
        )
        .unwrap()
    }

    #[test]
    fn brute_zero_manipulators() {
        // p already wins: feasible with an empty witness
        let inst = cwcm(
            2,
            &[(1, &[1, 0])],
            &[],
            1,
            RuleSpec::scoring(ScoringVector::plurality(2), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
        );
        let out = solve_brute(&inst).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![]));
    }

    #[test]
    fn brute_maximin_fixture() {
        // S = {2:(a,b,p)}, T = [3]: voting (p) gives p maximin score 3
        let inst = cwcm(3, &[(2, &[0, 1, 2])], &[3], 2, RuleSpec::Maximin, WinnerModel::NonUnique);
        let out = solve_brute(&inst).unwrap();
        assert!(out.feasible);
        assert!(inst.check_witness(out.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn brute_case1_no_partition_is_infeasible() {
        // round-down Case 1 instance built from Partition {1,3}: K=2,
        // S = {(2α1-α2)K each}, T = (α1+α2)k_i with Borda (2,1,0)
        let inst = cwcm(
            3,
            &[(6, &[0, 1, 2]), (6, &[1, 0, 2])],
            &[3, 9],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundDown),
            WinnerModel::NonUnique,
        );
        let out = solve_brute(&inst).unwrap();
        assert!(!out.feasible);
    }

    #[test]
    fn brute_budget_guard() {
        let inst = cwcm(
            4,
            &[],
            &[1, 2, 3, 4, 5, 6, 7, 8],
            0,
            RuleSpec::scoring(ScoringVector::borda(4), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
        );
        let out = solve_brute_opts(&inst, &BruteOptions { budget: 1000, complete_only: false });
        assert!(matches!(out, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn brute_rejects_anti_on_elimination() {
        let inst = ManipulationInstance::new(
            3,
            vec![],
            vec![1],
            Goal::anti(CandidateId(0)),
            RuleSpec::eliminate(ScoringVector::veto(3)),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(matches!(solve_brute(&inst), Err(Error::UnsupportedRule(_))));
    }

    #[test]
    fn cwcm_fast_maximin() {
        let inst = cwcm(3, &[(2, &[0, 1, 2])], &[3], 2, RuleSpec::Maximin, WinnerModel::NonUnique);
        let out = cwcm_fast(&inst).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![TopOrder::from_indices(&[2], 3).unwrap()]));
    }

    #[test]
    fn cwcm_fast_borda_round_up_tie() {
        // S = {1:(a,b,p)} with Borda (2,1,0): all-(p) gives p 2, tying a
        let inst = cwcm(
            3,
            &[(1, &[0, 1, 2])],
            &[1],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
        );
        assert!(cwcm_fast(&inst).unwrap().feasible);
        // under the unique model the tie is not enough
        let unique = cwcm(
            3,
            &[(1, &[0, 1, 2])],
            &[1],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            WinnerModel::Unique,
        );
        assert!(!cwcm_fast(&unique).unwrap().feasible);
    }

    #[test]
    fn cwcm_fast_plurality_round_down() {
        // S = {1:(a,b,p)}, T = [2]: the complete p-first order scores p 2 > a 1
        let inst = cwcm(
            3,
            &[(1, &[0, 1, 2])],
            &[2],
            2,
            RuleSpec::scoring(ScoringVector::plurality(3), TruncationScheme::RoundDown),
            WinnerModel::NonUnique,
        );
        let out = cwcm_fast(&inst).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![TopOrder::from_indices(&[2, 0, 1], 3).unwrap()]));
    }

    #[test]
    fn cwcm_fast_rejects_hard_cases() {
        let inst = cwcm(
            3,
            &[],
            &[1],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundDown),
            WinnerModel::NonUnique,
        );
        assert!(matches!(cwcm_fast(&inst), Err(Error::UnsupportedRule(_))));
    }

    #[test]
    fn eliminate_veto_unique_example() {
        // S = {1:(a,p,b)}, T = [2]: all-(p,a,b) makes p the unique winner
        let inst = ManipulationInstance::new(
            3,
            votes(3, &[(1, &[0, 2, 1])]),
            vec![2],
            Goal::Constructive(CandidateId(2)),
            RuleSpec::eliminate(ScoringVector::veto(3)),
            WinnerModel::Unique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        let out = cwcm_eliminate_veto_unique(&inst).unwrap();
        assert!(out.feasible);
        assert!(inst.check_witness(out.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn empty_coalitions_just_evaluate_the_fixed_votes() {
        // p is already the unique eliminate(veto) winner
        let inst = ManipulationInstance::new(
            3,
            votes(3, &[(2, &[2, 0, 1]), (1, &[0, 1, 2])]),
            vec![],
            Goal::Constructive(CandidateId(2)),
            RuleSpec::eliminate(ScoringVector::veto(3)),
            WinnerModel::Unique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        let out = cwcm_eliminate_veto_unique(&inst).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![]));

        // h already loses with no manipulators at all
        let inst = ManipulationInstance::new(
            3,
            votes(3, &[(2, &[0, 1, 2])]),
            vec![],
            Goal::Destructive(CandidateId(2)),
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        let out = dwcm_fast(&inst).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![]));
    }

    #[test]
    fn dwcm_fast_borda_example() {
        // S = {1:(h,a,b)}, T = [1]: witness (a,b,h) drops h below a
        let inst = ManipulationInstance::new(
            3,
            votes(3, &[(1, &[2, 0, 1])]),
            vec![1],
            Goal::Destructive(CandidateId(2)),
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        let out = dwcm_fast(&inst).unwrap();
        assert!(out.feasible);
        assert!(inst.check_witness(out.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn dwcm_fast_huge_fixed_voter_is_infeasible() {
        let inst = ManipulationInstance::new(
            3,
            votes(3, &[(100, &[2])]),
            vec![1],
            Goal::Destructive(CandidateId(2)),
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(!dwcm_fast(&inst).unwrap().feasible);
        assert!(!solve_brute(&inst).unwrap().feasible);
    }

    #[test]
    fn antiwcm_fast_veto() {
        // veto, S empty, T = [1]: vetoing d makes it strictly lowest
        let inst = ManipulationInstance::new(
            3,
            vec![],
            vec![1],
            Goal::anti(CandidateId(2)),
            RuleSpec::scoring(ScoringVector::veto(3), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        let out = antiwcm_fast(&inst).unwrap();
        assert!(out.feasible);
        assert_eq!(out.witness, Some(vec![TopOrder::from_indices(&[0, 1, 2], 3).unwrap()]));
    }

    #[test]
    fn antiwcm_fast_rejects_borda() {
        let inst = ManipulationInstance::new(
            3,
            vec![],
            vec![1],
            Goal::anti(CandidateId(2)),
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(matches!(antiwcm_fast(&inst), Err(Error::UnsupportedRule(_))));
    }

    #[test]
    fn dp3_case1_partition_fixture() {
        // Partition {1,1} with Borda (2,1,0): S = 3:(a,b,p), 3:(b,a,p),
        // T = [3,3]; the split witness makes all scores 12
        let inst = cwcm(
            3,
            &[(3, &[0, 1, 2]), (3, &[1, 0, 2])],
            &[3, 3],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundDown),
            WinnerModel::NonUnique,
        );
        let out = solve_dp3(&inst).unwrap();
        assert!(out.feasible);
        assert!(inst.check_witness(out.witness.as_ref().unwrap()).unwrap());
        // the balanced split is one of the valid witnesses
        let split_witness = vec![
            TopOrder::from_indices(&[2, 0, 1], 3).unwrap(),
            TopOrder::from_indices(&[2, 1, 0], 3).unwrap(),
        ];
        assert!(inst.check_witness(&split_witness).unwrap());
        let profile = inst.profile_with(&split_witness).unwrap();
        let scores = positional_scores(
            &profile,
            &ScoringVector::borda(3),
            TruncationScheme::RoundDown,
        )
        .unwrap();
        assert_eq!(scores, vec![int(12), int(12), int(12)]);
        // brute force agrees
        assert!(solve_brute(&inst).unwrap().feasible);
    }

    #[test]
    fn dp3_copeland_fdss_fixture() {
        // FDSS {1,1} with α = 1/2: S = 3:(a,b,p), 1:(b,a,p), T = [2,2]
        let inst = cwcm(
            3,
            &[(3, &[0, 1, 2]), (1, &[1, 0, 2])],
            &[2, 2],
            2,
            RuleSpec::copeland(rat(1, 2)).unwrap(),
            WinnerModel::NonUnique,
        );
        let out = solve_dp3(&inst).unwrap();
        assert!(out.feasible);
        assert!(inst.check_witness(out.witness.as_ref().unwrap()).unwrap());
        // the balanced witness: (p,b,a) for one manipulator, (p) for the
        // other; all Copeland^1/2 scores equal 1
        let split_witness = vec![
            TopOrder::from_indices(&[2, 1, 0], 3).unwrap(),
            TopOrder::from_indices(&[2], 3).unwrap(),
        ];
        assert!(inst.check_witness(&split_witness).unwrap());
        let profile = inst.profile_with(&split_witness).unwrap();
        let scores = rule_scores(&profile, &RuleSpec::copeland(rat(1, 2)).unwrap()).unwrap();
        assert_eq!(scores, vec![int(1), int(1), int(1)]);
        assert!(solve_brute(&inst).unwrap().feasible);
    }

    #[test]
    fn dp3_empty_coalition() {
        let already_winning = cwcm(
            3,
            &[(1, &[2, 0, 1])],
            &[],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::Average),
            WinnerModel::NonUnique,
        );
        assert!(solve_dp3(&already_winning).unwrap().feasible);
        let losing = cwcm(
            3,
            &[(1, &[0, 1, 2])],
            &[],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::Average),
            WinnerModel::NonUnique,
        );
        assert!(!solve_dp3(&losing).unwrap().feasible);
    }

    #[test]
    fn destructive_pessimistic_quantifies_over_branches() {
        // 1:(h), 1:(a), 1:(b) under eliminate(plurality): every candidate is
        // tied, so h survives under some resolutions. Optimistically h can
        // be made to lose, pessimistically it cannot.
        let profile = Profile::unnamed(3, votes(3, &[(1, &[2]), (1, &[0]), (1, &[1])])).unwrap();
        let rule = RuleSpec::eliminate(ScoringVector::plurality(3));
        let h = Goal::Destructive(CandidateId(2));
        assert!(goal_satisfied(&profile, &rule, &h, WinnerModel::NonUnique, TieBreak::Optimistic)
            .unwrap());
        assert!(!goal_satisfied(&profile, &rule, &h, WinnerModel::NonUnique, TieBreak::Pessimistic)
            .unwrap());
    }

    #[test]
    fn brute_agrees_with_itself_on_grouped_weights() {
        // two equal-weight manipulators: multiset enumeration must still
        // find the asymmetric witness
        let inst = cwcm(
            3,
            &[(3, &[0, 1, 2]), (3, &[1, 0, 2])],
            &[3, 3],
            2,
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundDown),
            WinnerModel::NonUnique,
        );
        let out = solve_brute(&inst).unwrap();
        assert!(out.feasible);
        let w = out.witness.unwrap();
        assert_ne!(w[0], w[1]); // needs (p,a,b) and (p,b,a)
    }
}
