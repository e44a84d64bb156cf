//! Manipulation and evaluation when the non-manipulators' votes are only
//! partially known.
//!
//! Two uncertainty models are supported. In the first, each vote is revealed
//! only as a top-truncated prefix of the ballot actually cast; an *extension*
//! appends further candidates to the prefix (never reordering it), and
//! evaluating a candidate's chances means searching over joint extensions.
//! With zero bribery costs this is exactly the extension-bribery question,
//! so [`evaluate_possible`] doubles as that solver. In the second model each
//! voter draws a ballot independently from a known finite distribution and
//! [`weighted_eval_exact`] computes the exact rational probability that a
//! candidate wins.

use crate::ballot::{
    canonicalize_ballot, complete_orders, enumerate_ballots, CandidateId, Profile, TieBreak,
    TopOrder, WeightedVote, WinnerModel,
};
use crate::error::{Error, Result};
use crate::manipulation::{goal_satisfied, Goal, ManipulationOutcome, DEFAULT_BUDGET};
use crate::rational::{int, Rational};
use crate::rules::{RuleSpec, TruncationScheme};

/// Partially revealed top-truncated votes: each entry is the known prefix of
/// some voter's ballot, together with the voter's weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialProfile {
    m: usize,
    revealed: Vec<WeightedVote>,
}

impl PartialProfile {
    pub fn new(m: usize, revealed: Vec<WeightedVote>) -> Result<Self> {
        if m == 0 {
            return Err(Error::ConstraintViolation("need at least one candidate".into()));
        }
        let revealed = revealed
            .into_iter()
            .map(|v| {
                Ok(WeightedVote {
                    ballot: canonicalize_ballot(&v.ballot, m)?,
                    weight: v.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartialProfile { m, revealed })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn revealed(&self) -> &[WeightedVote] {
        &self.revealed
    }

    /// Interprets the prefixes as final ballots.
    pub fn as_profile(&self) -> Profile {
        Profile::unnamed(self.m, self.revealed.clone()).expect("validated at construction")
    }
}

/// Every canonical extension of `prefix`: the prefix itself, plus each way of
/// appending one or more of the missing candidates (an appended order of all
/// but one candidate is the same ballot as the completion, so only canonical
/// forms are produced).
pub fn enumerate_extensions(prefix: &TopOrder, m: usize) -> Vec<TopOrder> {
    let missing: Vec<CandidateId> =
        (0..m as u32).map(CandidateId).filter(|c| !prefix.contains(*c)).collect();
    let k = prefix.len();
    let mut out = Vec::new();
    let mut chosen: Vec<CandidateId> = Vec::new();
    let mut used = vec![false; missing.len()];
    fn rec(
        prefix: &TopOrder,
        missing: &[CandidateId],
        used: &mut Vec<bool>,
        chosen: &mut Vec<CandidateId>,
        k: usize,
        m: usize,
        out: &mut Vec<TopOrder>,
    ) {
        let len = k + chosen.len();
        // skip length m-1: it denotes the same ballot as the completion
        if len + 1 != m {
            let mut ranked = prefix.ranked().to_vec();
            ranked.extend_from_slice(chosen);
            out.push(TopOrder::new(ranked, m).expect("valid extension"));
        }
        if chosen.len() == missing.len() {
            return;
        }
        for i in 0..missing.len() {
            if !used[i] {
                used[i] = true;
                chosen.push(missing[i]);
                rec(prefix, missing, used, chosen, k, m, out);
                chosen.pop();
                used[i] = false;
            }
        }
    }
    rec(prefix, &missing, &mut used, &mut chosen, k, m, &mut out);
    out
}

/// The outcome of a possibility evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationResult {
    pub possible: bool,
    /// One extension per revealed vote witnessing the win, when possible.
    pub witness_extension: Option<Vec<TopOrder>>,
    /// Set by the probabilistic evaluators only.
    pub probability: Option<Rational>,
}

impl EvaluationResult {
    fn no() -> Self {
        EvaluationResult { possible: false, witness_extension: None, probability: None }
    }

    fn yes(witness: Vec<TopOrder>) -> Self {
        EvaluationResult { possible: true, witness_extension: Some(witness), probability: None }
    }
}

/// Exhaustive possibility evaluation: is there a joint extension of the
/// revealed prefixes under which `p` wins? This is also the zero-cost
/// weighted extension-bribery solver: with all bribery costs zero, an
/// extension is affordable exactly when it exists.
pub fn evaluate_possible(
    partial: &PartialProfile,
    rule: &RuleSpec,
    p: CandidateId,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> Result<EvaluationResult> {
    evaluate_possible_with(partial, &[], rule, p, model, tiebreak, DEFAULT_BUDGET)
}

/// As [`evaluate_possible`], with additional fully-known votes appended to
/// the profile (the single-manipulator solvers use this for the
/// manipulator's own cast ballot, which is not subject to extension).
pub fn evaluate_possible_with(
    partial: &PartialProfile,
    extra_fixed: &[WeightedVote],
    rule: &RuleSpec,
    p: CandidateId,
    model: WinnerModel,
    tiebreak: TieBreak,
    budget: u64,
) -> Result<EvaluationResult> {
    let m = partial.m();
    let extensions: Vec<Vec<TopOrder>> = partial
        .revealed()
        .iter()
        .map(|v| enumerate_extensions(&v.ballot, m))
        .collect();
    let required: u128 = extensions.iter().map(|e| e.len() as u128).product();
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let mut votes: Vec<WeightedVote> = partial.revealed().to_vec();
    votes.extend_from_slice(extra_fixed);
    let mut profile = Profile::unnamed(m, votes)?;
    let goal = Goal::Constructive(p);
    let mut choice = vec![0usize; extensions.len()];

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        profile: &mut Profile,
        extensions: &[Vec<TopOrder>],
        weights: &[i64],
        choice: &mut Vec<usize>,
        idx: usize,
        rule: &RuleSpec,
        goal: &Goal,
        model: WinnerModel,
        tiebreak: TieBreak,
    ) -> Result<bool> {
        if idx == extensions.len() {
            return goal_satisfied(profile, rule, goal, model, tiebreak);
        }
        for (ei, ext) in extensions[idx].iter().enumerate() {
            profile.votes_mut()[idx].ballot = ext.clone();
            profile.votes_mut()[idx].weight = weights[idx];
            choice[idx] = ei;
            if dfs(profile, extensions, weights, choice, idx + 1, rule, goal, model, tiebreak)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let weights: Vec<i64> = partial.revealed().iter().map(|v| v.weight).collect();
    if dfs(&mut profile, &extensions, &weights, &mut choice, 0, rule, &goal, model, tiebreak)? {
        let witness =
            choice.iter().zip(&extensions).map(|(&c, ext)| ext[c].clone()).collect::<Vec<_>>();
        Ok(EvaluationResult::yes(witness))
    } else {
        Ok(EvaluationResult::no())
    }
}

/// Probability that `p` wins when each revealed vote extends uniformly at
/// random over its canonical extensions, all votes independent. This is an
/// artifact convention used to cross-check [`evaluate_possible`]
/// (possibility is equivalent to positive probability); the top-truncated
/// evaluation problem itself specifies no distribution over extensions.
pub fn evaluate_uniform_probability(
    partial: &PartialProfile,
    rule: &RuleSpec,
    p: CandidateId,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> Result<Rational> {
    let m = partial.m();
    let extensions: Vec<Vec<TopOrder>> = partial
        .revealed()
        .iter()
        .map(|v| enumerate_extensions(&v.ballot, m))
        .collect();
    let required: u128 = extensions.iter().map(|e| e.len() as u128).product();
    if required > DEFAULT_BUDGET as u128 {
        return Err(Error::BudgetExceeded { required, budget: DEFAULT_BUDGET });
    }
    let mut profile = Profile::unnamed(m, partial.revealed().to_vec())?;
    let goal = Goal::Constructive(p);
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        profile: &mut Profile,
        extensions: &[Vec<TopOrder>],
        idx: usize,
        rule: &RuleSpec,
        goal: &Goal,
        model: WinnerModel,
        tiebreak: TieBreak,
        hits: &mut u64,
        total: &mut u64,
    ) -> Result<()> {
        if idx == extensions.len() {
            *total += 1;
            if goal_satisfied(profile, rule, goal, model, tiebreak)? {
                *hits += 1;
            }
            return Ok(());
        }
        for ext in &extensions[idx] {
            profile.votes_mut()[idx].ballot = ext.clone();
            dfs(profile, extensions, idx + 1, rule, goal, model, tiebreak, hits, total)?;
        }
        Ok(())
    }
    dfs(&mut profile, &extensions, 0, rule, &goal, model, tiebreak, &mut hits, &mut total)?;
    Ok(int(hits as i64) / int(total as i64))
}

/// Possibility evaluation through the per-rule optimal extension strategy.
///
/// For any scoring rule under round-up, veto under round-down, plurality
/// under the average scheme, and maximin, the optimal extension appends `p`
/// to every prefix lacking it and nothing else. For plurality under
/// round-down only completed votes score, so exactly the votes already
/// headed by `p` are completed. For eliminate(veto) — evaluated in the
/// unique winner model — each of the `m!` elimination orders is tried by
/// completing every prefix in reverse order of the candidates' eliminations.
///
/// The eliminate(veto) strategy alone is incomplete: a truncated vote keeps
/// *all* of its unranked survivors at score zero, while any completion
/// spares all but one of them, so a win can hinge on voters with identical
/// prefixes extending differently to split their veto weight (for example
/// prefixes 3:(a,c,b), 1:(c,a,b), 4:(b), 2:(b) with target a, where 4 of
/// the (b)-weight must veto a and 2 must veto c). When no order-completion
/// succeeds, the eliminate(veto) path therefore falls back to exhaustive
/// extension search to stay exact.
///
/// Agrees with [`evaluate_possible`] under the non-unique model
/// (eliminate(veto): unique model) with lexicographic tie-breaking.
pub fn evaluate_fast(
    partial: &PartialProfile,
    rule: &RuleSpec,
    p: CandidateId,
) -> Result<EvaluationResult> {
    evaluate_fast_with(partial, &[], rule, p)
}

pub(crate) fn evaluate_fast_with(
    partial: &PartialProfile,
    extra_fixed: &[WeightedVote],
    rule: &RuleSpec,
    p: CandidateId,
) -> Result<EvaluationResult> {
    let m = partial.m();
    enum Strategy {
        AppendP,
        PluralityDown,
        EliminateVeto,
    }
    let strategy = match rule {
        RuleSpec::Scoring { scheme: TruncationScheme::RoundUp, .. } => Strategy::AppendP,
        RuleSpec::Scoring { vector, scheme: TruncationScheme::RoundDown }
            if vector.is_veto_like() =>
        {
            Strategy::AppendP
        }
        RuleSpec::Scoring { vector, scheme: TruncationScheme::RoundDown }
            if vector.is_plurality_like() =>
        {
            Strategy::PluralityDown
        }
        RuleSpec::Scoring { vector, scheme: TruncationScheme::Average }
            if vector.is_plurality_like() =>
        {
            Strategy::AppendP
        }
        RuleSpec::Maximin => Strategy::AppendP,
        RuleSpec::Eliminate { vector } if vector.is_veto_like() => Strategy::EliminateVeto,
        other => {
            return Err(Error::UnsupportedRule(format!(
                "no fast evaluation strategy for {}",
                other.describe()
            )))
        }
    };

    let check = |extended: Vec<TopOrder>, model: WinnerModel| -> Result<Option<EvaluationResult>> {
        let mut votes: Vec<WeightedVote> = extended
            .iter()
            .zip(partial.revealed())
            .map(|(b, v)| WeightedVote { ballot: b.clone(), weight: v.weight })
            .collect();
        votes.extend_from_slice(extra_fixed);
        let profile = Profile::unnamed(m, votes)?;
        let goal = Goal::Constructive(p);
        if goal_satisfied(&profile, rule, &goal, model, TieBreak::Lexicographic)? {
            Ok(Some(EvaluationResult::yes(extended)))
        } else {
            Ok(None)
        }
    };

    match strategy {
        Strategy::AppendP => {
            let extended: Vec<TopOrder> = partial
                .revealed()
                .iter()
                .map(|v| {
                    if v.ballot.contains(p) || v.ballot.is_complete(m) {
                        Ok(v.ballot.clone())
                    } else {
                        let mut ranked = v.ballot.ranked().to_vec();
                        ranked.push(p);
                        canonicalize_ballot(&TopOrder::new(ranked, m)?, m)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(check(extended, WinnerModel::NonUnique)?.unwrap_or_else(EvaluationResult::no))
        }
        Strategy::PluralityDown => {
            // Only completed votes give their head candidate the point, so
            // complete exactly the votes p already heads and leave the rest
            // truncated.
            let extended: Vec<TopOrder> = partial
                .revealed()
                .iter()
                .map(|v| {
                    if v.ballot.ranked()[0] == p && !v.ballot.is_complete(m) {
                        let mut ranked = v.ballot.ranked().to_vec();
                        for c in (0..m as u32).map(CandidateId) {
                            if !v.ballot.contains(c) {
                                ranked.push(c);
                            }
                        }
                        TopOrder::new(ranked, m)
                    } else {
                        Ok(v.ballot.clone())
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(check(extended, WinnerModel::NonUnique)?.unwrap_or_else(EvaluationResult::no))
        }
        Strategy::EliminateVeto => {
            for order in complete_orders(m) {
                // complete each prefix by appending the missing candidates in
                // reverse elimination order: later-eliminated first
                let extended: Vec<TopOrder> = partial
                    .revealed()
                    .iter()
                    .map(|v| {
                        let mut ranked = v.ballot.ranked().to_vec();
                        for c in order.ranked().iter().rev() {
                            if !v.ballot.contains(*c) {
                                ranked.push(*c);
                            }
                        }
                        TopOrder::new(ranked, m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(result) = check(extended, WinnerModel::Unique)? {
                    return Ok(result);
                }
            }
            // veto-splitting wins are invisible to the per-order completions
            evaluate_possible_with(
                partial,
                extra_fixed,
                rule,
                p,
                WinnerModel::Unique,
                TieBreak::Lexicographic,
                DEFAULT_BUDGET,
            )
        }
    }
}

/// Constructive weighted individual manipulation under top-truncated
/// uncertainty (r = 0): can a single manipulator of the given weight cast a
/// ballot so that `p` wins with positive probability, i.e. under some
/// extension of the revealed prefixes?
///
/// Every canonical top order is tried for the manipulator; for
/// eliminate(veto) in the unique winner model complete orders suffice.
pub fn cwim_ttu(
    partial: &PartialProfile,
    manip_weight: i64,
    p: CandidateId,
    rule: &RuleSpec,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> Result<ManipulationOutcome> {
    if manip_weight < 0 {
        return Err(Error::ConstraintViolation("negative manipulator weight".into()));
    }
    let m = partial.m();
    let ballots = match rule {
        RuleSpec::Eliminate { vector }
            if vector.is_veto_like() && model == WinnerModel::Unique =>
        {
            complete_orders(m)
        }
        _ => enumerate_ballots(m),
    };
    for ballot in ballots {
        let vote = WeightedVote { ballot: ballot.clone(), weight: manip_weight };
        let result = evaluate_possible_with(
            partial,
            std::slice::from_ref(&vote),
            rule,
            p,
            model,
            tiebreak,
            DEFAULT_BUDGET,
        )?;
        if result.possible {
            return Ok(ManipulationOutcome { feasible: true, witness: Some(vec![ballot]) });
        }
    }
    Ok(ManipulationOutcome { feasible: false, witness: None })
}

/// One voter of a probabilistic instance: a weight and a finite support of
/// ballots with their probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVoter {
    pub weight: i64,
    pub support: Vec<(TopOrder, Rational)>,
}

/// Independent per-voter distributions over ballots.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilisticInstance {
    m: usize,
    voters: Vec<ProbVoter>,
}

impl ProbabilisticInstance {
    pub fn new(m: usize, voters: Vec<ProbVoter>) -> Result<Self> {
        if m == 0 {
            return Err(Error::ConstraintViolation("need at least one candidate".into()));
        }
        let voters = voters
            .into_iter()
            .map(|v| {
                if v.weight < 0 {
                    return Err(Error::ConstraintViolation("negative voter weight".into()));
                }
                if v.support.is_empty() {
                    return Err(Error::ConstraintViolation(
                        "a voter's support must be non-empty".into(),
                    ));
                }
                let mut total = int(0);
                let support = v
                    .support
                    .into_iter()
                    .map(|(b, prob)| {
                        if prob <= int(0) {
                            return Err(Error::ConstraintViolation(
                                "support probabilities must be positive".into(),
                            ));
                        }
                        total += prob;
                        Ok((canonicalize_ballot(&b, m)?, prob))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if total != int(1) {
                    return Err(Error::ConstraintViolation(format!(
                        "support probabilities must sum to 1, got {total}"
                    )));
                }
                Ok(ProbVoter { weight: v.weight, support })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProbabilisticInstance { m, voters })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn voters(&self) -> &[ProbVoter] {
        &self.voters
    }

    /// The instance plus one voter casting `ballot` with certainty.
    pub fn with_fixed_voter(&self, ballot: TopOrder, weight: i64) -> Result<ProbabilisticInstance> {
        let mut voters = self.voters.clone();
        voters.push(ProbVoter { weight, support: vec![(ballot, int(1))] });
        ProbabilisticInstance::new(self.m, voters)
    }
}

/// Exact probability that `p` wins when every voter draws independently from
/// its support: the full product space is enumerated and the outcome
/// probabilities are summed in exact rational arithmetic.
pub fn weighted_eval_exact(
    instance: &ProbabilisticInstance,
    rule: &RuleSpec,
    p: CandidateId,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> Result<Rational> {
    let m = instance.m();
    let required: u128 = instance.voters().iter().map(|v| v.support.len() as u128).product();
    if required > DEFAULT_BUDGET as u128 {
        return Err(Error::BudgetExceeded { required, budget: DEFAULT_BUDGET });
    }
    let votes: Vec<WeightedVote> = instance
        .voters()
        .iter()
        .map(|v| WeightedVote { ballot: v.support[0].0.clone(), weight: v.weight })
        .collect();
    let mut profile = Profile::unnamed(m, votes)?;
    let goal = Goal::Constructive(p);

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        profile: &mut Profile,
        voters: &[ProbVoter],
        idx: usize,
        weight_so_far: Rational,
        rule: &RuleSpec,
        goal: &Goal,
        model: WinnerModel,
        tiebreak: TieBreak,
        acc: &mut Rational,
    ) -> Result<()> {
        if idx == voters.len() {
            if goal_satisfied(profile, rule, goal, model, tiebreak)? {
                *acc += weight_so_far;
            }
            return Ok(());
        }
        for (ballot, prob) in &voters[idx].support {
            profile.votes_mut()[idx].ballot = ballot.clone();
            dfs(profile, voters, idx + 1, weight_so_far * prob, rule, goal, model, tiebreak, acc)?;
        }
        Ok(())
    }

    let mut acc = int(0);
    dfs(
        &mut profile,
        instance.voters(),
        0,
        int(1),
        rule,
        &goal,
        model,
        tiebreak,
        &mut acc,
    )?;
    Ok(acc)
}

/// Constructive weighted individual manipulation under probabilistic
/// uncertainty: can a single manipulator of the given weight cast a ballot
/// so that `p` wins with probability greater than `r`? Evaluated in the
/// standard (non-unique, lexicographic) model.
pub fn cwim_u(
    instance: &ProbabilisticInstance,
    manip_weight: i64,
    p: CandidateId,
    r: Rational,
    rule: &RuleSpec,
) -> Result<ManipulationOutcome> {
    if manip_weight < 0 {
        return Err(Error::ConstraintViolation("negative manipulator weight".into()));
    }
    if r < int(0) || r >= int(1) {
        return Err(Error::ConstraintViolation(format!(
            "winning-probability threshold must lie in [0, 1), got {r}"
        )));
    }
    for ballot in enumerate_ballots(instance.m()) {
        let augmented = instance.with_fixed_voter(ballot.clone(), manip_weight)?;
        let prob = weighted_eval_exact(
            &augmented,
            rule,
            p,
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )?;
        if prob > r {
            return Ok(ManipulationOutcome { feasible: true, witness: Some(vec![ballot]) });
        }
    }
    Ok(ManipulationOutcome { feasible: false, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::rules::ScoringVector;

    fn prefix(ranked: &[u32], m: usize, weight: i64) -> WeightedVote {
        WeightedVote::new(TopOrder::from_indices(ranked, m).unwrap(), weight).unwrap()
    }

    #[test]
    fn extension_counts() {
        // prefix (a) over 4 candidates: keep, three length-2 appends, six
        // completions (length-3 appends coincide with completions)
        let p = TopOrder::from_indices(&[0], 4).unwrap();
        assert_eq!(enumerate_extensions(&p, 4).len(), 10);
        // complete prefix: single extension
        let p = TopOrder::from_indices(&[0, 1, 2], 3).unwrap();
        assert_eq!(enumerate_extensions(&p, 3).len(), 1);
        // prefix of length m-1 canonicalizes to complete before this is
        // called, but the raw enumeration still yields just the completion
        let p = TopOrder::from_indices(&[0, 1], 3).unwrap();
        assert_eq!(enumerate_extensions(&p, 3).len(), 1);
    }

    #[test]
    fn complete_votes_have_single_extension() {
        let partial = PartialProfile::new(
            2,
            vec![prefix(&[0, 1], 2, 2), prefix(&[1, 0], 2, 1)],
        )
        .unwrap();
        let rule = RuleSpec::scoring(ScoringVector::plurality(2), TruncationScheme::RoundUp);
        let res = evaluate_possible(
            &partial,
            &rule,
            CandidateId(0),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(res.possible);
        let res = evaluate_possible(
            &partial,
            &rule,
            CandidateId(1),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(!res.possible);
    }

    #[test]
    fn hopeless_candidate_under_borda() {
        // p ranked last in every complete extension of every vote
        let partial = PartialProfile::new(
            3,
            vec![prefix(&[0, 1], 3, 1), prefix(&[1, 0], 3, 1)],
        )
        .unwrap();
        let rule = RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp);
        let res = evaluate_possible(
            &partial,
            &rule,
            CandidateId(2),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(!res.possible);
    }

    #[test]
    fn two_vetoers_block_p_under_eliminate_veto() {
        // prefixes 2:(a), 1:(b) over {a,b,p}: the weight-2 a-head beats p in
        // any final pair and p cannot reach the final against b, so no joint
        // extension makes p the unique winner — but a weight-2 manipulator
        // vetoing a turns it around
        let partial =
            PartialProfile::new(3, vec![prefix(&[0], 3, 2), prefix(&[1], 3, 1)]).unwrap();
        let rule = RuleSpec::eliminate(ScoringVector::veto(3));
        let p = CandidateId(2);
        for tiebreak in [TieBreak::Lexicographic, TieBreak::Optimistic] {
            let res =
                evaluate_possible(&partial, &rule, p, WinnerModel::Unique, tiebreak).unwrap();
            assert!(!res.possible);
        }
        let fast = evaluate_fast(&partial, &rule, p).unwrap();
        assert!(!fast.possible);
        let out = cwim_ttu(&partial, 2, p, &rule, WinnerModel::Unique, TieBreak::Lexicographic)
            .unwrap();
        assert!(out.feasible);
        // the witness ballot plus some extension must realize the win
        let ballot = out.witness.unwrap()[0].clone();
        let vote = WeightedVote { ballot, weight: 2 };
        let replay = evaluate_possible_with(
            &partial,
            std::slice::from_ref(&vote),
            &rule,
            p,
            WinnerModel::Unique,
            TieBreak::Lexicographic,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(replay.possible);
    }

    #[test]
    fn fast_appends_p_for_round_up() {
        // 1:(a) over {a,b,p}: appending p gives scores a 2, p 1 — not enough
        let partial = PartialProfile::new(3, vec![prefix(&[0], 3, 1)]).unwrap();
        let rule = RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp);
        let fast = evaluate_fast(&partial, &rule, CandidateId(2)).unwrap();
        let slow = evaluate_possible(
            &partial,
            &rule,
            CandidateId(2),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert!(!fast.possible);
        assert_eq!(fast.possible, slow.possible);
    }

    #[test]
    fn fast_maximin_trivial() {
        let partial = PartialProfile::new(3, vec![prefix(&[2], 3, 1)]).unwrap();
        let res = evaluate_fast(&partial, &RuleSpec::Maximin, CandidateId(2)).unwrap();
        assert!(res.possible);
    }

    #[test]
    fn fast_plurality_round_down_leaves_rivals_truncated() {
        // 2:(a), 1:(p) over 4 candidates: completing only the p-vote leaves
        // a scoreless, so p wins outright
        let partial =
            PartialProfile::new(4, vec![prefix(&[0], 4, 2), prefix(&[3], 4, 1)]).unwrap();
        let rule = RuleSpec::scoring(ScoringVector::plurality(4), TruncationScheme::RoundDown);
        let fast = evaluate_fast(&partial, &rule, CandidateId(3)).unwrap();
        assert!(fast.possible);
        let slow = evaluate_possible(
            &partial,
            &rule,
            CandidateId(3),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert_eq!(fast.possible, slow.possible);
    }

    #[test]
    fn weight_zero_lift_equals_evaluation() {
        let partial =
            PartialProfile::new(3, vec![prefix(&[0], 3, 2), prefix(&[1], 3, 1)]).unwrap();
        for rule in [
            RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp),
            RuleSpec::Maximin,
        ] {
            for target in 0..3u32 {
                let p = CandidateId(target);
                let eval = evaluate_possible(
                    &partial,
                    &rule,
                    p,
                    WinnerModel::NonUnique,
                    TieBreak::Lexicographic,
                )
                .unwrap();
                let lift = cwim_ttu(
                    &partial,
                    0,
                    p,
                    &rule,
                    WinnerModel::NonUnique,
                    TieBreak::Lexicographic,
                )
                .unwrap();
                assert_eq!(eval.possible, lift.feasible);
            }
        }
    }

    #[test]
    fn probabilistic_singletons_match_winners() {
        let inst = ProbabilisticInstance::new(
            2,
            vec![ProbVoter {
                weight: 1,
                support: vec![(TopOrder::from_indices(&[0, 1], 2).unwrap(), int(1))],
            }],
        )
        .unwrap();
        let rule = RuleSpec::scoring(ScoringVector::plurality(2), TruncationScheme::RoundUp);
        let p0 = weighted_eval_exact(
            &inst,
            &rule,
            CandidateId(0),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert_eq!(p0, int(1));
        let p1 = weighted_eval_exact(
            &inst,
            &rule,
            CandidateId(1),
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert_eq!(p1, int(0));
    }

    #[test]
    fn probabilities_must_sum_to_one() {
        let bad = ProbabilisticInstance::new(
            2,
            vec![ProbVoter {
                weight: 1,
                support: vec![(TopOrder::from_indices(&[0, 1], 2).unwrap(), rat(1, 2))],
            }],
        );
        assert!(matches!(bad, Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn cwim_u_rejects_bad_threshold() {
        let inst = ProbabilisticInstance::new(
            2,
            vec![ProbVoter {
                weight: 1,
                support: vec![(TopOrder::from_indices(&[0, 1], 2).unwrap(), int(1))],
            }],
        )
        .unwrap();
        let rule = RuleSpec::scoring(ScoringVector::plurality(2), TruncationScheme::RoundUp);
        assert!(cwim_u(&inst, 1, CandidateId(0), int(1), &rule).is_err());
    }
}
