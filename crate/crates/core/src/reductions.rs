//! Generators for the hardness-reduction instances, number-theoretic
//! oracles, and a biconditional verifier.
//!
//! Each NP-complete manipulation case is witnessed by a family of election
//! instances built from a Partition or Fixed-Difference Subset Sum instance:
//! the manipulation is feasible exactly when the number problem is a
//! yes-instance. [`verify_reduction`] mechanizes that biconditional by
//! answering the number side with a pseudo-polynomial dynamic program and
//! the election side with the exhaustive solver, then comparing.

use rayon::prelude::*;

use crate::ballot::{enumerate_ballots, CandidateId, TieBreak, TopOrder, WeightedVote, WinnerModel};
use crate::error::{Error, Result};
use crate::manipulation::{solve_brute, Goal, ManipulationInstance};
use crate::rational::{clear_to_integer, denominator_lcm, int, rat, Rational};
use crate::rules::{RuleSpec, ScoringVector, TruncationScheme};
use crate::uncertainty::{weighted_eval_exact, ProbVoter, ProbabilisticInstance};

/// Which number problem an instance belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumberKind {
    Partition,
    Fdss,
}

/// A multiset of non-negative integers summing to `2K`, tagged with the
/// problem it is an instance of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberInstance {
    kind: NumberKind,
    values: Vec<u64>,
}

impl NumberInstance {
    pub fn partition(values: Vec<u64>) -> Result<Self> {
        Self::new(NumberKind::Partition, values)
    }

    pub fn fdss(values: Vec<u64>) -> Result<Self> {
        Self::new(NumberKind::Fdss, values)
    }

    pub fn new(kind: NumberKind, values: Vec<u64>) -> Result<Self> {
        let sum: u64 = values.iter().sum();
        if !sum.is_multiple_of(2) {
            return Err(Error::OddSum(sum));
        }
        Ok(NumberInstance { kind, values })
    }

    pub fn kind(&self) -> NumberKind {
        self.kind
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().sum()
    }

    /// `K`, half the total.
    pub fn half(&self) -> u64 {
        self.sum() / 2
    }

    fn expect_kind(&self, expected: NumberKind) -> Result<()> {
        if self.kind != expected {
            return Err(Error::WrongKind { expected, got: self.kind });
        }
        Ok(())
    }
}

/// Is there a subset summing to `K`? Subset-sum dynamic programming over
/// `[0, K]`.
pub fn partition_oracle(instance: &NumberInstance) -> Result<bool> {
    instance.expect_kind(NumberKind::Partition)?;
    let target = instance.half() as usize;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for &v in instance.values() {
        let v = v as usize;
        if v > target {
            continue;
        }
        for s in (v..=target).rev() {
            if reachable[s - v] {
                reachable[s] = true;
            }
        }
    }
    Ok(reachable[target])
}

/// Are there two disjoint subsets whose sums differ by exactly `K`?
/// Dynamic programming over achievable differences in `[-2K, 2K]`, each
/// element contributing `+v`, `-v`, or nothing. Instances whose values are
/// too large for the dense difference table (the power-tailed outputs of
/// [`fdss_from_partition`]) fall back to a meet-in-the-middle split.
pub fn fdss_oracle(instance: &NumberInstance) -> Result<bool> {
    instance.expect_kind(NumberKind::Fdss)?;
    const DENSE_LIMIT: u64 = 2_000_000;
    if instance.sum() <= DENSE_LIMIT {
        return Ok(fdss_dense(instance));
    }
    let values = instance.values();
    if values.len() > 26 {
        return Err(Error::BudgetExceeded {
            required: 3u128.saturating_pow(values.len() as u32 / 2),
            budget: 3u64.pow(13),
        });
    }
    let (left, right) = values.split_at(values.len() / 2);
    let left_sums = signed_sums(left);
    let right_sums = signed_sums(right);
    let target = instance.half() as i64;
    Ok(left_sums.iter().any(|l| right_sums.binary_search(&(target - l)).is_ok()))
}

fn fdss_dense(instance: &NumberInstance) -> bool {
    let sum = instance.sum() as usize;
    let offset = sum;
    let mut reachable = vec![false; 2 * sum + 1];
    reachable[offset] = true;
    for &v in instance.values() {
        let v = v as usize;
        if v == 0 {
            continue;
        }
        let prev = reachable.clone();
        for (d, &ok) in prev.iter().enumerate() {
            if ok {
                reachable[d + v] = true;
                reachable[d - v] = true;
            }
        }
    }
    reachable[offset + instance.half() as usize]
}

/// All sums Σ±v over sign choices in {+1, -1, 0}, sorted and deduplicated.
fn signed_sums(values: &[u64]) -> Vec<i64> {
    let mut sums = vec![0i64];
    for &v in values {
        if v == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(sums.len() * 3);
        for &s in &sums {
            next.push(s);
            next.push(s + v as i64);
            next.push(s - v as i64);
        }
        next.sort_unstable();
        next.dedup();
        sums = next;
    }
    sums
}

/// The Partition → Fixed-Difference Subset Sum reduction: each `k_i` becomes
/// the pair `k_i + 2^(n+2i)` and `2^(n+2i)` with `n = ⌈log₂ 2K⌉`. The output
/// sums to twice `K' = K + Σ 2^(n+2i)`, and a difference of exactly `K'` is
/// achievable precisely when the input has a partition.
///
/// Each pair shares one tail power, so a certificate assigns every power a
/// signed coefficient in `[-2, 2]`; spacing the powers two bits apart makes
/// those coefficients base-4 digits, whose representation of `Σ 2^(n+2i)` is
/// unique, forcing exactly one element of each pair to be taken positively.
/// (Adjacent powers `2^(n+i)` would not be enough: a coefficient of 2 on one
/// power can imitate a carry into the next, and e.g. the no-instance {1, 3}
/// would map to {9, 19, 8, 16}, where {19, 16} against {9} reaches the
/// half-sum 26 without encoding any partition.)
pub fn fdss_from_partition(instance: &NumberInstance) -> Result<NumberInstance> {
    instance.expect_kind(NumberKind::Partition)?;
    let two_k = instance.sum();
    if two_k == 0 {
        return Err(Error::ConstraintViolation(
            "the FDSS construction needs K ≥ 1".into(),
        ));
    }
    let n = two_k.next_power_of_two().trailing_zeros() as u64;
    let t = instance.values().len() as u64;
    if n + 2 * t >= 63 {
        return Err(Error::ConstraintViolation(
            "the FDSS construction overflows 64-bit values".into(),
        ));
    }
    let mut values = Vec::with_capacity(2 * instance.values().len());
    for (i, &k) in instance.values().iter().enumerate() {
        values.push(k + (1u64 << (n + 2 * (i as u64 + 1))));
    }
    for i in 0..instance.values().len() {
        values.push(1u64 << (n + 2 * (i as u64 + 1)));
    }
    NumberInstance::fdss(values)
}

/// The reduction families constructed in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionFamily {
    /// Partition → Fixed-Difference Subset Sum (numbers only).
    FdssFromPartition,
    /// 3-candidate round-down scoring, `α_1 > (3/2)α_2`, from Partition.
    RoundDownCase1,
    /// 3-candidate round-down scoring, `α_1 < (3/2)α_2`, from Partition.
    RoundDownCase2,
    /// 3-candidate round-down scoring, `α_1 = (3/2)α_2`, from FDSS.
    RoundDownCase3,
    /// 3-candidate average-scheme scoring from FDSS.
    AverageScheme,
    /// 3-candidate Copeland^α, `α ∈ [0, 1)`, from FDSS.
    Copeland3,
    /// Anti manipulation → destructive manipulation of eliminate(X).
    EliminateDwcm,
    /// Partition → probabilistic evaluation under eliminate(veto).
    EvalEliminateVeto,
}

impl ReductionFamily {
    pub const ALL: [ReductionFamily; 8] = [
        ReductionFamily::FdssFromPartition,
        ReductionFamily::RoundDownCase1,
        ReductionFamily::RoundDownCase2,
        ReductionFamily::RoundDownCase3,
        ReductionFamily::AverageScheme,
        ReductionFamily::Copeland3,
        ReductionFamily::EliminateDwcm,
        ReductionFamily::EvalEliminateVeto,
    ];

    /// The kind of number instance this family consumes.
    pub fn required_kind(self) -> NumberKind {
        match self {
            ReductionFamily::FdssFromPartition
            | ReductionFamily::RoundDownCase1
            | ReductionFamily::RoundDownCase2
            | ReductionFamily::EliminateDwcm
            | ReductionFamily::EvalEliminateVeto => NumberKind::Partition,
            ReductionFamily::RoundDownCase3
            | ReductionFamily::AverageScheme
            | ReductionFamily::Copeland3 => NumberKind::Fdss,
        }
    }
}

/// A generated instance: an election manipulation problem or a probabilistic
/// evaluation problem.
#[derive(Clone, Debug)]
pub enum Generated {
    Manipulation(ManipulationInstance),
    Probabilistic(ProbabilisticInstance),
}

// Candidate convention for all 3-candidate constructions: a = 0, b = 1, and
// the distinguished candidate (p or h) = 2.
pub const CAND_A: CandidateId = CandidateId(0);
pub const CAND_B: CandidateId = CandidateId(1);
pub const CAND_P: CandidateId = CandidateId(2);

fn order3(indices: &[u32]) -> TopOrder {
    TopOrder::from_indices(indices, 3).expect("fixture ballots are valid")
}

fn scoring_rule_params(rule: &RuleSpec) -> Result<(&ScoringVector, TruncationScheme)> {
    match rule {
        RuleSpec::Scoring { vector, scheme } => Ok((vector, *scheme)),
        other => Err(Error::CaseMismatch(format!(
            "expected a positional scoring rule, got {}",
            other.describe()
        ))),
    }
}

/// Checks the 3-candidate vector shape `α_1 > α_2 > α_3 = 0` (round-down
/// cases), `α_1 ≥ α_2 > α_3 = 0` (average scheme), or `α_1 > α_2 ≥ α_3 = 0`
/// (the eliminate reduction, which excludes veto only and so admits
/// plurality).
fn check_vector3(
    vector: &ScoringVector,
    allow_equal_top: bool,
    allow_zero_second: bool,
) -> Result<(Rational, Rational)> {
    if vector.m() != 3 {
        return Err(Error::CaseMismatch(format!(
            "the 3-candidate constructions need a length-3 vector, got length {}",
            vector.m()
        )));
    }
    let a = vector.alphas();
    if a[2] != int(0) {
        return Err(Error::CaseMismatch("the construction requires α_3 = 0".into()));
    }
    if !allow_zero_second && a[1] <= int(0) {
        return Err(Error::CaseMismatch("the rule must not be isomorphic to plurality (α_2 > 0)".into()));
    }
    if !allow_equal_top && a[0] <= a[1] {
        return Err(Error::CaseMismatch("the rule must not be isomorphic to veto (α_1 > α_2)".into()));
    }
    if a[0] < a[1] {
        return Err(Error::CaseMismatch("scoring vectors are non-increasing".into()));
    }
    Ok((a[0], a[1]))
}

const WEIGHT_BOUND: i64 = 1 << 42;

/// Multiplies rational weights by the least common denominator and checks
/// the results stay within bounds; the winner set is invariant under
/// uniformly scaling all weights.
fn clear_weights(weights: &[Rational]) -> Result<Vec<i64>> {
    let scale = denominator_lcm(weights.iter());
    weights
        .iter()
        .map(|w| {
            let v = clear_to_integer(w, scale);
            if !(0..WEIGHT_BOUND).contains(&v) {
                return Err(Error::NonIntegerWeights);
            }
            Ok(v)
        })
        .collect()
}

fn manipulation_instance_3(
    fixed: Vec<(Rational, TopOrder)>,
    manipulators: Vec<Rational>,
    goal: Goal,
    rule: RuleSpec,
    tiebreak: TieBreak,
) -> Result<ManipulationInstance> {
    let mut all: Vec<Rational> = fixed.iter().map(|(w, _)| *w).collect();
    all.extend(manipulators.iter().copied());
    let cleared = clear_weights(&all)?;
    let votes: Vec<WeightedVote> = fixed
        .iter()
        .zip(&cleared)
        .map(|((_, ballot), &w)| WeightedVote { ballot: ballot.clone(), weight: w })
        .collect();
    let weights = cleared[fixed.len()..].to_vec();
    ManipulationInstance::new(3, votes, weights, goal, rule, WinnerModel::NonUnique, tiebreak)
}

/// Emits the election (or probabilistic-evaluation) instance of the given
/// reduction family for `numbers`, instantiated with the scoring parameters
/// in `rule`. The instance is feasible — has positive winning probability,
/// for [`ReductionFamily::EvalEliminateVeto`] — exactly when `numbers` is a
/// yes-instance.
pub fn gen_instance(
    family: ReductionFamily,
    numbers: &NumberInstance,
    rule: &RuleSpec,
) -> Result<Generated> {
    numbers.expect_kind(family.required_kind())?;
    let k = int(numbers.half() as i64);
    match family {
        ReductionFamily::FdssFromPartition => Err(Error::CaseMismatch(
            "FdssFromPartition generates a number instance; use fdss_from_partition".into(),
        )),
        ReductionFamily::RoundDownCase1 => {
            let (vector, scheme) = scoring_rule_params(rule)?;
            if scheme != TruncationScheme::RoundDown {
                return Err(Error::CaseMismatch("round-down cases need the round-down scheme".into()));
            }
            let (a1, a2) = check_vector3(vector, false, false)?;
            if a1 <= a2 * rat(3, 2) {
                return Err(Error::CaseMismatch("case 1 requires α_1 > (3/2)α_2".into()));
            }
            let ws = (a1 * int(2) - a2) * k;
            let fixed = vec![(ws, order3(&[0, 1, 2])), (ws, order3(&[1, 0, 2]))];
            let manipulators =
                numbers.values().iter().map(|&v| (a1 + a2) * int(v as i64)).collect();
            Ok(Generated::Manipulation(manipulation_instance_3(
                fixed,
                manipulators,
                Goal::Constructive(CAND_P),
                rule.clone(),
                TieBreak::Lexicographic,
            )?))
        }
        ReductionFamily::RoundDownCase2 | ReductionFamily::RoundDownCase3 => {
            let (vector, scheme) = scoring_rule_params(rule)?;
            if scheme != TruncationScheme::RoundDown {
                return Err(Error::CaseMismatch("round-down cases need the round-down scheme".into()));
            }
            let (a1, a2) = check_vector3(vector, false, false)?;
            match family {
                ReductionFamily::RoundDownCase2 if a1 >= a2 * rat(3, 2) => {
                    return Err(Error::CaseMismatch("case 2 requires α_1 < (3/2)α_2".into()));
                }
                ReductionFamily::RoundDownCase3 if a1 != a2 * rat(3, 2) => {
                    return Err(Error::CaseMismatch("case 3 requires α_1 = (3/2)α_2".into()));
                }
                _ => {}
            }
            let fixed = vec![
                (int(15) * k, order3(&[1, 0, 2])), // (b, a, p)
                (int(5) * k, order3(&[1, 2, 0])),  // (b, p, a)
                (int(11) * k, order3(&[0, 2, 1])), // (a, p, b)
                (int(9) * k, order3(&[0, 1, 2])),  // (a, b, p)
                (int(7) * k, order3(&[2, 1, 0])),  // (p, b, a)
                (int(7) * k, order3(&[2, 0, 1])),  // (p, a, b)
            ];
            let manipulators =
                numbers.values().iter().map(|&v| int(6) * int(v as i64)).collect();
            Ok(Generated::Manipulation(manipulation_instance_3(
                fixed,
                manipulators,
                Goal::Constructive(CAND_P),
                rule.clone(),
                TieBreak::Lexicographic,
            )?))
        }
        ReductionFamily::AverageScheme => {
            let (vector, scheme) = scoring_rule_params(rule)?;
            if scheme != TruncationScheme::Average {
                return Err(Error::CaseMismatch("the average family needs the average scheme".into()));
            }
            let (a1, a2) = check_vector3(vector, true, false)?;
            let fixed = vec![
                ((a1 * int(4) + a2) * k, order3(&[1, 0, 2])),          // (b, a, p)
                ((a1 * int(2) - a2) * k, order3(&[0, 1, 2])),          // (a, b, p)
                ((a1 + a2) * int(2) * k, order3(&[0, 2, 1])),          // (a, p, b)
            ];
            let manipulators = numbers
                .values()
                .iter()
                .map(|&v| (a1 + a2) * int(2) * int(v as i64))
                .collect();
            Ok(Generated::Manipulation(manipulation_instance_3(
                fixed,
                manipulators,
                Goal::Constructive(CAND_P),
                rule.clone(),
                TieBreak::Lexicographic,
            )?))
        }
        ReductionFamily::Copeland3 => {
            let alpha = match rule {
                RuleSpec::Copeland { alpha } => *alpha,
                other => {
                    return Err(Error::CaseMismatch(format!(
                        "the Copeland family needs a Copeland rule, got {}",
                        other.describe()
                    )))
                }
            };
            if alpha < int(0) || alpha >= int(1) {
                return Err(Error::CaseMismatch("the Copeland family requires α ∈ [0, 1)".into()));
            }
            let fixed = vec![(int(3) * k, order3(&[0, 1, 2])), (k, order3(&[1, 0, 2]))];
            let manipulators =
                numbers.values().iter().map(|&v| int(2) * int(v as i64)).collect();
            Ok(Generated::Manipulation(manipulation_instance_3(
                fixed,
                manipulators,
                Goal::Constructive(CAND_P),
                rule.clone(),
                TieBreak::Lexicographic,
            )?))
        }
        ReductionFamily::EliminateDwcm => {
            let anti = anti_instance_from_numbers(numbers, rule)?;
            Ok(Generated::Manipulation(eliminate_dwcm_instance(&anti)?))
        }
        ReductionFamily::EvalEliminateVeto => {
            match rule {
                RuleSpec::Eliminate { vector } if vector.is_veto_like() && vector.m() == 3 => {}
                other => {
                    return Err(Error::CaseMismatch(format!(
                        "the evaluation family needs eliminate(veto) on 3 candidates, got {}",
                        other.describe()
                    )))
                }
            }
            let mut voters = vec![ProbVoter {
                weight: 1,
                support: vec![(order3(&[2, 0, 1]), int(1))], // (p, a, b)
            }];
            for &v in numbers.values() {
                voters.push(ProbVoter {
                    weight: v as i64,
                    support: vec![
                        (order3(&[0, 2, 1]), rat(1, 2)), // (a, p, b)
                        (order3(&[1, 2, 0]), rat(1, 2)), // (b, p, a)
                    ],
                });
            }
            Ok(Generated::Probabilistic(ProbabilisticInstance::new(3, voters)?))
        }
    }
}

/// Destructive manipulation of eliminate(X) built from a 3-candidate anti
/// instance: six blocking voters are added whose scores tie all three
/// candidates exactly, with `K` one more than the combined weight of the
/// anti instance. The disliked candidate can then be kept from winning —
/// under every tie resolution — exactly when it can be given the strictly
/// lowest score in the anti instance.
pub fn eliminate_dwcm_instance(anti: &ManipulationInstance) -> Result<ManipulationInstance> {
    if anti.m != 3 {
        return Err(Error::CaseMismatch("the eliminate reduction needs 3 candidates".into()));
    }
    let (d, strict) = match anti.goal {
        Goal::AntiLowest { disliked, strict } => (disliked, strict),
        _ => return Err(Error::CaseMismatch("expected an anti manipulation instance".into())),
    };
    if !strict {
        return Err(Error::CaseMismatch("the eliminate reduction needs the strict anti goal".into()));
    }
    let (vector, scheme) = scoring_rule_params(&anti.rule)?;
    if scheme != TruncationScheme::RoundUp {
        return Err(Error::CaseMismatch(
            "the anti instance must use the round-up scheme to match elimination rounds".into(),
        ));
    }
    check_vector3(vector, false, true)?;

    let others: Vec<u32> = (0..3u32).filter(|&c| c != d.0).collect();
    let (a, b) = (others[0], others[1]);
    let h = d.0;
    let k = anti.total_weight() + 1;
    let mut fixed = anti.fixed.clone();
    for (w, ballot) in [
        (k, order3(&[a, h, b])),
        (2 * k, order3(&[h, a, b])),
        (k, order3(&[b, h, a])),
        (2 * k, order3(&[h, b, a])),
        (3 * k, TopOrder::from_indices(&[a], 3).expect("valid")),
        (3 * k, TopOrder::from_indices(&[b], 3).expect("valid")),
    ] {
        fixed.push(WeightedVote { ballot, weight: w });
    }
    ManipulationInstance::new(
        3,
        fixed,
        anti.manipulator_weights.clone(),
        Goal::Destructive(d),
        RuleSpec::eliminate(vector.clone()),
        WinnerModel::NonUnique,
        TieBreak::Pessimistic,
    )
}

/// A deterministic 3-candidate anti instance derived from a number instance:
/// the values become the manipulator weights and a small pseudo-random block
/// of fixed votes (seeded by the values) provides yes/no variety for the
/// verification sweeps. The rule is the given scoring vector under round-up.
pub fn anti_instance_from_numbers(
    numbers: &NumberInstance,
    rule: &RuleSpec,
) -> Result<ManipulationInstance> {
    let (vector, _) = scoring_rule_params(rule)?;
    check_vector3(vector, false, true)?;
    let mut seed = 0x9E3779B97F4A7C15u64 ^ (numbers.values().len() as u64);
    for &v in numbers.values() {
        seed = splitmix64(seed ^ v);
    }
    let ballots = enumerate_ballots(3);
    let n_votes = 1 + (splitmix64(seed) % 3) as usize;
    let mut fixed = Vec::with_capacity(n_votes);
    for i in 0..n_votes {
        let r = splitmix64(seed.wrapping_add(i as u64 + 1));
        let ballot = ballots[(r % 9) as usize].clone();
        let weight = ((r >> 8) % 7) as i64;
        fixed.push(WeightedVote { ballot, weight });
    }
    ManipulationInstance::new(
        3,
        fixed,
        numbers.values().iter().map(|&v| v as i64).collect(),
        Goal::anti(CAND_P),
        RuleSpec::scoring(vector.clone(), TruncationScheme::RoundUp),
        WinnerModel::NonUnique,
        TieBreak::Lexicographic,
    )
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// The two answers of a reduction biconditional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub oracle_answer: bool,
    pub solver_answer: bool,
    pub agree: bool,
}

/// Answers the number side with the independent oracle and the election side
/// with exhaustive search (or exact probability enumeration), and compares.
pub fn verify_reduction(
    family: ReductionFamily,
    numbers: &NumberInstance,
    rule: &RuleSpec,
) -> Result<VerifyReport> {
    let (oracle_answer, solver_answer) = match family {
        ReductionFamily::FdssFromPartition => {
            let oracle = partition_oracle(numbers)?;
            let solver = fdss_oracle(&fdss_from_partition(numbers)?)?;
            (oracle, solver)
        }
        ReductionFamily::RoundDownCase1 | ReductionFamily::RoundDownCase2 => {
            let oracle = partition_oracle(numbers)?;
            let Generated::Manipulation(inst) = gen_instance(family, numbers, rule)? else {
                unreachable!()
            };
            (oracle, solve_brute(&inst)?.feasible)
        }
        ReductionFamily::RoundDownCase3
        | ReductionFamily::AverageScheme
        | ReductionFamily::Copeland3 => {
            let oracle = fdss_oracle(numbers)?;
            let Generated::Manipulation(inst) = gen_instance(family, numbers, rule)? else {
                unreachable!()
            };
            (oracle, solve_brute(&inst)?.feasible)
        }
        ReductionFamily::EliminateDwcm => {
            let anti = anti_instance_from_numbers(numbers, rule)?;
            let oracle = solve_brute(&anti)?.feasible;
            let dwcm = eliminate_dwcm_instance(&anti)?;
            (oracle, solve_brute(&dwcm)?.feasible)
        }
        ReductionFamily::EvalEliminateVeto => {
            let oracle = partition_oracle(numbers)?;
            let Generated::Probabilistic(inst) = gen_instance(family, numbers, rule)? else {
                unreachable!()
            };
            let veto3 = RuleSpec::eliminate(ScoringVector::veto(3));
            let prob = weighted_eval_exact(
                &inst,
                &veto3,
                CAND_P,
                WinnerModel::NonUnique,
                TieBreak::Lexicographic,
            )?;
            (oracle, prob > int(0))
        }
    };
    Ok(VerifyReport { oracle_answer, solver_answer, agree: oracle_answer == solver_answer })
}

/// Outcome of sweeping a family over a grid of number instances.
#[derive(Clone, Debug)]
pub struct GridReport {
    pub checked: usize,
    pub skipped: usize,
    pub disagreements: Vec<NumberInstance>,
}

impl GridReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Every multiset of at most `max_t` values in `0..=max_value` with an even
/// sum (including the empty instance), as instances of `kind`.
pub fn enumerate_number_instances(
    max_t: usize,
    max_value: u64,
    kind: NumberKind,
) -> Vec<NumberInstance> {
    let mut out = Vec::new();
    let mut values = Vec::new();
    fn rec(
        values: &mut Vec<u64>,
        min: u64,
        max_t: usize,
        max_value: u64,
        kind: NumberKind,
        out: &mut Vec<NumberInstance>,
    ) {
        if values.iter().sum::<u64>() % 2 == 0 {
            out.push(NumberInstance::new(kind, values.clone()).expect("even sum"));
        }
        if values.len() == max_t {
            return;
        }
        for v in min..=max_value {
            values.push(v);
            rec(values, v, max_t, max_value, kind, out);
            values.pop();
        }
    }
    rec(&mut values, 0, max_t, max_value, kind, &mut out);
    out
}

/// Runs [`verify_reduction`] over the full grid of number instances with at
/// most `max_t` values bounded by `max_value`. Instances a family cannot
/// consume (the empty-sum case of the FDSS construction) are skipped and
/// counted.
pub fn verify_family_grid(
    family: ReductionFamily,
    rule: &RuleSpec,
    max_t: usize,
    max_value: u64,
) -> Result<GridReport> {
    let instances = enumerate_number_instances(max_t, max_value, family.required_kind());
    verify_family_over(family, rule, &instances)
}

/// Runs [`verify_reduction`] over the given instances in parallel.
pub fn verify_family_over(
    family: ReductionFamily,
    rule: &RuleSpec,
    instances: &[NumberInstance],
) -> Result<GridReport> {
    let results: Vec<Result<Option<NumberInstance>>> = instances
        .par_iter()
        .map(|numbers| {
            if family == ReductionFamily::FdssFromPartition && numbers.sum() == 0 {
                return Ok(None); // construction undefined for K = 0
            }
            let report = verify_reduction(family, numbers, rule)?;
            Ok(if report.agree { None } else { Some(numbers.clone()) })
        })
        .collect();
    let mut disagreements = Vec::new();
    let mut skipped = 0usize;
    let mut checked = 0usize;
    for (r, numbers) in results.into_iter().zip(instances) {
        match r? {
            Some(bad) => {
                checked += 1;
                disagreements.push(bad);
            }
            None => {
                if family == ReductionFamily::FdssFromPartition && numbers.sum() == 0 {
                    skipped += 1;
                } else {
                    checked += 1;
                }
            }
        }
    }
    Ok(GridReport { checked, skipped, disagreements })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(values: &[u64]) -> NumberInstance {
        NumberInstance::partition(values.to_vec()).unwrap()
    }

    fn fdss(values: &[u64]) -> NumberInstance {
        NumberInstance::fdss(values.to_vec()).unwrap()
    }

    #[test]
    fn odd_sums_are_rejected() {
        assert!(matches!(NumberInstance::partition(vec![1, 2]), Err(Error::OddSum(3))));
    }

    #[test]
    fn partition_oracle_basics() {
        assert!(partition_oracle(&part(&[])).unwrap()); // K = 0, empty subset
        assert!(partition_oracle(&part(&[1, 1])).unwrap());
        assert!(!partition_oracle(&part(&[1, 3])).unwrap());
        assert!(partition_oracle(&part(&[2, 3, 5, 4])).unwrap()); // {3,4} vs {2,5}
    }

    #[test]
    fn fdss_oracle_basics() {
        assert!(fdss_oracle(&fdss(&[])).unwrap()); // K = 0, both empty
        assert!(fdss_oracle(&fdss(&[1, 1])).unwrap()); // {1} minus {} = 1 = K
        assert!(fdss_oracle(&fdss(&[2, 2])).unwrap()); // {2} minus {} = 2 = K
        // K = 2: {3} - {1} = 2
        assert!(fdss_oracle(&fdss(&[1, 3])).unwrap());
    }

    #[test]
    fn fdss_oracle_brute_cross_check() {
        // enumerate all 3^t assignments as the independent check
        for values in [vec![1u64, 1], vec![1, 3], vec![2, 2], vec![1, 2, 3], vec![5, 1, 2, 4]] {
            let inst = match NumberInstance::fdss(values.clone()) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let k = inst.half() as i64;
            let t = values.len() as u32;
            let mut expected = false;
            for mask in 0..3u32.pow(t) {
                let mut rest = mask;
                let mut diff = 0i64;
                for &v in &values {
                    match rest % 3 {
                        1 => diff += v as i64,
                        2 => diff -= v as i64,
                        _ => {}
                    }
                    rest /= 3;
                }
                if diff == k {
                    expected = true;
                    break;
                }
            }
            assert_eq!(fdss_oracle(&inst).unwrap(), expected, "values {values:?}");
        }
    }

    #[test]
    fn fdss_construction_worked_examples() {
        // {1,1}: 2K = 2, n = 1, powers 8 and 32
        let out = fdss_from_partition(&part(&[1, 1])).unwrap();
        assert_eq!(out.values(), &[9, 33, 8, 32]);
        assert!(fdss_oracle(&out).unwrap());
        // {2,2}: 2K = 4, n = 2, powers 16 and 64
        let out = fdss_from_partition(&part(&[2, 2])).unwrap();
        assert_eq!(out.values(), &[18, 66, 16, 64]);
        assert!(fdss_oracle(&out).unwrap());
        // {1,3} has no partition and the image has no certificate either
        let out = fdss_from_partition(&part(&[1, 3])).unwrap();
        assert_eq!(out.values(), &[17, 67, 16, 64]);
        assert!(!fdss_oracle(&out).unwrap());
    }

    #[test]
    fn adjacent_powers_would_break_the_construction() {
        // With tails 2^(n+i) the no-instance {1,3} maps to {9,19,8,16},
        // which admits the spurious certificate {19,16} against {9}.
        let bad_image = fdss(&[9, 19, 8, 16]);
        assert_eq!(bad_image.half(), 26);
        assert!(fdss_oracle(&bad_image).unwrap());
        assert!(!partition_oracle(&part(&[1, 3])).unwrap());
    }

    #[test]
    fn fdss_construction_rejects_empty_target() {
        assert!(fdss_from_partition(&part(&[0, 0])).is_err());
    }

    #[test]
    fn case1_worked_example() {
        // Partition {1,1} with Borda (2,1,0): S = {3:(a,b,p), 3:(b,a,p)},
        // T = [3,3]
        let rule = RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundDown);
        let Generated::Manipulation(inst) =
            gen_instance(ReductionFamily::RoundDownCase1, &part(&[1, 1]), &rule).unwrap()
        else {
            panic!("expected a manipulation instance")
        };
        assert_eq!(inst.fixed.len(), 2);
        assert_eq!(inst.fixed[0].weight, 3);
        assert_eq!(inst.fixed[1].weight, 3);
        assert_eq!(inst.manipulator_weights, vec![3, 3]);
        assert!(solve_brute(&inst).unwrap().feasible);
    }

    #[test]
    fn case1_rejects_wrong_alpha() {
        let rule = RuleSpec::scoring(
            ScoringVector::explicit(vec![int(4), int(3), int(0)]).unwrap(),
            TruncationScheme::RoundDown,
        );
        assert!(matches!(
            gen_instance(ReductionFamily::RoundDownCase1, &part(&[1, 1]), &rule),
            Err(Error::CaseMismatch(_))
        ));
    }

    #[test]
    fn copeland_worked_example() {
        let rule = RuleSpec::copeland(rat(1, 2)).unwrap();
        let Generated::Manipulation(inst) =
            gen_instance(ReductionFamily::Copeland3, &fdss(&[1, 1]), &rule).unwrap()
        else {
            panic!("expected a manipulation instance")
        };
        assert_eq!(inst.fixed[0].weight, 3);
        assert_eq!(inst.fixed[1].weight, 1);
        assert_eq!(inst.manipulator_weights, vec![2, 2]);
        assert!(solve_brute(&inst).unwrap().feasible);
    }

    #[test]
    fn verify_reduction_examples() {
        // (RoundDownCase2, {1,3}, α=(4,3,0)): both answers false
        let rule = RuleSpec::scoring(
            ScoringVector::explicit(vec![int(4), int(3), int(0)]).unwrap(),
            TruncationScheme::RoundDown,
        );
        let report =
            verify_reduction(ReductionFamily::RoundDownCase2, &part(&[1, 3]), &rule).unwrap();
        assert!(report.agree);
        assert!(!report.oracle_answer);

        // (RoundDownCase3, fdss {1,1}, α=(3,2,0)): both true
        let rule = RuleSpec::scoring(
            ScoringVector::explicit(vec![int(3), int(2), int(0)]).unwrap(),
            TruncationScheme::RoundDown,
        );
        let report =
            verify_reduction(ReductionFamily::RoundDownCase3, &fdss(&[1, 1]), &rule).unwrap();
        assert!(report.agree);
        assert!(report.oracle_answer);

        // (AverageScheme, fdss {1,3}): K=2 via {3} - {1}, both true
        let rule = RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::Average);
        let report =
            verify_reduction(ReductionFamily::AverageScheme, &fdss(&[1, 3]), &rule).unwrap();
        assert!(report.agree);
        assert!(report.oracle_answer);
    }

    #[test]
    fn eval_eliminate_veto_fixture() {
        let rule = RuleSpec::eliminate(ScoringVector::veto(3));
        let Generated::Probabilistic(inst) =
            gen_instance(ReductionFamily::EvalEliminateVeto, &part(&[1, 1]), &rule).unwrap()
        else {
            panic!("expected a probabilistic instance")
        };
        let prob = weighted_eval_exact(
            &inst,
            &rule,
            CAND_P,
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert_eq!(prob, rat(1, 2));

        let Generated::Probabilistic(inst) =
            gen_instance(ReductionFamily::EvalEliminateVeto, &part(&[1, 3]), &rule).unwrap()
        else {
            panic!("expected a probabilistic instance")
        };
        let prob = weighted_eval_exact(
            &inst,
            &rule,
            CAND_P,
            WinnerModel::NonUnique,
            TieBreak::Lexicographic,
        )
        .unwrap();
        assert_eq!(prob, int(0));
    }

    #[test]
    fn single_manipulator_thresholds_on_the_eval_fixture() {
        use crate::uncertainty::cwim_u;
        let rule = RuleSpec::eliminate(ScoringVector::veto(3));
        let Generated::Probabilistic(inst) =
            gen_instance(ReductionFamily::EvalEliminateVeto, &part(&[1, 1]), &rule).unwrap()
        else {
            panic!("expected a probabilistic instance")
        };
        // p wins with probability 1/2: above r = 0, not above r = 1/2, for a
        // weight-0 manipulator
        let out = cwim_u(&inst, 0, CAND_P, int(0), &rule).unwrap();
        assert!(out.feasible);
        let out = cwim_u(&inst, 0, CAND_P, rat(1, 2), &rule).unwrap();
        assert!(!out.feasible);
    }

    #[test]
    fn eliminate_dwcm_blocking_votes_tie_all_candidates() {
        let rule = RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundUp);
        let anti = anti_instance_from_numbers(&part(&[1, 1]), &rule).unwrap();
        let dwcm = eliminate_dwcm_instance(&anti).unwrap();
        // the blocking votes alone tie all three candidates
        let blocking = &dwcm.fixed[anti.fixed.len()..];
        let profile =
            crate::ballot::Profile::unnamed(3, blocking.to_vec()).unwrap();
        let scores =
            crate::rules::positional_scores(&profile, &ScoringVector::borda(3), TruncationScheme::RoundUp)
                .unwrap();
        assert_eq!(scores[0], scores[1]);
        assert_eq!(scores[1], scores[2]);
    }

    #[test]
    fn grid_enumeration_counts_multisets() {
        let grid = enumerate_number_instances(2, 2, NumberKind::Partition);
        // multisets over {0,1,2} of size ≤ 2 with even sums: {}, {0}, {2},
        // {0,0}, {0,2}, {1,1}, {2,2}
        assert_eq!(grid.len(), 7);
    }

    #[test]
    fn small_grid_agrees() {
        let rule = RuleSpec::scoring(ScoringVector::borda(3), TruncationScheme::RoundDown);
        let report = verify_family_grid(ReductionFamily::RoundDownCase1, &rule, 3, 4).unwrap();
        assert!(report.all_agree(), "disagreements: {:?}", report.disagreements);
        assert!(report.checked > 0);
    }
}
