//! Random instance generators for the verification suites and the
//! classifier. All generators take the RNG by reference so callers can pin
//! seeds and reproduce a failing case.

use rand::Rng;

use crate::ballot::{CandidateId, TieBreak, TopOrder, WeightedVote, WinnerModel};
use crate::manipulation::{Goal, ManipulationInstance};
use crate::rational::{int, rat};
use crate::reductions::{NumberInstance, NumberKind};
use crate::rules::RuleSpec;
use crate::uncertainty::{PartialProfile, ProbVoter, ProbabilisticInstance};

/// A canonical random top order: length 1..=m, never m-1, candidates drawn
/// without replacement.
pub fn random_top_order(rng: &mut impl Rng, m: usize) -> TopOrder {
    let mut len = rng.gen_range(1..=m);
    if len + 1 == m {
        len = m; // length m-1 ballots canonicalize to complete orders
    }
    let mut pool: Vec<u32> = (0..m as u32).collect();
    let mut ranked = Vec::with_capacity(len);
    for _ in 0..len {
        let i = rng.gen_range(0..pool.len());
        ranked.push(CandidateId(pool.swap_remove(i)));
    }
    TopOrder::new(ranked, m).expect("distinct in-range candidates")
}

pub fn random_votes(
    rng: &mut impl Rng,
    m: usize,
    count: usize,
    max_weight: i64,
) -> Vec<WeightedVote> {
    (0..count)
        .map(|_| WeightedVote {
            ballot: random_top_order(rng, m),
            weight: rng.gen_range(0..=max_weight),
        })
        .collect()
}

/// A random manipulation instance for the oracle-equivalence suites.
#[allow(clippy::too_many_arguments)]
pub fn random_instance(
    rng: &mut impl Rng,
    m: usize,
    max_fixed: usize,
    max_manipulators: usize,
    max_weight: i64,
    goal_of: impl Fn(CandidateId) -> Goal,
    rule: RuleSpec,
    model: WinnerModel,
    tiebreak: TieBreak,
) -> ManipulationInstance {
    let n_fixed = rng.gen_range(0..=max_fixed);
    let fixed = random_votes(rng, m, n_fixed, max_weight);
    let manipulators: Vec<i64> =
        (0..rng.gen_range(0..=max_manipulators)).map(|_| rng.gen_range(0..=max_weight)).collect();
    let target = CandidateId(rng.gen_range(0..m as u32));
    ManipulationInstance::new(m, fixed, manipulators, goal_of(target), rule, model, tiebreak)
        .expect("generated instance is valid")
}

/// A random partially revealed profile: each vote reveals a prefix of random
/// length.
pub fn random_partial_profile(
    rng: &mut impl Rng,
    m: usize,
    max_votes: usize,
    max_weight: i64,
) -> PartialProfile {
    let n_votes = rng.gen_range(1..=max_votes);
    let votes = random_votes(rng, m, n_votes, max_weight);
    PartialProfile::new(m, votes).expect("generated prefixes are valid")
}

/// A random number instance with exactly `t` values in `0..=max_value`,
/// resampled until the sum is even.
pub fn random_number_instance(
    rng: &mut impl Rng,
    kind: NumberKind,
    t: usize,
    max_value: u64,
) -> NumberInstance {
    loop {
        let values: Vec<u64> = (0..t).map(|_| rng.gen_range(0..=max_value)).collect();
        if let Ok(inst) = NumberInstance::new(kind, values) {
            return inst;
        }
    }
}

/// A random probabilistic instance: 1..=max_voters voters, each with a
/// support of one or two distinct ballots carrying exact probabilities.
pub fn random_probabilistic_instance(
    rng: &mut impl Rng,
    m: usize,
    max_voters: usize,
    max_weight: i64,
) -> ProbabilisticInstance {
    let n = rng.gen_range(1..=max_voters);
    let voters = (0..n)
        .map(|_| {
            let weight = rng.gen_range(0..=max_weight);
            let first = random_top_order(rng, m);
            let support = if rng.gen_bool(0.5) {
                vec![(first, int(1))]
            } else {
                let mut second = random_top_order(rng, m);
                while second == first {
                    second = random_top_order(rng, m);
                }
                let p = if rng.gen_bool(0.5) { rat(1, 2) } else { rat(1, 3) };
                vec![(first, p), (second, int(1) - p)]
            };
            ProbVoter { weight, support }
        })
        .collect();
    ProbabilisticInstance::new(m, voters).expect("generated supports are valid")
}

/// A reproducible batch of random number instances, each with between 1 and
/// `max_t` values.
pub fn sample_number_instances(
    seed: u64,
    count: usize,
    max_t: usize,
    max_value: u64,
    kind: NumberKind,
) -> Vec<NumberInstance> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = rng.gen_range(1..=max_t.max(1));
            random_number_instance(&mut rng, kind, t, max_value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::canonicalize_ballot;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_orders_are_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 1..=5 {
            for _ in 0..200 {
                let b = random_top_order(&mut rng, m);
                assert_eq!(canonicalize_ballot(&b, m).unwrap(), b);
            }
        }
    }

    #[test]
    fn random_number_instances_have_even_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let inst = random_number_instance(&mut rng, NumberKind::Partition, 5, 9);
            assert_eq!(inst.sum() % 2, 0);
        }
    }
}
