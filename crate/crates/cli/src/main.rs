//! `ttvote`: winner determination, manipulation solvers, hardness-instance
//! generators and verifiers, and evaluation under uncertainty, for weighted
//! elections with top-truncated ballots.
//!
//! Results are data: an infeasible manipulation still exits 0. Exit code 2
//! marks usage or parse errors, 3 an exhausted search budget.

mod formats;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use formats::{parse_numbers, parse_profile, parse_rule, serialize_profile, ProfileDocument};
use report::Report;
use ttvote::classify::{classify, ClassifyOptions};
use ttvote::manipulation::{
    antiwcm_fast, cwcm_eliminate_veto_unique, cwcm_fast, dwcm_fast, solve_brute_opts, solve_dp3,
    BruteOptions, Goal, ManipulationInstance, ManipulationOutcome,
};
use ttvote::reductions::{
    fdss_from_partition, gen_instance, verify_family_grid, verify_family_over, Generated,
    NumberInstance, ReductionFamily,
};
use ttvote::rules::{rule_scores, RuleSpec};
use ttvote::uncertainty::{cwim_ttu, cwim_u, evaluate_fast, evaluate_possible, weighted_eval_exact};
use ttvote::{CandidateId, Error, TieBreak, TopOrder, WinnerModel};

#[derive(Parser)]
#[command(name = "ttvote", version, about = "weighted elections with top-truncated ballots")]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Nonunique,
    Unique,
}

impl From<ModelArg> for WinnerModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Nonunique => WinnerModel::NonUnique,
            ModelArg::Unique => WinnerModel::Unique,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Lex,
    Opt,
    Pess,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Lex => TieBreak::Lexicographic,
            TieBreakArg::Opt => TieBreak::Optimistic,
            TieBreakArg::Pess => TieBreak::Pessimistic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    Cwcm,
    Dwcm,
    Anti,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Brute,
    Fast,
    Dp3,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    FdssFromPartition,
    Rounddown1,
    Rounddown2,
    Rounddown3,
    Average,
    Copeland3,
    EliminateDwcm,
    EvalEliminateVeto,
}

impl From<FamilyArg> for ReductionFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::FdssFromPartition => ReductionFamily::FdssFromPartition,
            FamilyArg::Rounddown1 => ReductionFamily::RoundDownCase1,
            FamilyArg::Rounddown2 => ReductionFamily::RoundDownCase2,
            FamilyArg::Rounddown3 => ReductionFamily::RoundDownCase3,
            FamilyArg::Average => ReductionFamily::AverageScheme,
            FamilyArg::Copeland3 => ReductionFamily::Copeland3,
            FamilyArg::EliminateDwcm => ReductionFamily::EliminateDwcm,
            FamilyArg::EvalEliminateVeto => ReductionFamily::EvalEliminateVeto,
        }
    }
}

#[derive(Args)]
struct CommonRule {
    /// Rule spec: scoring:<name|v1,v2,..>:<up|down|avg>, eliminate:<name|vector>,
    /// runoff, copeland:<num>/<den>, maximin.
    #[arg(long)]
    rule: String,
    #[arg(long, value_enum, default_value = "nonunique")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "lex")]
    tiebreak: TieBreakArg,
}

#[derive(Subcommand)]
enum Command {
    /// Determine the winner set (and scores, for score-based rules).
    Winners {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: CommonRule,
    },
    /// Solve a coalitional manipulation instance. The profile document's
    /// `manipulators:` line gives the coalition's weights.
    Manipulate {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: CommonRule,
        #[arg(long, value_enum)]
        goal: GoalArg,
        /// Candidate to make win (cwcm), lose (dwcm), or rank last (anti).
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "brute")]
        solver: SolverArg,
        /// For anti: require only a weakly lowest score.
        #[arg(long)]
        weak: bool,
        /// Evaluation budget for the exhaustive solver.
        #[arg(long)]
        budget: Option<u64>,
        /// Restrict the exhaustive solver to complete ballots.
        #[arg(long)]
        complete_only: bool,
    },
    /// Generate a hardness-reduction instance from a number file.
    Reduce {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Number-instance file: one non-negative integer per line.
        #[arg(long)]
        numbers: PathBuf,
        /// Scoring parameters the family is instantiated with.
        #[arg(long)]
        rule: String,
    },
    /// Sweep a reduction family's biconditional over a grid of number
    /// instances (plus an optional random sample) and report agreement.
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 4)]
        max_t: usize,
        #[arg(long, default_value_t = 6)]
        max_value: u64,
        /// Additionally check this many random instances...
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// ...with exactly this many values each.
        #[arg(long, default_value_t = 8)]
        sample_t: usize,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
    },
    /// Possibility or probability evaluation under uncertainty.
    Evaluate {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: CommonRule,
        /// Candidate whose chances are evaluated.
        #[arg(long)]
        target: String,
        /// Treat the vote lines as partially revealed prefixes.
        #[arg(long, conflicts_with = "prob")]
        partial: bool,
        /// Treat the document as a probabilistic instance.
        #[arg(long)]
        prob: bool,
        /// Winning-probability threshold (probabilistic mode).
        #[arg(long, default_value = "0")]
        r: String,
        /// Use the polynomial extension strategy instead of exhaustive search.
        #[arg(long)]
        fast: bool,
    },
    /// Single-manipulator constructive manipulation under uncertainty.
    Cwim {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: CommonRule,
        #[arg(long)]
        target: String,
        #[arg(long, conflicts_with = "prob")]
        partial: bool,
        #[arg(long)]
        prob: bool,
        /// The manipulator's weight.
        #[arg(long)]
        weight: i64,
        /// Winning-probability threshold (probabilistic mode).
        #[arg(long, default_value = "0")]
        r: String,
    },
    /// Run the desk-scale empirical complexity classification.
    Classify {
        #[arg(long, default_value_t = 120)]
        trials: usize,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        grid_t: usize,
        #[arg(long, default_value_t = 6)]
        grid_value: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code)
        }
    }
}

struct CliFailure {
    message: String,
    exit_code: u8,
}

impl From<formats::ParseError> for CliFailure {
    fn from(e: formats::ParseError) -> Self {
        CliFailure { message: e.to_string(), exit_code: 2 }
    }
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        CliFailure { message: e.to_string(), exit_code }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> Self {
        CliFailure { message: e.to_string(), exit_code: 2 }
    }
}

fn usage(msg: impl Into<String>) -> CliFailure {
    CliFailure { message: msg.into(), exit_code: 2 }
}

fn read(path: &PathBuf) -> Result<String, CliFailure> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn resolve_target(doc: &ProfileDocument, name: &str) -> Result<CandidateId, CliFailure> {
    doc.candidate(name).ok_or_else(|| usage(format!("unknown candidate '{name}'")))
}

fn witness_names(witness: &Option<Vec<TopOrder>>, names: &[String]) -> serde_json::Value {
    match witness {
        None => serde_json::Value::Null,
        Some(ballots) => serde_json::Value::Array(
            ballots
                .iter()
                .map(|b| {
                    serde_json::Value::Array(
                        b.ranked()
                            .iter()
                            .map(|c| serde_json::Value::String(names[c.index()].clone()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    }
}

fn run(cli: &Cli) -> Result<(), CliFailure> {
    match &cli.command {
        Command::Winners { profile, rule } => {
            let text = read(profile)?;
            let doc = parse_profile(&text)?;
            let parsed_rule = parse_rule(&rule.rule, doc.m())?;
            let prof = doc.to_profile()?;
            let winners = ttvote::rules::winners(
                &prof,
                &parsed_rule,
                rule.model.into(),
                rule.tiebreak.into(),
            )?;
            let winner_names: Vec<String> =
                winners.iter().map(|c| doc.names[c.index()].clone()).collect();
            let scores = rule_scores(&prof, &parsed_rule).ok();
            let mut report = Report::new("winners", &[&text, &rule.rule]);
            report.insert("winners", serde_json::json!(winner_names));
            if let Some(scores) = &scores {
                let table: serde_json::Map<String, serde_json::Value> = doc
                    .names
                    .iter()
                    .zip(scores)
                    .map(|(n, s)| (n.clone(), serde_json::Value::String(s.to_string())))
                    .collect();
                report.insert("scores", serde_json::Value::Object(table));
            }
            if cli.json {
                println!("{}", report.render());
            } else {
                if let Some(scores) = &scores {
                    for (n, s) in doc.names.iter().zip(scores) {
                        println!("{n}: {s}");
                    }
                }
                println!("winners: {}", winner_names.join(", "));
            }
            Ok(())
        }
        Command::Manipulate {
            profile,
            rule,
            goal,
            target,
            solver,
            weak,
            budget,
            complete_only,
        } => {
            let text = read(profile)?;
            let doc = parse_profile(&text)?;
            let parsed_rule = parse_rule(&rule.rule, doc.m())?;
            let target_id = resolve_target(&doc, target)?;
            let goal = match goal {
                GoalArg::Cwcm => Goal::Constructive(target_id),
                GoalArg::Dwcm => Goal::Destructive(target_id),
                GoalArg::Anti => Goal::AntiLowest { disliked: target_id, strict: !weak },
            };
            let instance = ManipulationInstance::new(
                doc.m(),
                doc.to_profile()?.votes().to_vec(),
                doc.manipulators.clone(),
                goal,
                parsed_rule,
                rule.model.into(),
                rule.tiebreak.into(),
            )?;
            let outcome = dispatch_solver(&instance, *solver, *budget, *complete_only)?;
            let mut report = Report::new("manipulate", &[&text, &rule.rule, target]);
            report.insert("feasible", serde_json::json!(outcome.feasible));
            report.insert("witness", witness_names(&outcome.witness, &doc.names));
            if cli.json {
                println!("{}", report.render());
            } else {
                println!("feasible: {}", outcome.feasible);
                if let Some(w) = &outcome.witness {
                    for (i, b) in w.iter().enumerate() {
                        let names: Vec<&str> =
                            b.ranked().iter().map(|c| doc.names[c.index()].as_str()).collect();
                        println!(
                            "manipulator {} (weight {}): {}",
                            i + 1,
                            instance.manipulator_weights[i],
                            names.join(" > ")
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Reduce { family, numbers, rule } => {
            let text = read(numbers)?;
            let values = parse_numbers(&text)?;
            let family: ReductionFamily = (*family).into();
            let numbers = NumberInstance::new(family.required_kind(), values)?;
            if family == ReductionFamily::FdssFromPartition {
                let out = fdss_from_partition(&numbers)?;
                let mut report = Report::new("reduce", &[&text, rule]);
                report.insert("values", serde_json::json!(out.values()));
                if cli.json {
                    println!("{}", report.render());
                } else {
                    for v in out.values() {
                        println!("{v}");
                    }
                }
                return Ok(());
            }
            let parsed_rule = parse_rule(rule, 3)?;
            let generated = gen_instance(family, &numbers, &parsed_rule)?;
            let doc = generated_to_document(&generated, family);
            let mut report = Report::new("reduce", &[&text, rule]);
            report.insert("profile", serde_json::json!(serialize_profile(&doc)));
            if cli.json {
                println!("{}", report.render());
            } else {
                print!("{}", serialize_profile(&doc));
            }
            Ok(())
        }
        Command::Verify { family, rule, max_t, max_value, samples, sample_t, seed } => {
            let family: ReductionFamily = (*family).into();
            let parsed_rule = parse_rule(rule, 3)?;
            let grid = verify_family_grid(family, &parsed_rule, *max_t, *max_value)?;
            let sampled = if *samples > 0 {
                let instances = ttvote::gen::sample_number_instances(
                    *seed,
                    *samples,
                    *sample_t,
                    *max_value,
                    family.required_kind(),
                );
                Some(verify_family_over(family, &parsed_rule, &instances)?)
            } else {
                None
            };
            let all_agree =
                grid.all_agree() && sampled.as_ref().is_none_or(|s| s.all_agree());
            let checked = grid.checked + sampled.as_ref().map_or(0, |s| s.checked);
            let mut report = Report::new("verify", &[rule, &format!("{family:?}")]);
            report.insert("family", serde_json::json!(format!("{family:?}")));
            report.insert("instances", serde_json::json!(checked));
            report.insert("skipped", serde_json::json!(grid.skipped));
            report.insert("all_agree", serde_json::json!(all_agree));
            if cli.json {
                println!("{}", report.render());
            } else if all_agree {
                println!("all agree ({checked} instances checked, {} skipped)", grid.skipped);
            } else {
                println!("DISAGREEMENT on {} instances", grid.disagreements.len());
                for d in grid.disagreements.iter().take(10) {
                    println!("  {:?}", d.values());
                }
            }
            Ok(())
        }
        Command::Evaluate { profile, rule, target, partial, prob, r, fast } => {
            let text = read(profile)?;
            let doc = parse_profile(&text)?;
            let parsed_rule = parse_rule(&rule.rule, doc.m())?;
            let target_id = resolve_target(&doc, target)?;
            let mut report = Report::new("evaluate", &[&text, &rule.rule, target]);
            if *prob {
                let inst = doc.to_probabilistic()?;
                let threshold = formats::parse_rational(r, 1)?;
                let probability = weighted_eval_exact(
                    &inst,
                    &parsed_rule,
                    target_id,
                    rule.model.into(),
                    rule.tiebreak.into(),
                )?;
                report.insert("probability", serde_json::json!(probability.to_string()));
                report.insert("exceeds_r", serde_json::json!(probability > threshold));
                if cli.json {
                    println!("{}", report.render());
                } else {
                    println!("probability: {probability}");
                    println!("exceeds r={threshold}: {}", probability > threshold);
                }
            } else {
                if !*partial {
                    return Err(usage("evaluate needs --partial or --prob"));
                }
                let partial_profile = doc.to_partial()?;
                let result = if *fast {
                    evaluate_fast(&partial_profile, &parsed_rule, target_id)?
                } else {
                    evaluate_possible(
                        &partial_profile,
                        &parsed_rule,
                        target_id,
                        rule.model.into(),
                        rule.tiebreak.into(),
                    )?
                };
                report.insert("possible", serde_json::json!(result.possible));
                report.insert("witness", witness_names(&result.witness_extension, &doc.names));
                if cli.json {
                    println!("{}", report.render());
                } else {
                    println!("possible: {}", result.possible);
                    if let Some(ext) = &result.witness_extension {
                        for (i, b) in ext.iter().enumerate() {
                            let names: Vec<&str> =
                                b.ranked().iter().map(|c| doc.names[c.index()].as_str()).collect();
                            println!("vote {}: {}", i + 1, names.join(" > "));
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Cwim { profile, rule, target, partial, prob, weight, r } => {
            let text = read(profile)?;
            let doc = parse_profile(&text)?;
            let parsed_rule = parse_rule(&rule.rule, doc.m())?;
            let target_id = resolve_target(&doc, target)?;
            let outcome = if *prob {
                let inst = doc.to_probabilistic()?;
                let threshold = formats::parse_rational(r, 1)?;
                cwim_u(&inst, *weight, target_id, threshold, &parsed_rule)?
            } else {
                if !*partial {
                    return Err(usage("cwim needs --partial or --prob"));
                }
                cwim_ttu(
                    &doc.to_partial()?,
                    *weight,
                    target_id,
                    &parsed_rule,
                    rule.model.into(),
                    rule.tiebreak.into(),
                )?
            };
            let mut report = Report::new("cwim", &[&text, &rule.rule, target]);
            report.insert("feasible", serde_json::json!(outcome.feasible));
            report.insert("witness", witness_names(&outcome.witness, &doc.names));
            if cli.json {
                println!("{}", report.render());
            } else {
                println!("feasible: {}", outcome.feasible);
                if let Some(w) = &outcome.witness {
                    let names: Vec<&str> =
                        w[0].ranked().iter().map(|c| doc.names[c.index()].as_str()).collect();
                    println!("manipulator ballot: {}", names.join(" > "));
                }
            }
            Ok(())
        }
        Command::Classify { trials, seed, grid_t, grid_value } => {
            let opts = ClassifyOptions {
                trials: *trials,
                seed: *seed,
                grid_t: *grid_t,
                grid_value: *grid_value,
            };
            let result = classify(&opts);
            let mut report = Report::new("classify", &[&format!("{opts:?}")]);
            let rows: Vec<serde_json::Value> = result
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "rule": r.rule,
                        "task": r.task,
                        "expected": r.expected.to_string(),
                        "verified": r.verified,
                        "method": r.method,
                        "details": r.details,
                    })
                })
                .collect();
            report.insert("rows", serde_json::Value::Array(rows));
            report.insert("all_verified", serde_json::json!(result.all_verified()));
            if cli.json {
                println!("{}", report.render());
            } else {
                for r in &result.rows {
                    let status = match r.verified {
                        Some(true) => "ok",
                        Some(false) => "FAILED",
                        None => "n/a",
                    };
                    println!(
                        "{:<42} {:<22} expected {:<5} -> {:<6} [{}; {}]",
                        r.rule, r.task, r.expected.to_string(), status, r.method, r.details
                    );
                }
                println!("all verified: {}", result.all_verified());
            }
            Ok(())
        }
    }
}

fn dispatch_solver(
    instance: &ManipulationInstance,
    solver: SolverArg,
    budget: Option<u64>,
    complete_only: bool,
) -> Result<ManipulationOutcome, Error> {
    match solver {
        SolverArg::Brute => {
            let mut opts = BruteOptions::default();
            if let Some(b) = budget {
                opts.budget = b;
            }
            opts.complete_only = complete_only;
            solve_brute_opts(instance, &opts)
        }
        SolverArg::Dp3 => solve_dp3(instance),
        SolverArg::Fast => match instance.goal {
            Goal::Constructive(_) => match &instance.rule {
                RuleSpec::Eliminate { .. } => cwcm_eliminate_veto_unique(instance),
                _ => cwcm_fast(instance),
            },
            Goal::Destructive(_) => dwcm_fast(instance),
            Goal::AntiLowest { .. } => antiwcm_fast(instance),
        },
    }
}

/// Renders a generated instance as a profile document for printing. The
/// distinguished third candidate is the preferred `p`, or the disliked `h`
/// for the destructive family.
fn generated_to_document(generated: &Generated, family: ReductionFamily) -> ProfileDocument {
    let third = if family == ReductionFamily::EliminateDwcm { "h" } else { "p" };
    let names = vec!["a".to_string(), "b".to_string(), third.to_string()];
    match generated {
        Generated::Manipulation(inst) => ProfileDocument {
            names,
            votes: inst
                .fixed
                .iter()
                .map(|v| (v.weight, formats::VoteLine::Ballot(v.ballot.clone())))
                .collect(),
            manipulators: inst.manipulator_weights.clone(),
        },
        Generated::Probabilistic(inst) => ProfileDocument {
            names,
            votes: inst
                .voters()
                .iter()
                .map(|v| {
                    if v.support.len() == 1 {
                        (v.weight, formats::VoteLine::Ballot(v.support[0].0.clone()))
                    } else {
                        (v.weight, formats::VoteLine::Distribution(v.support.clone()))
                    }
                })
                .collect(),
            manipulators: vec![],
        },
    }
}

