//! Text formats: profile documents, number-instance files, and the
//! rule-spec grammar.
//!
//! A profile document is UTF-8 text:
//!
//! ```text
//! # comments and blank lines are ignored
//! candidates: a, b, p
//! 3: a > b > p
//! 1: b
//! 1: a > b ? 1/2 | b > a ? 1/2
//! manipulators: 3, 3
//! ```
//!
//! The `candidates:` header comes first. Each vote line is
//! `<weight>: <ballot>`, a ballot being candidate names joined by `>`.
//! A probabilistic line lists `<ballot> ? <prob>` alternatives joined by
//! `|`, with exact rational probabilities summing to 1. The optional
//! `manipulators:` line gives the coalition's weights for the manipulation
//! commands. Weights are non-negative integers and probabilities are
//! `num/den` rationals; no decimals are accepted.

use std::fmt;

use ttvote::rational::{int, Rational};
use ttvote::rules::{RuleSpec, ScoringVector, TruncationScheme};
use ttvote::uncertainty::{PartialProfile, ProbVoter, ProbabilisticInstance};
use ttvote::{CandidateId, Profile, TopOrder, WeightedVote};

/// A parse failure with its location in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

/// One parsed vote line.
#[derive(Debug, Clone, PartialEq)]
pub enum VoteLine {
    Ballot(TopOrder),
    Distribution(Vec<(TopOrder, Rational)>),
}

/// A parsed profile document. The same document can be read as a plain
/// profile, as a partially revealed profile (vote lines become prefixes), or
/// as a probabilistic instance, depending on the command.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDocument {
    pub names: Vec<String>,
    pub votes: Vec<(i64, VoteLine)>,
    pub manipulators: Vec<i64>,
}

impl ProfileDocument {
    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn candidate(&self, name: &str) -> Option<CandidateId> {
        self.names.iter().position(|n| n == name).map(|i| CandidateId(i as u32))
    }

    fn deterministic_votes(&self) -> Result<Vec<WeightedVote>, ParseError> {
        self.votes
            .iter()
            .map(|(w, line)| match line {
                VoteLine::Ballot(b) => Ok(WeightedVote { ballot: b.clone(), weight: *w }),
                VoteLine::Distribution(_) => err(
                    0,
                    0,
                    "this command needs deterministic ballots, but the document has probabilistic lines",
                ),
            })
            .collect()
    }

    /// The document as a plain profile; rejects probabilistic lines.
    pub fn to_profile(&self) -> Result<Profile, ParseError> {
        Profile::new(self.names.clone(), self.deterministic_votes()?)
            .map_err(|e| ParseError { line: 0, col: 0, msg: e.to_string() })
    }

    /// The document's vote lines as revealed prefixes.
    pub fn to_partial(&self) -> Result<PartialProfile, ParseError> {
        PartialProfile::new(self.m(), self.deterministic_votes()?)
            .map_err(|e| ParseError { line: 0, col: 0, msg: e.to_string() })
    }

    /// The document as a probabilistic instance; deterministic lines become
    /// singleton supports.
    pub fn to_probabilistic(&self) -> Result<ProbabilisticInstance, ParseError> {
        let voters = self
            .votes
            .iter()
            .map(|(w, line)| match line {
                VoteLine::Ballot(b) => {
                    ProbVoter { weight: *w, support: vec![(b.clone(), int(1))] }
                }
                VoteLine::Distribution(support) => {
                    ProbVoter { weight: *w, support: support.clone() }
                }
            })
            .collect();
        ProbabilisticInstance::new(self.m(), voters)
            .map_err(|e| ParseError { line: 0, col: 0, msg: e.to_string() })
    }
}

/// Parses a profile document; ballots are canonicalized.
pub fn parse_profile(text: &str) -> Result<ProfileDocument, ParseError> {
    let mut names: Option<Vec<String>> = None;
    let mut votes = Vec::new();
    let mut manipulators = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("candidates:") {
            if names.is_some() {
                return err(lineno, 1, "duplicate candidates header");
            }
            let list: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
            if list.iter().any(|s| s.is_empty()) {
                return err(lineno, 1, "empty candidate name");
            }
            for (i, a) in list.iter().enumerate() {
                if list[..i].contains(a) {
                    return err(lineno, 1, format!("duplicate candidate name '{a}'"));
                }
            }
            names = Some(list);
            continue;
        }
        if let Some(rest) = line.strip_prefix("manipulators:") {
            for part in rest.split(',') {
                let part = part.trim();
                let w = parse_weight(part, lineno)?;
                manipulators.push(w);
            }
            continue;
        }
        let Some(names) = names.as_ref() else {
            return err(lineno, 1, "vote line before the candidates header");
        };
        let Some((weight_str, ballot_str)) = line.split_once(':') else {
            return err(lineno, 1, "expected '<weight>: <ballot>'");
        };
        let weight = parse_weight(weight_str.trim(), lineno)?;
        let vote = if ballot_str.contains('?') {
            let mut support = Vec::new();
            for alt in ballot_str.split('|') {
                let Some((ballot_part, prob_part)) = alt.split_once('?') else {
                    return err(lineno, 1, "probabilistic alternative needs '<ballot> ? <prob>'");
                };
                let ballot = parse_ballot(ballot_part, names, lineno)?;
                let prob = parse_rational(prob_part.trim(), lineno)?;
                support.push((ballot, prob));
            }
            VoteLine::Distribution(support)
        } else {
            VoteLine::Ballot(parse_ballot(ballot_str, names, lineno)?)
        };
        votes.push((weight, vote));
    }
    let Some(names) = names else {
        return err(1, 1, "missing 'candidates:' header");
    };
    Ok(ProfileDocument { names, votes, manipulators })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_weight(s: &str, lineno: usize) -> Result<i64, ParseError> {
    let w: i64 = s
        .parse()
        .map_err(|_| ParseError { line: lineno, col: 1, msg: format!("invalid weight '{s}'") })?;
    if w < 0 {
        return err(lineno, 1, format!("weights must be non-negative, got {w}"));
    }
    if w > 1 << 40 {
        return err(lineno, 1, format!("weight {w} exceeds the supported range"));
    }
    Ok(w)
}

/// An exact rational: `num/den` or a plain integer.
pub fn parse_rational(s: &str, lineno: usize) -> Result<Rational, ParseError> {
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num_str.parse().map_err(|_| ParseError {
        line: lineno,
        col: 1,
        msg: format!("invalid rational '{s}' (use num/den with integers)"),
    })?;
    let den: i64 = den_str.parse().map_err(|_| ParseError {
        line: lineno,
        col: 1,
        msg: format!("invalid rational '{s}' (use num/den with integers)"),
    })?;
    if den <= 0 {
        return err(lineno, 1, format!("denominator must be positive in '{s}'"));
    }
    Ok(Rational::new(num, den))
}

fn parse_ballot(s: &str, names: &[String], lineno: usize) -> Result<TopOrder, ParseError> {
    let mut ranked = Vec::new();
    for part in s.split('>') {
        let name = part.trim();
        if name.is_empty() {
            return err(lineno, 1, "empty candidate in ballot");
        }
        let Some(pos) = names.iter().position(|n| n == name) else {
            return err(lineno, 1, format!("unknown candidate '{name}'"));
        };
        ranked.push(CandidateId(pos as u32));
    }
    let order = TopOrder::new(ranked, names.len())
        .map_err(|e| ParseError { line: lineno, col: 1, msg: e.to_string() })?;
    ttvote::canonicalize_ballot(&order, names.len())
        .map_err(|e| ParseError { line: lineno, col: 1, msg: e.to_string() })
}

fn ballot_names(ballot: &TopOrder, names: &[String]) -> String {
    ballot
        .ranked()
        .iter()
        .map(|c| names[c.index()].as_str())
        .collect::<Vec<_>>()
        .join(" > ")
}

/// Serializes a document in canonical form; parsing the output yields an
/// identical document.
pub fn serialize_profile(doc: &ProfileDocument) -> String {
    let mut out = String::new();
    out.push_str("candidates: ");
    out.push_str(&doc.names.join(", "));
    out.push('\n');
    for (w, line) in &doc.votes {
        match line {
            VoteLine::Ballot(b) => {
                out.push_str(&format!("{w}: {}\n", ballot_names(b, &doc.names)));
            }
            VoteLine::Distribution(support) => {
                let alts: Vec<String> = support
                    .iter()
                    .map(|(b, p)| format!("{} ? {}", ballot_names(b, &doc.names), p))
                    .collect();
                out.push_str(&format!("{w}: {}\n", alts.join(" | ")));
            }
        }
    }
    if !doc.manipulators.is_empty() {
        let ws: Vec<String> = doc.manipulators.iter().map(|w| w.to_string()).collect();
        out.push_str(&format!("manipulators: {}\n", ws.join(", ")));
    }
    out
}

/// A number-instance file: one non-negative integer per line, `#` comments.
pub fn parse_numbers(text: &str) -> Result<Vec<u64>, ParseError> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let v: u64 = line.parse().map_err(|_| ParseError {
            line: idx + 1,
            col: 1,
            msg: format!("invalid non-negative integer '{line}'"),
        })?;
        values.push(v);
    }
    Ok(values)
}

/// Rule-spec grammar: `scoring:<name|v1,v2,...>:<up|down|avg>`,
/// `eliminate:<name|v1,v2,...>`, `runoff`, `copeland:<num>/<den>`,
/// `maximin`. Named vectors (`plurality`, `veto`, `borda`) are instantiated
/// at the profile's candidate count.
pub fn parse_rule(text: &str, m: usize) -> Result<RuleSpec, ParseError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["scoring", vector, scheme] => {
            let vector = parse_vector(vector, m)?;
            let scheme = match *scheme {
                "up" => TruncationScheme::RoundUp,
                "down" => TruncationScheme::RoundDown,
                "avg" => TruncationScheme::Average,
                other => return err(1, 1, format!("unknown scheme '{other}' (use up|down|avg)")),
            };
            Ok(RuleSpec::scoring(vector, scheme))
        }
        ["eliminate", vector] => Ok(RuleSpec::eliminate(parse_vector(vector, m)?)),
        ["runoff"] => Ok(RuleSpec::PluralityRunoff),
        ["copeland", alpha] => {
            let alpha = parse_rational(alpha, 1)?;
            RuleSpec::copeland(alpha).map_err(|e| ParseError { line: 1, col: 1, msg: e.to_string() })
        }
        ["maximin"] => Ok(RuleSpec::Maximin),
        _ => err(1, 1, format!("cannot parse rule '{text}'")),
    }
}

fn parse_vector(s: &str, m: usize) -> Result<ScoringVector, ParseError> {
    match s {
        "plurality" => Ok(ScoringVector::plurality(m)),
        "veto" => Ok(ScoringVector::veto(m)),
        "borda" => Ok(ScoringVector::borda(m)),
        _ => {
            let alphas = s
                .split(',')
                .map(|p| parse_rational(p.trim(), 1))
                .collect::<Result<Vec<_>, _>>()?;
            if alphas.len() != m {
                return err(
                    1,
                    1,
                    format!("scoring vector has {} entries but the profile has {m} candidates", alphas.len()),
                );
            }
            ScoringVector::explicit(alphas)
                .map_err(|e| ParseError { line: 1, col: 1, msg: e.to_string() })
        }
    }
}
