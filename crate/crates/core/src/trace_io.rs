//! Reading, writing and replaying move traces.
//!
//! The text form is one `A->C` per LF-terminated line and carries no header,
//! so parsing it needs the variant, rules and initial state from elsewhere.
//! The JSON form is self-describing with a fixed field order:
//!
//! ```text
//! {"variant":"bouncing","alpha":"1/2","n":3,"initial":"AAA","moves":[["A","B"],...]}
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rules::{Configuration, Move, MoveError, MoveTrace, PegId, RuleError, RuleSet};
use crate::solver::{self, SolverVariant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: expected `X->Y`, found {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown peg {letter:?}")]
    UnknownPeg { line: usize, letter: char },
    #[error("line {line}: move from {peg} to itself")]
    SelfMove { line: usize, peg: PegId },
    #[error("declared n = {declared} but the initial word has {actual} disks")]
    LengthMismatch { declared: usize, actual: usize },
    #[error("variant {variant} does not run under alpha = {alpha}")]
    VariantMismatch {
        variant: TraceVariant,
        alpha: RuleSet,
    },
    #[error("unknown trace variant {0:?}")]
    UnknownVariant(String),
    #[error("unsupported trace format {0:?}")]
    UnsupportedFormat(String),
    #[error("text traces need a header giving variant, alpha and initial state")]
    MissingHeader,
    #[error("invalid JSON trace: {0}")]
    Json(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Which procedure produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceVariant {
    Bouncing,
    Hanoi,
    Alt,
    /// A shortest path for some other `alpha`, found by search.
    Levitating,
}

impl TraceVariant {
    pub fn label(self) -> &'static str {
        match self {
            TraceVariant::Bouncing => "bouncing",
            TraceVariant::Hanoi => "hanoi",
            TraceVariant::Alt => "alt",
            TraceVariant::Levitating => "levitating",
        }
    }

    /// The only rules a fixed variant runs under; `None` for levitating.
    pub fn fixed_rules(self) -> Option<RuleSet> {
        match self {
            TraceVariant::Bouncing | TraceVariant::Alt => Some(RuleSet::BOUNCING),
            TraceVariant::Hanoi => Some(RuleSet::HANOI),
            TraceVariant::Levitating => None,
        }
    }

    pub fn solver(self) -> Option<SolverVariant> {
        match self {
            TraceVariant::Bouncing => Some(SolverVariant::Bouncing),
            TraceVariant::Hanoi => Some(SolverVariant::Hanoi),
            TraceVariant::Alt => Some(SolverVariant::BouncingAlternative),
            TraceVariant::Levitating => None,
        }
    }
}

impl From<SolverVariant> for TraceVariant {
    fn from(v: SolverVariant) -> Self {
        match v {
            SolverVariant::Bouncing => TraceVariant::Bouncing,
            SolverVariant::Hanoi => TraceVariant::Hanoi,
            SolverVariant::BouncingAlternative => TraceVariant::Alt,
        }
    }
}

impl fmt::Display for TraceVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TraceVariant {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bouncing" => Ok(TraceVariant::Bouncing),
            "hanoi" => Ok(TraceVariant::Hanoi),
            "alt" => Ok(TraceVariant::Alt),
            "levitating" => Ok(TraceVariant::Levitating),
            _ => Err(TraceError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Json,
}

impl FromStr for TraceFormat {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(TraceFormat::Text),
            "json" => Ok(TraceFormat::Json),
            _ => Err(TraceError::UnsupportedFormat(s.to_string())),
        }
    }
}

/// Everything about a trace except the moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceHeader {
    variant: TraceVariant,
    rules: RuleSet,
    initial: Configuration,
}

impl TraceHeader {
    pub fn new(
        variant: TraceVariant,
        rules: RuleSet,
        initial: Configuration,
    ) -> Result<Self, TraceError> {
        if variant.fixed_rules().is_some_and(|r| r != rules) {
            return Err(TraceError::VariantMismatch {
                variant,
                alpha: rules,
            });
        }
        Ok(TraceHeader {
            variant,
            rules,
            initial,
        })
    }

    /// `n` disks stacked on `A`, the start of every solver run.
    pub fn tower(variant: TraceVariant, rules: RuleSet, n: usize) -> Result<Self, TraceError> {
        TraceHeader::new(variant, rules, Configuration::tower(n, PegId::A)?)
    }

    pub fn variant(&self) -> TraceVariant {
        self.variant
    }

    pub fn rules(&self) -> RuleSet {
        self.rules
    }

    pub fn initial(&self) -> &Configuration {
        &self.initial
    }

    pub fn disk_count(&self) -> usize {
        self.initial.disk_count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDocument {
    pub header: TraceHeader,
    pub moves: MoveTrace,
}

impl TraceDocument {
    pub fn new(header: TraceHeader, moves: MoveTrace) -> Self {
        TraceDocument { header, moves }
    }

    /// The output of `solver::solve` wrapped with its header.
    pub fn from_solver(variant: SolverVariant, n: usize) -> Result<Self, TraceError> {
        let header = TraceHeader::tower(variant.into(), variant.rules(), n)?;
        Ok(TraceDocument::new(header, solver::solve(variant, n)))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTrace {
    variant: String,
    alpha: String,
    n: usize,
    initial: String,
    moves: Vec<[PegId; 2]>,
}

pub fn serialize_trace(doc: &TraceDocument, format: TraceFormat) -> String {
    match format {
        TraceFormat::Text => {
            let mut out = String::with_capacity(5 * doc.moves.len());
            for m in &doc.moves {
                out.push_str(&m.to_string());
                out.push('\n');
            }
            out
        }
        TraceFormat::Json => {
            let h = &doc.header;
            let json = JsonTrace {
                variant: h.variant.label().to_string(),
                alpha: h.rules.to_string(),
                n: h.disk_count(),
                initial: h.initial.to_word(),
                moves: doc.moves.iter().map(|m| [m.from(), m.to()]).collect(),
            };
            let mut out = serde_json::to_string(&json).expect("plain data serializes");
            out.push('\n');
            out
        }
    }
}

/// Inverse of [`serialize_trace`]. `header` is required for text input and
/// ignored for JSON, which carries its own.
pub fn parse_trace(
    input: &str,
    format: TraceFormat,
    header: Option<TraceHeader>,
) -> Result<TraceDocument, TraceError> {
    match format {
        TraceFormat::Text => {
            let header = header.ok_or(TraceError::MissingHeader)?;
            Ok(TraceDocument::new(header, parse_text_moves(input)?))
        }
        TraceFormat::Json => parse_json(input),
    }
}

/// Parses the body of a text trace. A final line without its LF is accepted.
pub fn parse_text_moves(input: &str) -> Result<MoveTrace, TraceError> {
    let body = input.strip_suffix('\n').unwrap_or(input);
    if body.is_empty() {
        return Ok(MoveTrace::new());
    }
    body.split('\n')
        .enumerate()
        .map(|(i, text)| parse_line(i + 1, text))
        .collect()
}

fn parse_line(line: usize, text: &str) -> Result<Move, TraceError> {
    let malformed = || TraceError::Malformed {
        line,
        text: text.to_string(),
    };
    let mut chars = text.chars();
    let (Some(from), Some('-'), Some('>'), Some(to), None) = (
        chars.next(),
        chars.next(),
        chars.next(),
        chars.next(),
        chars.next(),
    ) else {
        return Err(malformed());
    };
    let peg = |letter: char| {
        PegId::from_letter(letter).map_err(|_| TraceError::UnknownPeg { line, letter })
    };
    let (from, to) = (peg(from)?, peg(to)?);
    Move::new(from, to).map_err(|_| TraceError::SelfMove { line, peg: from })
}

fn parse_json(input: &str) -> Result<TraceDocument, TraceError> {
    let raw: JsonTrace =
        serde_json::from_str(input).map_err(|e| TraceError::Json(e.to_string()))?;
    let variant: TraceVariant = raw.variant.parse()?;
    let rules: RuleSet = raw.alpha.parse()?;
    let initial = Configuration::from_word(&raw.initial)?;
    if initial.disk_count() != raw.n {
        return Err(TraceError::LengthMismatch {
            declared: raw.n,
            actual: initial.disk_count(),
        });
    }
    let moves = raw
        .moves
        .iter()
        .enumerate()
        .map(|(i, &[from, to])| {
            Move::new(from, to).map_err(|_| TraceError::SelfMove {
                line: i + 1,
                peg: from,
            })
        })
        .collect::<Result<MoveTrace, _>>()?;
    Ok(TraceDocument::new(
        TraceHeader::new(variant, rules, initial)?,
        moves,
    ))
}

/// Outcome of simulating a trace; illegal moves are reported, not raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    /// Number of moves applied before the first illegal one.
    pub legal_prefix_len: usize,
    pub total_moves: usize,
    /// State after the legal prefix.
    pub final_word: String,
    /// Every move was legal and all disks ended on `C`.
    pub solved: bool,
    pub failure: Option<MoveError>,
}

pub fn replay_verify(doc: &TraceDocument) -> ReplayReport {
    let rules = doc.header.rules;
    let mut state = doc.header.initial.clone();
    let mut failure = None;
    let mut legal = 0;
    for m in &doc.moves {
        match state.apply_move(*m, rules) {
            Ok(next) => {
                state = next;
                legal += 1;
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    ReplayReport {
        legal_prefix_len: legal,
        total_moves: doc.moves.len(),
        final_word: state.to_word(),
        solved: failure.is_none() && state.is_tower_on(PegId::C),
        failure,
    }
}
