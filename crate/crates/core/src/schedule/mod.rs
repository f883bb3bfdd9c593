//! Walking schedules and their line-oriented text format.
//!
//! ```text
//! phase 1/8          # optional, default 0
//! move -5/4          # miles, + forward around the circuit, - backward
//! dump 1
//! take 2
//! unseal
//! discard
//! mark step-1
//! ```
//!
//! Positions are implicit: the walker starts at the base and every `move`
//! is a signed displacement from the current spot.

mod builtins;

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::ratio::{ParseRatioError, Ratio};

pub use builtins::{builtin, builtin_names, BuiltinInfo, BUILTINS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    /// Signed displacement in miles; never zero.
    Move(Ratio),
    /// Leave sealed boxes at the current position.
    Dump(u32),
    /// Pick sealed boxes up from the current position.
    Take(u32),
    Unseal,
    Discard,
    Mark(String),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Move(d) => write!(f, "move {d}"),
            Action::Dump(n) => write!(f, "dump {n}"),
            Action::Take(n) => write!(f, "take {n}"),
            Action::Unseal => f.write_str("unseal"),
            Action::Discard => f.write_str("discard"),
            Action::Mark(label) => write!(f, "mark {label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("line {line}, column {column}: {kind}")]
    Parse { line: usize, column: usize, kind: ParseErrorKind },
    #[error("phase {0} outside [0, 1)")]
    PhaseOutOfRange(Ratio),
    #[error("invalid action `{0}`")]
    InvalidAction(String),
    #[error("unknown builtin `{0}` (valid: alg1, alg2, alg3)")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("malformed rational: {0}")]
    MalformedRational(ParseRatioError),
    #[error("malformed box count `{0}` (expected a positive integer)")]
    MalformedCount(String),
    #[error("phase {0} outside [0, 1)")]
    PhaseOutOfRange(Ratio),
    #[error("zero move")]
    ZeroMove,
    #[error("`{0}` needs an argument")]
    MissingArgument(&'static str),
    #[error("`{0}` takes no argument")]
    UnexpectedArgument(&'static str),
    #[error("phase given twice")]
    DuplicatePhase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    phase: Ratio,
    actions: Vec<Action>,
}

fn check_action(action: &Action) -> Result<(), ScheduleError> {
    let ok = match action {
        Action::Move(d) => !d.is_zero(),
        Action::Dump(n) | Action::Take(n) => *n >= 1,
        Action::Mark(label) => !label.trim().is_empty() && !label.contains(['#', '\n']),
        Action::Unseal | Action::Discard => true,
    };
    if ok {
        Ok(())
    } else {
        Err(ScheduleError::InvalidAction(action.to_string()))
    }
}

fn phase_in_range(phase: &Ratio) -> bool {
    !phase.is_negative() && phase < &Ratio::one()
}

impl Schedule {
    pub fn new(phase: Ratio, actions: Vec<Action>) -> Result<Self, ScheduleError> {
        if !phase_in_range(&phase) {
            return Err(ScheduleError::PhaseOutOfRange(phase));
        }
        actions.iter().try_for_each(check_action)?;
        Ok(Schedule { phase, actions })
    }

    pub fn empty() -> Self {
        Schedule { phase: Ratio::zero(), actions: Vec::new() }
    }

    pub fn phase(&self) -> &Ratio {
        &self.phase
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Sum of `|move|` in miles.
    pub fn total_distance(&self) -> Ratio {
        self.actions
            .iter()
            .filter_map(|a| match a {
                Action::Move(d) => Some(d.abs()),
                _ => None,
            })
            .sum()
    }

    /// Cumulative signed displacement (unwrapped miles) at each mark.
    pub fn mark_offsets(&self) -> Vec<(String, Ratio)> {
        let mut offset = Ratio::zero();
        let mut out = Vec::new();
        for a in &self.actions {
            match a {
                Action::Move(d) => offset += d,
                Action::Mark(label) => out.push((label.clone(), offset.clone())),
                _ => {}
            }
        }
        out
    }

    /// The schedule up to and including the first mark named `label`.
    pub fn prefix_through(&self, label: &str) -> Option<Schedule> {
        let end = self
            .actions
            .iter()
            .position(|a| matches!(a, Action::Mark(l) if l == label))?;
        Some(Schedule { phase: self.phase.clone(), actions: self.actions[..=end].to_vec() })
    }

    /// Same schedule walked in the opposite direction around the circuit.
    pub fn mirrored(&self) -> Schedule {
        self.map_moves(|d| -d)
    }

    /// Every move multiplied by a positive factor.
    pub fn scaled(&self, factor: &Ratio) -> Schedule {
        assert!(factor.is_positive());
        self.map_moves(|d| d * factor)
    }

    fn map_moves(&self, f: impl Fn(&Ratio) -> Ratio) -> Schedule {
        let actions = self
            .actions
            .iter()
            .map(|a| match a {
                Action::Move(d) => Action::Move(f(d)),
                other => other.clone(),
            })
            .collect();
        Schedule { phase: self.phase.clone(), actions }
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::empty()
    }
}

/// Parses the schedule file format. Errors carry 1-based line and column.
pub fn parse_schedule(text: &str) -> Result<Schedule, ScheduleError> {
    let mut phase: Option<Ratio> = None;
    let mut actions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed_start = content.len() - content.trim_start().len();
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = match content.find(char::is_whitespace) {
            Some(i) => (&content[..i], content[i..].trim_start()),
            None => (content, ""),
        };
        let arg_col = trimmed_start + content.len() - rest.len() + 1;
        let err = |column: usize, kind: ParseErrorKind| ScheduleError::Parse { line: line_no, column, kind };
        let need_arg = |name: &'static str| {
            if rest.is_empty() {
                Err(err(trimmed_start + 1, ParseErrorKind::MissingArgument(name)))
            } else {
                Ok(rest)
            }
        };
        let no_arg = |name: &'static str| {
            if rest.is_empty() {
                Ok(())
            } else {
                Err(err(arg_col, ParseErrorKind::UnexpectedArgument(name)))
            }
        };
        let ratio = |s: &str| {
            s.parse::<Ratio>().map_err(|e| err(arg_col, ParseErrorKind::MalformedRational(e)))
        };
        let count = |s: &str| match s.parse::<u32>() {
            Ok(n) if n >= 1 && s.bytes().all(|b| b.is_ascii_digit()) => Ok(n),
            _ => Err(err(arg_col, ParseErrorKind::MalformedCount(s.to_string()))),
        };
        match keyword {
            "phase" => {
                let value = ratio(need_arg("phase")?)?;
                if phase.is_some() {
                    return Err(err(trimmed_start + 1, ParseErrorKind::DuplicatePhase));
                }
                if !phase_in_range(&value) {
                    return Err(err(arg_col, ParseErrorKind::PhaseOutOfRange(value)));
                }
                phase = Some(value);
            }
            "move" => {
                let d = ratio(need_arg("move")?)?;
                if d.is_zero() {
                    return Err(err(arg_col, ParseErrorKind::ZeroMove));
                }
                actions.push(Action::Move(d));
            }
            "dump" => actions.push(Action::Dump(count(need_arg("dump")?)?)),
            "take" => actions.push(Action::Take(count(need_arg("take")?)?)),
            "unseal" => {
                no_arg("unseal")?;
                actions.push(Action::Unseal);
            }
            "discard" => {
                no_arg("discard")?;
                actions.push(Action::Discard);
            }
            "mark" => actions.push(Action::Mark(need_arg("mark")?.to_string())),
            other => {
                return Err(err(trimmed_start + 1, ParseErrorKind::UnknownKeyword(other.to_string())))
            }
        }
    }
    Ok(Schedule { phase: phase.unwrap_or_else(Ratio::zero), actions })
}

/// Canonical text form; `parse_schedule` inverts it exactly.
pub fn format_schedule(s: &Schedule) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "phase {}", s.phase);
    for a in &s.actions {
        let _ = writeln!(out, "{a}");
    }
    out
}
