//! Voice command dictionary and transcript recognition.
//!
//! A transcript chunk is scored against every phrase and alias in the
//! [`Lexicon`] with [`similarity`]; a candidate is kept only if it clears its
//! entry's threshold, and the best surviving candidate wins. Number phrases
//! ("forty five", "two point one") are handled by [`parse_number`].

mod number;
mod similarity;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Axis;

pub use number::parse_number;
pub use similarity::{edit_distance, normalize, similarity};

/// Lexicon shipped with the crate.
pub const DEFAULT_LEXICON_JSON: &str = include_str!("../../config/lexicon.json");

const THRESHOLD_FLOOR: f64 = 0.05;
const THRESHOLD_CEIL: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandId {
    CreateCube,
    CreateCylinder,
    Translate,
    Rotate,
    Scale,
    Enter,
    Escape,
    Undo,
    Greater,
    Smaller,
    Upwards,
    Down,
    Lateral,
    Lengthwise,
    Vertical,
    Front,
}

impl CommandId {
    pub const ALL: [CommandId; 16] = [
        CommandId::CreateCube,
        CommandId::CreateCylinder,
        CommandId::Translate,
        CommandId::Rotate,
        CommandId::Scale,
        CommandId::Enter,
        CommandId::Escape,
        CommandId::Undo,
        CommandId::Greater,
        CommandId::Smaller,
        CommandId::Upwards,
        CommandId::Down,
        CommandId::Lateral,
        CommandId::Lengthwise,
        CommandId::Vertical,
        CommandId::Front,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommandId::CreateCube => "create_cube",
            CommandId::CreateCylinder => "create_cylinder",
            CommandId::Translate => "translate",
            CommandId::Rotate => "rotate",
            CommandId::Scale => "scale",
            CommandId::Enter => "enter",
            CommandId::Escape => "escape",
            CommandId::Undo => "undo",
            CommandId::Greater => "greater",
            CommandId::Smaller => "smaller",
            CommandId::Upwards => "upwards",
            CommandId::Down => "down",
            CommandId::Lateral => "lateral",
            CommandId::Lengthwise => "lengthwise",
            CommandId::Vertical => "vertical",
            CommandId::Front => "front",
        }
    }

    /// Axis named by a constraint command.
    pub fn axis(self) -> Option<Axis> {
        match self {
            CommandId::Lateral => Some(Axis::X),
            CommandId::Lengthwise => Some(Axis::Y),
            CommandId::Vertical => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for CommandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconEntry {
    pub id: CommandId,
    pub phrase: String,
    pub threshold: f64,
    #[serde(default)]
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCommand {
    pub id: CommandId,
    pub score: f64,
    pub matched_phrase: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdDirection {
    Raise,
    Lower,
}

#[derive(Debug, Error, PartialEq)]
pub enum LexiconError {
    #[error("lexicon line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("lexicon line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("command `{0}` is not present in the lexicon")]
    UnknownCommand(CommandId),
    #[error("threshold step {0} is outside (0, 0.5]")]
    InvalidStep(f64),
}

/// What a transcript chunk turned out to be.
#[derive(Debug, Clone, PartialEq)]
pub enum Utterance {
    Number(f64),
    Command(ScoredCommand),
    Unrecognized,
}

impl Lexicon {
    /// Builds a lexicon, checking every entry invariant. Errors report the
    /// 1-based entry position as the line.
    pub fn new(entries: Vec<LexiconEntry>) -> Result<Self, LexiconError> {
        let lines: Vec<usize> = (1..=entries.len()).collect();
        validate(&entries, &lines, entries.len() + 1)?;
        Ok(Lexicon { entries })
    }

    /// Parses the JSON config format: an array of
    /// `{"id", "phrase", "threshold", "aliases"}` objects.
    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        let entries: Vec<LexiconEntry> =
            serde_json::from_str(text).map_err(|e| LexiconError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        let lines = element_lines(text);
        let end_line = text.lines().count().max(1);
        validate(&entries, &lines, end_line)?;
        Ok(Lexicon { entries })
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn entry(&self, id: CommandId) -> Option<&LexiconEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn threshold(&self, id: CommandId) -> Option<f64> {
        self.entry(id).map(|e| e.threshold)
    }

    /// Best command for a transcript, if any candidate clears its threshold.
    /// Ties go to the entry that appears first in the configuration.
    pub fn match_command(&self, transcript: &str) -> Option<ScoredCommand> {
        let mut best: Option<ScoredCommand> = None;
        for entry in &self.entries {
            for candidate in std::iter::once(&entry.phrase).chain(&entry.aliases) {
                let score = similarity(transcript, candidate);
                if score < entry.threshold {
                    continue;
                }
                if best.as_ref().is_none_or(|b| score > b.score) {
                    best = Some(ScoredCommand {
                        id: entry.id,
                        score,
                        matched_phrase: candidate.clone(),
                    });
                }
            }
        }
        best
    }

    /// Classifies a transcript chunk. Number phrases are recognized first
    /// because their grammar is exact.
    pub fn recognize(&self, transcript: &str) -> Utterance {
        if let Some(n) = parse_number(transcript) {
            return Utterance::Number(n);
        }
        match self.match_command(transcript) {
            Some(cmd) => Utterance::Command(cmd),
            None => Utterance::Unrecognized,
        }
    }

    /// Moves one command's threshold by `step`, clamped to `[0.05, 1.0]`.
    pub fn adjust_threshold(
        &self,
        id: CommandId,
        direction: ThresholdDirection,
        step: f64,
    ) -> Result<Lexicon, LexiconError> {
        if !(step > 0.0 && step <= 0.5) {
            return Err(LexiconError::InvalidStep(step));
        }
        let mut next = self.clone();
        let entry = next
            .entries
            .iter_mut()
            .find(|e| e.id == id)
            .ok_or(LexiconError::UnknownCommand(id))?;
        let moved = match direction {
            ThresholdDirection::Raise => entry.threshold + step,
            ThresholdDirection::Lower => entry.threshold - step,
        };
        // thresholds are kept on a 1e-6 grid so repeated steps do not drift
        let moved = (moved * 1e6).round() / 1e6;
        entry.threshold = moved.clamp(THRESHOLD_FLOOR, THRESHOLD_CEIL);
        Ok(next)
    }
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::from_json(DEFAULT_LEXICON_JSON).expect("shipped lexicon is valid")
    }
}

fn validate(
    entries: &[LexiconEntry],
    lines: &[usize],
    end_line: usize,
) -> Result<(), LexiconError> {
    let line_of = |i: usize| lines.get(i).copied().unwrap_or(1);
    let invalid = |i: usize, message: String| LexiconError::Invalid {
        line: line_of(i),
        message,
    };

    let mut ids = HashSet::new();
    // normalized text -> owning entry index
    let mut owners: HashMap<String, usize> = HashMap::new();

    for (i, entry) in entries.iter().enumerate() {
        if !ids.insert(entry.id) {
            return Err(invalid(i, format!("duplicate command id `{}`", entry.id)));
        }
        if !(entry.threshold > 0.0 && entry.threshold <= 1.0) {
            return Err(invalid(
                i,
                format!(
                    "threshold {} for `{}` is outside (0, 1]",
                    entry.threshold, entry.id
                ),
            ));
        }
        if entry.phrase.is_empty() || normalize(&entry.phrase) != entry.phrase {
            return Err(invalid(
                i,
                format!(
                    "phrase {:?} must be non-empty, lowercase and single-spaced",
                    entry.phrase
                ),
            ));
        }
        if owners.contains_key(&entry.phrase) {
            return Err(invalid(
                i,
                format!("phrase {:?} is used twice", entry.phrase),
            ));
        }
        owners.insert(entry.phrase.clone(), i);

        for alias in &entry.aliases {
            if alias.is_empty() || normalize(alias) != *alias {
                return Err(invalid(
                    i,
                    format!("alias {alias:?} must be non-empty, lowercase and single-spaced"),
                ));
            }
            match owners.get(alias) {
                Some(&owner) if owner != i => {
                    return Err(invalid(
                        i,
                        format!(
                            "alias {alias:?} collides with entry `{}`",
                            entries[owner].id
                        ),
                    ));
                }
                _ => {
                    owners.insert(alias.clone(), i);
                }
            }
        }
    }

    if let Some(missing) = CommandId::ALL.iter().find(|id| !ids.contains(id)) {
        return Err(LexiconError::Invalid {
            line: end_line,
            message: format!("command `{missing}` has no entry"),
        });
    }
    Ok(())
}

/// 1-based line of each top-level array element's opening brace.
fn element_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let mut line = 1;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
        }
        if in_string {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '[' | '{' => {
                if depth == 1 {
                    lines.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    lines
}
