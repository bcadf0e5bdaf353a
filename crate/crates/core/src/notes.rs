//! Keyword coding of free-text inspector notes.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::ObservationRecord;
use crate::error::{Error, Result};

/// How many tokens before a positive phrase a negation marker may sit.
const NEGATION_WINDOW: usize = 3;

/// Phrase lists driving note coding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTable {
    /// Phrases that indicate evidence was found.
    pub positive: Vec<String>,
    /// Phrases that indicate the block was checked and found clear.
    pub negative: Vec<String>,
    /// Markers that flip a following positive phrase.
    pub negation: Vec<String>,
}

/// What to do with a note no rule matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnmatchedPolicy {
    /// Leave the record out of the coded output.
    Drop,
    /// Code it as no evidence found.
    Zero,
    /// Fail, naming the first offending record.
    Error,
}

impl RuleTable {
    /// The coding rules used for the generated note pool.
    pub fn builtin() -> Self {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        RuleTable {
            positive: v(&[
                "burrow",
                "burrows",
                "fresh droppings",
                "gnaw marks",
                "rat activity",
                "rats observed",
                "rats present",
            ]),
            negative: v(&["no evidence of rats", "property clear", "inactive"]),
            negation: v(&["no", "not", "none", "without"]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.positive.is_empty() {
            return Err(Error::InvalidConfig(
                "rule table needs at least one positive phrase".into(),
            ));
        }
        for phrase in self
            .positive
            .iter()
            .chain(&self.negative)
            .chain(&self.negation)
        {
            if tokenize(phrase).is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "phrase {phrase:?} has no alphanumeric tokens"
                )));
            }
        }
        Ok(())
    }

    pub fn from_json<R: Read>(reader: R) -> Result<Self> {
        let table: RuleTable = serde_json::from_reader(reader)?;
        table.validate()?;
        Ok(table)
    }

    pub fn from_json_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_json(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn to_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    /// Codes one note. `Some(1)` when a positive phrase survives negation,
    /// `Some(0)` when only negated positives or negative phrases match,
    /// `None` when nothing matches.
    pub fn code_note(&self, note: &str) -> Option<u8> {
        let tokens = tokenize(note);
        let negations: Vec<Vec<String>> = self.negation.iter().map(|p| tokenize(p)).collect();

        let mut saw_negated_positive = false;
        for phrase in &self.positive {
            let needle = tokenize(phrase);
            for start in phrase_starts(&tokens, &needle) {
                if is_negated(&tokens, start, &negations) {
                    saw_negated_positive = true;
                } else {
                    return Some(1);
                }
            }
        }
        if saw_negated_positive {
            return Some(0);
        }
        for phrase in &self.negative {
            let needle = tokenize(phrase);
            if !phrase_starts(&tokens, &needle).is_empty() {
                return Some(0);
            }
        }
        None
    }

    /// Codes every record that still lacks an outcome.
    ///
    /// Records already carrying an outcome pass through untouched. A record
    /// with no outcome and no matching rule (including one with no note at
    /// all) is handled per the policy. Order is preserved.
    pub fn code_all(
        &self,
        records: &[ObservationRecord],
        policy: UnmatchedPolicy,
    ) -> Result<Vec<ObservationRecord>> {
        let mut out = Vec::with_capacity(records.len());
        for rec in records {
            if rec.outcome.is_some() {
                out.push(rec.clone());
                continue;
            }
            let coded = rec.note.as_deref().and_then(|n| self.code_note(n));
            match coded {
                Some(v) => {
                    let mut r = rec.clone();
                    r.outcome = Some(v);
                    out.push(r);
                }
                None => match policy {
                    UnmatchedPolicy::Drop => {}
                    UnmatchedPolicy::Zero => {
                        let mut r = rec.clone();
                        r.outcome = Some(0);
                        out.push(r);
                    }
                    UnmatchedPolicy::Error => {
                        return Err(Error::UnmatchedNote {
                            block: rec.block_id,
                            period: rec.period,
                        })
                    }
                },
            }
        }
        Ok(out)
    }
}

/// Lowercases and splits on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_string())
        .collect()
}

/// Start indices where `needle` occurs as a contiguous token run.
fn phrase_starts(tokens: &[String], needle: &[String]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > tokens.len() {
        return Vec::new();
    }
    (0..=tokens.len() - needle.len())
        .filter(|&i| tokens[i..i + needle.len()] == *needle)
        .collect()
}

/// True when a negation marker ends within the window before `start`.
fn is_negated(tokens: &[String], start: usize, negations: &[Vec<String>]) -> bool {
    let window_from = start.saturating_sub(NEGATION_WINDOW);
    for marker in negations {
        if marker.is_empty() || marker.len() > start {
            continue;
        }
        for s in window_from..start {
            if s + marker.len() <= start && tokens[s..s + marker.len()] == marker[..] {
                return true;
            }
        }
    }
    false
}
