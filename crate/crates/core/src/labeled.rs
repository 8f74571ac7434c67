//! Labeled sentences and their JSONL file format.
//!
//! One object per line: `{"src":[...],"tags":[...]}` with an optional
//! `"tgt":[...]` carrying the target the tags were derived from. Tags use the
//! canonical text syntax of [`EditTag`]. Serialising a parsed line reproduces
//! it byte for byte.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tag::EditTag;
use crate::token::Token;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledSentence {
    #[serde(rename = "src")]
    pub source: Vec<Token>,
    pub tags: Vec<EditTag>,
    #[serde(rename = "tgt", default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<Token>>,
}

impl LabeledSentence {
    pub fn new(source: Vec<Token>, tags: Vec<EditTag>) -> Result<Self> {
        if source.len() != tags.len() {
            return Err(Error::Contract(format!(
                "{} tags for {} tokens",
                tags.len(),
                source.len()
            )));
        }
        Ok(LabeledSentence {
            source,
            tags,
            target: None,
        })
    }

    pub fn with_target(mut self, target: Vec<Token>) -> Self {
        self.target = Some(target);
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("labeled sentences always serialise")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let s: LabeledSentence =
            serde_json::from_str(line).map_err(|e| Error::parse(0, e.to_string()))?;
        if s.source.len() != s.tags.len() {
            return Err(Error::parse(
                0,
                format!("{} tags for {} tokens", s.tags.len(), s.source.len()),
            ));
        }
        Ok(s)
    }
}

/// Read a labeled JSONL stream. Blank lines are skipped; errors carry 1-based
/// line numbers.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<LabeledSentence>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<jsonl>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let s = LabeledSentence::from_json_line(&line).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(i + 1, message),
            other => other,
        })?;
        out.push(s);
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(mut w: W, rows: &[LabeledSentence]) -> std::io::Result<()> {
    for r in rows {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}
