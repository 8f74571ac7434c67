//! Typed edit spans and span-level voting across system outputs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::token::Token;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanType {
    Insert,
    Delete,
    Replace,
}

/// A contiguous edit against source tokens `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EditSpan {
    pub start: usize,
    pub end: usize,
    pub span_type: SpanType,
    pub replacement: Vec<Token>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
}

impl EditSpan {
    /// The type follows from the shape: empty range inserts, empty
    /// replacement deletes. Both empty is not an edit.
    pub fn new(start: usize, end: usize, replacement: Vec<Token>) -> Result<Self> {
        let span_type = match (start == end, replacement.is_empty()) {
            _ if end < start => {
                return Err(Error::Contract(format!("span end {end} before start {start}")))
            }
            (true, true) => {
                return Err(Error::Contract(format!("empty edit at {start}")));
            }
            (true, false) => SpanType::Insert,
            (false, true) => SpanType::Delete,
            (false, false) => SpanType::Replace,
        };
        Ok(EditSpan {
            start,
            end,
            span_type,
            replacement,
            category: None,
        })
    }

    pub fn with_category(mut self, category: impl Into<String>) -> Self {
        self.category = Some(category.into());
        self
    }

    /// Identity used for voting and matching: position and replacement.
    pub fn key(&self) -> (usize, usize, &[Token]) {
        (self.start, self.end, &self.replacement)
    }

    /// Whether applying both spans to one source would be ambiguous.
    pub fn conflicts_with(&self, other: &EditSpan) -> bool {
        let (a, b) = (self, other);
        match (a.start == a.end, b.start == b.end) {
            (true, true) => a.start == b.start,
            (true, false) => b.start < a.start && a.start < b.end,
            (false, true) => a.start < b.start && b.start < a.end,
            (false, false) => a.start < b.end && b.start < a.end,
        }
    }
}

fn sort_spans(spans: &mut [EditSpan]) {
    spans.sort_by(|a, b| a.key().cmp(&b.key()));
}

/// Minimal token diff of `source` → `corrected`, with runs of adjacent edits
/// of one type merged into a single span. Sorted by (start, end).
pub fn extract_spans(source: &[Token], corrected: &[Token]) -> Vec<EditSpan> {
    let (n, m) = (source.len(), corrected.len());
    // dist[i][j]: edits to turn source[i..] into corrected[j..].
    let mut dist = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            dist[i][j] = if i == n {
                (m - j) as u32
            } else if j == m {
                (n - i) as u32
            } else if source[i] == corrected[j] {
                dist[i + 1][j + 1]
            } else {
                1 + dist[i + 1][j + 1].min(dist[i + 1][j]).min(dist[i][j + 1])
            };
        }
    }

    let mut spans: Vec<EditSpan> = Vec::new();
    let mut push = |ty: SpanType, i: usize, tok: Option<&Token>| {
        if let Some(last) = spans.last_mut() {
            if last.span_type == ty && last.end == i {
                if ty != SpanType::Insert {
                    last.end += 1;
                }
                last.replacement.extend(tok.cloned());
                return;
            }
        }
        let end = if ty == SpanType::Insert { i } else { i + 1 };
        spans.push(EditSpan {
            start: i,
            end,
            span_type: ty,
            replacement: tok.into_iter().cloned().collect(),
            category: None,
        });
    };

    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        if i < n && j < m && source[i] == corrected[j] && dist[i][j] == dist[i + 1][j + 1] {
            i += 1;
            j += 1;
        } else if i < n && j < m && dist[i][j] == 1 + dist[i + 1][j + 1] {
            push(SpanType::Replace, i, Some(&corrected[j]));
            i += 1;
            j += 1;
        } else if i < n && dist[i][j] == 1 + dist[i + 1][j] {
            push(SpanType::Delete, i, None);
            i += 1;
        } else {
            push(SpanType::Insert, i, Some(&corrected[j]));
            j += 1;
        }
    }
    spans
}

/// Apply sorted, mutually non-conflicting spans to `source`.
pub fn apply_spans(source: &[Token], spans: &[EditSpan]) -> Result<Vec<Token>> {
    let mut sorted = spans.to_vec();
    sort_spans(&mut sorted);
    let mut out = Vec::with_capacity(source.len());
    let mut pos = 0;
    for (k, s) in sorted.iter().enumerate() {
        if s.end > source.len() {
            return Err(Error::Contract(format!(
                "span [{}, {}) beyond {} tokens",
                s.start,
                s.end,
                source.len()
            )));
        }
        if k > 0 && sorted[k - 1].conflicts_with(s) || s.start < pos {
            return Err(Error::Contract(format!(
                "overlapping spans at [{}, {})",
                s.start, s.end
            )));
        }
        out.extend_from_slice(&source[pos..s.start]);
        out.extend(s.replacement.iter().cloned());
        pos = s.end;
    }
    out.extend_from_slice(&source[pos..]);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct VoteReport {
    pub output: Vec<Token>,
    /// Spans applied to the source, sorted.
    pub accepted: Vec<EditSpan>,
    /// Spans that reached the threshold but conflicted with an earlier one.
    pub dropped_overlaps: usize,
}

/// Vote with a report. `threshold` defaults to k−1 for k systems.
pub fn vote_with_report(
    source: &[Token],
    outputs: &[Vec<Token>],
    threshold: Option<usize>,
) -> Result<VoteReport> {
    let k = outputs.len();
    if k < 2 {
        return Err(Error::Contract(format!("voting needs at least 2 systems, got {k}")));
    }
    let threshold = threshold.unwrap_or(k - 1);
    if threshold == 0 {
        return Err(Error::Contract("vote threshold must be at least 1".into()));
    }

    let mut support: BTreeMap<(usize, usize, Vec<Token>), (EditSpan, usize)> = BTreeMap::new();
    for out in outputs {
        for s in extract_spans(source, out) {
            let key = (s.start, s.end, s.replacement.clone());
            support.entry(key).or_insert((s, 0)).1 += 1;
        }
    }

    let mut accepted: Vec<EditSpan> = Vec::new();
    let mut dropped_overlaps = 0;
    for (span, n) in support.into_values() {
        if n < threshold {
            continue;
        }
        if accepted.iter().any(|a| a.conflicts_with(&span)) {
            dropped_overlaps += 1;
        } else {
            accepted.push(span);
        }
    }
    let output = apply_spans(source, &accepted)?;
    Ok(VoteReport {
        output,
        accepted,
        dropped_overlaps,
    })
}

/// Ensemble output: the source with every span at least `threshold`
/// systems agree on (default k−1 of k).
pub fn vote(source: &[Token], outputs: &[Vec<Token>], threshold: Option<usize>) -> Result<Vec<Token>> {
    vote_with_report(source, outputs, threshold).map(|r| r.output)
}
