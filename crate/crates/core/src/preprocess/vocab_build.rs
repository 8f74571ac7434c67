use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::labeled::LabeledSentence;
use crate::tag::{EditTag, TagClass};
use crate::vocab::{TagVocabulary, TagsetKind};

/// Outcome of building a vocabulary from a labeled corpus.
#[derive(Clone, Debug)]
pub struct VocabBuildReport {
    /// Occurrences of every tag seen in the corpus, `$KEEP` included.
    pub tag_counts: HashMap<EditTag, usize>,
    pub kept: TagVocabulary,
    /// Fraction of non-`$KEEP` tag instances the kept vocabulary contains;
    /// 1.0 for a corpus without edits.
    pub coverage: f64,
}

impl VocabBuildReport {
    /// Tags sorted by descending count, ties by canonical text.
    pub fn histogram(&self) -> Vec<(String, usize)> {
        let mut h: Vec<(String, usize)> = self
            .tag_counts
            .iter()
            .map(|(t, &c)| (t.to_string(), c))
            .collect();
        h.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        h
    }

    pub fn distinct_tags(&self) -> usize {
        self.tag_counts.len()
    }

    pub fn edit_instances(&self) -> usize {
        self.tag_counts
            .iter()
            .filter(|(t, _)| !t.is_keep())
            .map(|(_, c)| c)
            .sum()
    }
}

/// Keep every closed-class tag of `kind`, then the most frequent
/// `$APPEND`/`$REPLACE` tags (ties by canonical text) up to `size_limit`.
pub fn build_vocabulary<'a>(
    corpus: impl IntoIterator<Item = &'a LabeledSentence>,
    kind: TagsetKind,
    size_limit: usize,
) -> Result<VocabBuildReport> {
    let closed = kind.closed_class();
    if size_limit < closed.len() {
        return Err(Error::Contract(format!(
            "size limit {size_limit} is below the {} closed-class tags of {kind}",
            closed.len()
        )));
    }

    let mut tag_counts: HashMap<EditTag, usize> = HashMap::new();
    for row in corpus {
        for t in &row.tags {
            *tag_counts.entry(t.clone()).or_default() += 1;
        }
    }

    let mut open: Vec<(&EditTag, usize, String)> = tag_counts
        .iter()
        .filter(|(t, _)| t.class() == TagClass::Open)
        .map(|(t, &c)| (t, c, t.to_string()))
        .collect();
    open.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.2.cmp(&b.2)));

    let mut entries = closed;
    let room = size_limit - entries.len();
    entries.extend(open.into_iter().take(room).map(|(t, _, _)| t.clone()));
    let kept = TagVocabulary::new(kind, entries, size_limit)?;

    let (mut total, mut covered) = (0usize, 0usize);
    for (t, &c) in &tag_counts {
        if t.is_keep() {
            continue;
        }
        total += c;
        if kept.contains(t) {
            covered += c;
        }
    }
    let coverage = if total == 0 {
        1.0
    } else {
        covered as f64 / total as f64
    };

    Ok(VocabBuildReport {
        tag_counts,
        kept,
        coverage,
    })
}
