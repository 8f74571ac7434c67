//! From parallel sentences to labeled training rows.
//!
//! [`align_and_tag`] assigns basetags, [`rewrite_spell`] and
//! [`rewrite_inflect`] re-express them with the generalised tags, and
//! [`build_vocabulary`] selects a tag inventory. [`preprocess_corpus`] runs
//! the whole chain over a corpus in parallel, keeping input order.

mod align;
mod rewrite;
mod vocab_build;

use std::io::BufRead;

use rayon::prelude::*;
use serde::Serialize;

pub use align::{align_and_tag, align_chain, Alignment, SentencePair};
pub use rewrite::{rewrite_inflect, rewrite_spell};
pub use vocab_build::{build_vocabulary, VocabBuildReport};

use crate::apply::{apply_tags, Resources};
use crate::ensemble::apply_spans;
use crate::error::{Error, Result};
use crate::labeled::LabeledSentence;
use crate::score::M2Sentence;
use crate::token::tokenize;
use crate::vocab::TagsetKind;

/// Alignment rounds allowed per pair before it is dropped.
pub const DEFAULT_MAX_ROUNDS: usize = 4;

/// Per-corpus counters reported alongside the labeled rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PreprocessStats {
    pub pairs: usize,
    pub rows: usize,
    /// Pairs that needed more than one alignment round.
    pub chained: usize,
    /// Pairs that could not be expressed within the round limit.
    pub dropped: usize,
    /// Rows whose tags stopped reproducing their target after a rewrite.
    /// Always zero unless a resource misbehaves; such pairs are dropped too.
    pub round_trip_failures: usize,
}

#[derive(Clone, Debug, Default)]
pub struct PreprocessOutput {
    pub rows: Vec<LabeledSentence>,
    pub stats: PreprocessStats,
}

enum PairOutcome {
    Rows(Vec<LabeledSentence>),
    Unalignable,
    RoundTripFailure,
}

fn check_resources(kind: TagsetKind, res: &Resources<'_>) -> Result<()> {
    if kind.has_spell() && res.speller.is_none() {
        return Err(Error::Contract(format!("tagset {kind} needs a spelling dictionary")));
    }
    if kind.has_inflect() && res.inflector.is_none() {
        return Err(Error::Contract(format!("tagset {kind} needs an inflection engine")));
    }
    Ok(())
}

fn reproduces(row: &LabeledSentence, res: &Resources<'_>) -> bool {
    apply_tags(&row.source, &row.tags, res).ok().as_ref() == row.target.as_ref()
}

fn label_one(pair: &SentencePair, kind: TagsetKind, res: &Resources<'_>, max_rounds: usize) -> PairOutcome {
    let Some(rows) = align_chain(pair, res, max_rounds) else {
        return PairOutcome::Unalignable;
    };
    let mut out = Vec::with_capacity(rows.len());
    for mut row in rows {
        if let (true, Some(d)) = (kind.has_spell(), res.speller) {
            row = rewrite_spell(row, d);
            if !reproduces(&row, res) {
                return PairOutcome::RoundTripFailure;
            }
        }
        if let (true, Some(e)) = (kind.has_inflect(), res.inflector) {
            row = rewrite_inflect(row, e, res.verb_forms);
            if !reproduces(&row, res) {
                return PairOutcome::RoundTripFailure;
            }
        }
        out.push(row);
    }
    PairOutcome::Rows(out)
}

/// Label one pair under `kind`. The rows form an alignment chain (usually of
/// length one); `None` when the pair cannot be expressed.
pub fn label_pair(
    pair: &SentencePair,
    kind: TagsetKind,
    res: &Resources<'_>,
    max_rounds: usize,
) -> Result<Option<Vec<LabeledSentence>>> {
    check_resources(kind, res)?;
    Ok(match label_one(pair, kind, res, max_rounds) {
        PairOutcome::Rows(r) => Some(r),
        _ => None,
    })
}

/// Label a corpus in parallel. Output rows follow input order.
pub fn preprocess_corpus(
    pairs: &[SentencePair],
    kind: TagsetKind,
    res: &Resources<'_>,
    max_rounds: usize,
) -> Result<PreprocessOutput> {
    check_resources(kind, res)?;
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|p| label_one(p, kind, res, max_rounds))
        .collect();

    let mut out = PreprocessOutput::default();
    out.stats.pairs = pairs.len();
    for o in outcomes {
        match o {
            PairOutcome::Rows(rows) => {
                if rows.len() > 1 {
                    out.stats.chained += 1;
                }
                out.rows.extend(rows);
            }
            PairOutcome::Unalignable => out.stats.dropped += 1,
            PairOutcome::RoundTripFailure => {
                out.stats.dropped += 1;
                out.stats.round_trip_failures += 1;
            }
        }
    }
    out.stats.rows = out.rows.len();
    Ok(out)
}

/// Pair up two line-aligned tokenised files.
pub fn read_parallel<R1: BufRead, R2: BufRead>(source: R1, target: R2) -> Result<Vec<SentencePair>> {
    let src: Vec<String> = source
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io("<source>", e))?;
    let tgt: Vec<String> = target
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io("<target>", e))?;
    if src.len() != tgt.len() {
        return Err(Error::Contract(format!(
            "source has {} lines but target has {}",
            src.len(),
            tgt.len()
        )));
    }
    Ok(src
        .iter()
        .zip(&tgt)
        .map(|(s, t)| SentencePair::new(tokenize(s), tokenize(t)))
        .collect())
}

/// Targets made by applying one annotator's gold edits (the first listed
/// annotator when `annotator` is `None`).
pub fn pairs_from_m2(sentences: &[M2Sentence], annotator: Option<u32>) -> Result<Vec<SentencePair>> {
    sentences
        .iter()
        .map(|s| {
            let ann = match annotator {
                Some(id) => s.annotations.iter().find(|a| a.annotator_id == id),
                None => s.annotations.first(),
            };
            let target = match ann {
                Some(a) => apply_spans(&s.source, &a.edits)?,
                None => s.source.clone(),
            };
            Ok(SentencePair::new(s.source.clone(), target))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflector::InflectionEngine;
    use crate::speller::SpellDictionary;
    use crate::tag::EditTag;
    use crate::token::tokens;

    fn pair(s: &str, t: &str) -> SentencePair {
        SentencePair::new(tokenize(s), tokenize(t))
    }

    #[test]
    fn corpus_keeps_order_and_counts() {
        let d = SpellDictionary::build([("believe", 10u64), ("i", 5)], 2).unwrap();
        let e = InflectionEngine::rules_only();
        let res = Resources {
            speller: Some(&d),
            inflector: Some(&e),
            verb_forms: None,
        };
        let pairs = vec![
            pair("I beleive it", "I believe it"),
            pair("two cat", "two cats"),
            pair("a b", "a x y b"),
            pair("same", "same"),
        ];
        let out = preprocess_corpus(&pairs, TagsetKind::SpellInflect, &res, 4).unwrap();
        assert_eq!(out.stats.pairs, 4);
        assert_eq!(out.stats.chained, 1);
        assert_eq!(out.stats.dropped, 0);
        assert_eq!(out.rows.len(), 5);
        assert_eq!(out.rows[0].tags[2], EditTag::Spell);
        assert_eq!(out.rows[1].tags[2], EditTag::Inflect(crate::tag::PtbPos::NNS));
        assert_eq!(out.rows[4].source, tokens(&["$START", "same"]).unwrap());
    }

    #[test]
    fn missing_resources_rejected() {
        let err = preprocess_corpus(&[], TagsetKind::Spell, &Resources::default(), 4);
        assert!(err.is_err());
    }

    #[test]
    fn parallel_files_must_match() {
        let p = read_parallel("a b\nc\n".as_bytes(), "a\nc d\n".as_bytes()).unwrap();
        assert_eq!(p.len(), 2);
        assert!(read_parallel("a\n".as_bytes(), "".as_bytes()).is_err());
    }
}
