//! Lemmatisation and inflection to a Penn Treebank target tag: lexicon first,
//! ordered suffix rules second. Inflection is context-free; the coarse part of
//! speech used for lemmatisation comes from a pluggable [`PosHinter`].

mod lexicon;
pub mod rules;
mod verb_forms;

use std::sync::Arc;

pub use lexicon::{parse_rows, InflectionLexicon, LexiconRow};
pub use verb_forms::VerbFormDictionary;

use crate::tag::{CoarsePos, PtbPos};
use crate::token::{starts_uppercase, upper_first};

/// File name of the shipped lexicon.
pub const SHIPPED_LEXICON: &str = "lexicon.tsv";
/// File name of the shipped verb-form dictionary.
pub const SHIPPED_VERB_FORMS: &str = "verb_forms.tsv";

/// Supplies the coarse part of speech of a word being inflected.
pub trait PosHinter: Send + Sync {
    fn coarse_pos(&self, word: &str, target: PtbPos) -> CoarsePos;
}

/// Reads the coarse POS straight off the target tag.
#[derive(Clone, Copy, Debug, Default)]
pub struct TargetPosHinter;

impl PosHinter for TargetPosHinter {
    fn coarse_pos(&self, _word: &str, target: PtbPos) -> CoarsePos {
        target.coarse()
    }
}

#[derive(Clone)]
pub struct InflectionEngine {
    lexicon: InflectionLexicon,
    hinter: Arc<dyn PosHinter>,
}

impl std::fmt::Debug for InflectionEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InflectionEngine")
            .field("lexicon_rows", &self.lexicon.row_count())
            .finish()
    }
}

impl InflectionEngine {
    pub fn new(lexicon: InflectionLexicon) -> Self {
        InflectionEngine {
            lexicon,
            hinter: Arc::new(TargetPosHinter),
        }
    }

    /// Rules only.
    pub fn rules_only() -> Self {
        InflectionEngine::new(InflectionLexicon::default())
    }

    pub fn with_hinter(mut self, hinter: Arc<dyn PosHinter>) -> Self {
        self.hinter = hinter;
        self
    }

    pub fn lexicon(&self) -> &InflectionLexicon {
        &self.lexicon
    }

    fn lemma_lower(&self, lower: &str, pos: CoarsePos) -> String {
        match self.lexicon.lemma_of(lower, pos) {
            Some(l) => l.to_string(),
            None => rules::lemmatize_word(lower, pos),
        }
    }

    pub fn lemmatize(&self, word: &str, pos: CoarsePos) -> String {
        let lemma = self.lemma_lower(&word.to_lowercase(), pos);
        restore_case(word, lemma)
    }

    /// Inflect `word` to `target`. Never fails: worst case the rules produce
    /// some regular form, and empty input comes back unchanged.
    pub fn inflect(&self, word: &str, target: PtbPos) -> String {
        if word.is_empty() {
            return String::new();
        }
        let lower = word.to_lowercase();
        let pos = self.hinter.coarse_pos(&lower, target);
        let lemma = self.lemma_lower(&lower, pos);
        let out = match self.lexicon.forms_of(&lemma, target).and_then(<[String]>::first) {
            Some(f) => f.clone(),
            None => rules::inflect_lemma(&lemma, target),
        };
        restore_case(word, out)
    }

    /// First tag in the fixed 14-tag order whose inflection of `source` is
    /// exactly `target`.
    pub fn can_inflect_to(&self, source: &str, target: &str) -> Option<PtbPos> {
        PtbPos::ALL
            .into_iter()
            .find(|&p| self.inflect(source, p) == target)
    }
}

fn restore_case(original: &str, out: String) -> String {
    if starts_uppercase(original) {
        upper_first(&out)
    } else {
        out
    }
}
