use std::collections::HashMap;
use std::path::Path;

use super::lexicon::{parse_rows, read_rows, LexiconRow};
use crate::error::Result;
use crate::tag::PtbPos;
use crate::token::{starts_uppercase, upper_first};

/// Word → verb-forms table backing the basetags `$VERB_FORM_SRC_DST` transform.
/// Only VB* rows of a lexicon file are used.
#[derive(Clone, Debug, Default)]
pub struct VerbFormDictionary {
    forms: HashMap<(String, PtbPos), Vec<String>>,
    /// (form, tag) → lemmas in file order.
    lemmas: HashMap<(String, PtbPos), Vec<String>>,
}

impl VerbFormDictionary {
    pub fn from_rows(rows: impl IntoIterator<Item = LexiconRow>) -> Self {
        let mut dict = VerbFormDictionary::default();
        for r in rows.into_iter().filter(|r| r.pos.is_verb()) {
            for f in &r.forms {
                let lemmas = dict.lemmas.entry((f.clone(), r.pos)).or_default();
                if !lemmas.contains(&r.lemma) {
                    lemmas.push(r.lemma.clone());
                }
            }
            dict.forms.entry((r.lemma, r.pos)).or_default().extend(r.forms);
        }
        dict
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(VerbFormDictionary::from_rows(parse_rows(text)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(VerbFormDictionary::from_rows(read_rows(path.as_ref())?))
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Re-express `word`, read as the `from` form of a verb, in the `to` form.
    /// `None` when the word is not a known `from` form.
    pub fn transform(&self, word: &str, from: PtbPos, to: PtbPos) -> Option<String> {
        let lower = word.to_lowercase();
        let lemma = self.lemmas.get(&(lower, from))?.first()?;
        let out = self.forms.get(&(lemma.clone(), to))?.first()?;
        Some(if starts_uppercase(word) {
            upper_first(out)
        } else {
            out.clone()
        })
    }

    /// First `(from, to)` pair in verb-form order that turns `word` into `target`.
    pub fn find_transform(&self, word: &str, target: &str) -> Option<(PtbPos, PtbPos)> {
        for from in PtbPos::VERB_FORMS {
            for to in PtbPos::VERB_FORMS {
                if from != to && self.transform(word, from, to).as_deref() == Some(target) {
                    return Some((from, to));
                }
            }
        }
        None
    }
}
