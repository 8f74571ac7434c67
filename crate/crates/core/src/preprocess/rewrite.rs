//! Passes that re-express `$REPLACE_t` and inflection g-transforms with the
//! generalised `$SPELL` and `$INFLECT_POS` tags. Both preserve what the tags
//! produce, and both are idempotent.

use crate::apply::Resources;
use crate::inflector::{InflectionEngine, VerbFormDictionary};
use crate::labeled::LabeledSentence;
use crate::speller::SpellDictionary;
use crate::tag::EditTag;

/// `$REPLACE_t` becomes `$SPELL` wherever the speller's correction of the
/// source token is exactly `t`.
pub fn rewrite_spell(mut labeled: LabeledSentence, dict: &SpellDictionary) -> LabeledSentence {
    for (tok, tag) in labeled.source.iter().zip(labeled.tags.iter_mut()) {
        if tok.is_start() {
            continue;
        }
        if let EditTag::Replace(t) = tag {
            if dict.correct(tok.as_str()).is_some_and(|s| s.word == *t) {
                *tag = EditTag::Spell;
            }
        }
    }
    labeled
}

/// Drop the noun-number and verb-form transforms in favour of `$INFLECT_POS`
/// (or `$REPLACE` of their output when no inflection reaches it), then turn
/// every `$REPLACE_t` that is an inflection of its token into `$INFLECT_POS`.
pub fn rewrite_inflect(
    mut labeled: LabeledSentence,
    engine: &InflectionEngine,
    verb_forms: Option<&VerbFormDictionary>,
) -> LabeledSentence {
    let res = Resources {
        verb_forms,
        ..Default::default()
    };
    for (tok, tag) in labeled.source.iter().zip(labeled.tags.iter_mut()) {
        if tok.is_start() {
            continue;
        }
        if tag.is_inflection_transform() {
            let out = res
                .transform_word(tok, tag)
                .expect("inflection transforms map one token to one token");
            *tag = EditTag::Replace(out.into_string());
        }
        if let EditTag::Replace(t) = tag {
            if let Some(p) = engine.can_inflect_to(tok.as_str(), t) {
                *tag = EditTag::Inflect(p);
            }
        }
    }
    labeled
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflector::InflectionLexicon;
    use crate::tag::{NounNumber, PtbPos};
    use crate::token::tokens;

    fn row(words: &[&str], tags: Vec<EditTag>) -> LabeledSentence {
        LabeledSentence::new(tokens(words).unwrap(), tags).unwrap()
    }

    fn engine() -> InflectionEngine {
        InflectionEngine::new(
            InflectionLexicon::parse(
                "run\tVB\trun\nrun\tVBZ\truns\nrun\tVBD\tran\nactivity\tNN\tactivity\nactivity\tNNS\tactivities\n",
            )
            .unwrap(),
        )
    }

    #[test]
    fn spell_only_on_exact_correction() {
        let d = SpellDictionary::build([("believe", 10u64), ("their", 5), ("there", 9)], 2).unwrap();
        let r = row(
            &["$START", "beleive", "their", "x"],
            vec![
                EditTag::Keep,
                EditTag::Replace("believe".into()),
                EditTag::Replace("there".into()),
                EditTag::Keep,
            ],
        );
        let out = rewrite_spell(r, &d);
        assert_eq!(out.tags[1], EditTag::Spell);
        assert_eq!(out.tags[2], EditTag::Replace("there".into()));
        assert_eq!(rewrite_spell(out.clone(), &d), out);
    }

    #[test]
    fn inflect_rewrites_replace_and_transforms() {
        let e = engine();
        let r = row(
            &["activity", "runs", "good", "cat"],
            vec![
                EditTag::Replace("activities".into()),
                EditTag::Replace("ran".into()),
                EditTag::Replace("delicious".into()),
                EditTag::NounNumber(NounNumber::Plural),
            ],
        );
        let out = rewrite_inflect(r, &e, None);
        assert_eq!(
            out.tags,
            [
                EditTag::Inflect(PtbPos::NNS),
                EditTag::Inflect(PtbPos::VBD),
                EditTag::Replace("delicious".into()),
                EditTag::Inflect(PtbPos::NNS),
            ]
        );
        assert_eq!(rewrite_inflect(out.clone(), &e, None), out);
    }

    #[test]
    fn non_inflectable_transform_becomes_replace() {
        // Naive singular of "bus" is "bu", which no inflection produces.
        let r = row(&["bus"], vec![EditTag::NounNumber(NounNumber::Singular)]);
        let out = rewrite_inflect(r, &engine(), None);
        assert_eq!(out.tags, [EditTag::Replace("bu".into())]);
    }
}
