use crate::error::{Error, Result};
use crate::inflector::{InflectionEngine, VerbFormDictionary};
use crate::speller::SpellDictionary;
use crate::tag::EditTag;
use crate::token::Token;

/// The word-level resources tags may consult. Any of them may be missing, in
/// which case the corresponding tags degrade to identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct Resources<'a> {
    pub speller: Option<&'a SpellDictionary>,
    pub inflector: Option<&'a InflectionEngine>,
    pub verb_forms: Option<&'a VerbFormDictionary>,
}

impl<'a> Resources<'a> {
    pub fn new(
        speller: &'a SpellDictionary,
        inflector: &'a InflectionEngine,
        verb_forms: &'a VerbFormDictionary,
    ) -> Self {
        Resources {
            speller: Some(speller),
            inflector: Some(inflector),
            verb_forms: Some(verb_forms),
        }
    }

    /// The result of a single-token tag on `word`, or `None` for tags that do
    /// not map one token to one token (KEEP excepted, which is identity).
    pub fn transform_word(&self, word: &Token, tag: &EditTag) -> Option<Token> {
        let w = word.as_str();
        let out = match tag {
            EditTag::Keep => return Some(word.clone()),
            EditTag::Replace(t) => t.clone(),
            EditTag::Spell => match self.speller.and_then(|d| d.correct(w)) {
                Some(s) => s.word,
                None => return Some(word.clone()),
            },
            EditTag::Inflect(pos) => match self.inflector {
                Some(e) => e.inflect(w, *pos),
                None => return Some(word.clone()),
            },
            EditTag::Case(k) => k.apply(w),
            EditTag::NounNumber(n) => n.apply(w),
            EditTag::VerbForm { from, to } => {
                match self.verb_forms.and_then(|d| d.transform(w, *from, *to)) {
                    Some(s) => s,
                    None => return Some(word.clone()),
                }
            }
            EditTag::Delete | EditTag::Append(_) | EditTag::Merge(_) | EditTag::SplitHyphen => {
                return None
            }
        };
        Some(Token::checked(out).unwrap_or_else(|| word.clone()))
    }
}

/// Apply one tag per token. A leading `$START` token is never emitted; only an
/// append on it produces output. Transform failures leave the token unchanged.
pub fn apply_tags(sentence: &[Token], tags: &[EditTag], res: &Resources<'_>) -> Result<Vec<Token>> {
    if sentence.len() != tags.len() {
        return Err(Error::Contract(format!(
            "{} tags for {} tokens",
            tags.len(),
            sentence.len()
        )));
    }
    let mut out: Vec<Token> = Vec::with_capacity(sentence.len() + 2);
    // Separator owed by a MERGE on the previous position, and the index in
    // `out` of the token it glues onto.
    let mut glue: Option<(&'static str, usize)> = None;

    for (i, (tok, tag)) in sentence.iter().zip(tags).enumerate() {
        if i == 0 && tok.is_start() {
            if let EditTag::Append(w) = tag {
                push_word(&mut out, w);
            }
            continue;
        }

        let start = out.len();
        let pending = glue.take();
        match tag {
            EditTag::Delete => {}
            EditTag::Append(w) => {
                out.push(tok.clone());
                push_word(&mut out, w);
            }
            EditTag::Merge(kind) => {
                out.push(tok.clone());
                if i + 1 < sentence.len() {
                    glue = Some((kind.separator(), out.len() - 1));
                }
            }
            EditTag::SplitHyphen => {
                let parts: Vec<&str> = tok.as_str().split('-').filter(|p| !p.is_empty()).collect();
                if parts.len() > 1 {
                    out.extend(parts.into_iter().filter_map(|p| Token::checked(p.to_string())));
                } else {
                    out.push(tok.clone());
                }
            }
            _ => {
                let t = res.transform_word(tok, tag).unwrap_or_else(|| tok.clone());
                out.push(t);
            }
        }

        if let Some((sep, at)) = pending {
            if out.len() > start && at + 1 == start {
                let next = out.remove(start);
                let joined = format!("{}{sep}{}", out[at].as_str(), next.as_str());
                out[at] = Token::checked(joined).expect("joined tokens are whitespace-free");
                // A chained MERGE keeps gluing onto the same output token.
                if let Some((_, g)) = glue.as_mut() {
                    if *g == start {
                        *g = at;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn push_word(out: &mut Vec<Token>, w: &str) {
    if let Some(t) = Token::checked(w.to_string()) {
        out.push(t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tag::{CaseKind, MergeKind, NounNumber};
    use crate::token::tokens;
    use proptest::prelude::*;

    fn run(words: &[&str], tags: Vec<EditTag>) -> Vec<String> {
        let toks = tokens(words).unwrap();
        apply_tags(&toks, &tags, &Resources::default())
            .unwrap()
            .into_iter()
            .map(Token::into_string)
            .collect()
    }

    #[test]
    fn named_examples() {
        assert_eq!(
            run(&["I", "happy"], vec![EditTag::Append("am".into()), EditTag::Keep]),
            ["I", "am", "happy"]
        );
        assert_eq!(run(&["london"], vec![EditTag::Case(CaseKind::Capital)]), ["London"]);
        assert_eq!(
            run(&["cat"], vec![EditTag::NounNumber(NounNumber::Plural)]),
            ["cats"]
        );
    }

    #[test]
    fn length_mismatch_is_contract_error() {
        let toks = tokens(&["a", "b"]).unwrap();
        let err = apply_tags(&toks, &[EditTag::Keep], &Resources::default()).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn merges() {
        let m = EditTag::Merge(MergeKind::Space);
        let h = EditTag::Merge(MergeKind::Hyphen);
        assert_eq!(run(&["some", "one"], vec![m.clone(), EditTag::Keep]), ["someone"]);
        assert_eq!(run(&["e", "mail"], vec![h.clone(), EditTag::Keep]), ["e-mail"]);
        assert_eq!(
            run(&["a", "b", "c", "d"], vec![m.clone(), h, EditTag::Keep, EditTag::Keep]),
            ["ab-c", "d"]
        );
        // Last token: identity.
        assert_eq!(run(&["a", "b"], vec![EditTag::Keep, m.clone()]), ["a", "b"]);
        // Right neighbour deleted: nothing to glue.
        assert_eq!(run(&["a", "b"], vec![m.clone(), EditTag::Delete]), ["a"]);
        // Glue applies to the neighbour's first output token.
        assert_eq!(
            run(&["a", "b"], vec![m, EditTag::Append("c".into())]),
            ["ab", "c"]
        );
    }

    #[test]
    fn splits() {
        assert_eq!(run(&["well-known"], vec![EditTag::SplitHyphen]), ["well", "known"]);
        assert_eq!(run(&["plain"], vec![EditTag::SplitHyphen]), ["plain"]);
        assert_eq!(run(&["-"], vec![EditTag::SplitHyphen]), ["-"]);
    }

    #[test]
    fn start_token_is_stripped() {
        assert_eq!(
            run(&["$START", "hello"], vec![EditTag::Append("Oh".into()), EditTag::Keep]),
            ["Oh", "hello"]
        );
        assert_eq!(run(&["$START", "hi"], vec![EditTag::Keep, EditTag::Keep]), ["hi"]);
        assert_eq!(
            run(&["$START", "hi"], vec![EditTag::Replace("x".into()), EditTag::Keep]),
            ["hi"]
        );
    }

    #[test]
    fn missing_resources_degrade_to_identity() {
        assert_eq!(run(&["beleive"], vec![EditTag::Spell]), ["beleive"]);
        assert_eq!(
            run(&["runs"], vec![EditTag::Inflect(crate::tag::PtbPos::VBD)]),
            ["runs"]
        );
    }

    /// Splice semantics for the four basic tags, written independently.
    fn reference(words: &[String], tags: &[EditTag]) -> Vec<String> {
        let mut out = Vec::new();
        for (w, t) in words.iter().zip(tags) {
            match t {
                EditTag::Keep => out.push(w.clone()),
                EditTag::Delete => {}
                EditTag::Append(a) => out.extend([w.clone(), a.clone()]),
                EditTag::Replace(r) => out.push(r.clone()),
                _ => unreachable!(),
            }
        }
        out
    }

    fn basic_tag() -> impl Strategy<Value = EditTag> {
        prop_oneof![
            Just(EditTag::Keep),
            Just(EditTag::Delete),
            "[a-z]{1,4}".prop_map(EditTag::Append),
            "[a-z]{1,4}".prop_map(EditTag::Replace),
        ]
    }

    proptest! {
        #[test]
        fn all_keep_is_identity(words in prop::collection::vec("[A-Za-z,.-]{1,6}", 0..12)) {
            let toks = tokens(&words).unwrap();
            let tags = vec![EditTag::Keep; toks.len()];
            prop_assert_eq!(apply_tags(&toks, &tags, &Resources::default()).unwrap(), toks);
        }

        #[test]
        fn delete_all_is_empty(words in prop::collection::vec("[a-z]{1,6}", 0..12)) {
            let toks = tokens(&words).unwrap();
            let tags = vec![EditTag::Delete; toks.len()];
            prop_assert!(apply_tags(&toks, &tags, &Resources::default()).unwrap().is_empty());
        }

        #[test]
        fn basic_tags_match_splice_reference(
            pairs in prop::collection::vec(("[a-z]{1,5}", basic_tag()), 0..12)
        ) {
            let (words, tags): (Vec<String>, Vec<EditTag>) = pairs.into_iter().unzip();
            let toks = tokens(&words).unwrap();
            let got: Vec<String> = apply_tags(&toks, &tags, &Resources::default())
                .unwrap()
                .into_iter()
                .map(Token::into_string)
                .collect();
            prop_assert_eq!(got, reference(&words, &tags));
        }
    }
}
