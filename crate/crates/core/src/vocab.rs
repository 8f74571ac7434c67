use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tag::{CaseKind, EditTag, MergeKind, NounNumber, PtbPos};

/// Which generalised tags a tagset enables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TagsetKind {
    Basetags,
    Spell,
    Inflect,
    SpellInflect,
}

impl TagsetKind {
    pub const ALL: [TagsetKind; 4] = [
        TagsetKind::Basetags,
        TagsetKind::Spell,
        TagsetKind::Inflect,
        TagsetKind::SpellInflect,
    ];

    pub fn has_spell(self) -> bool {
        matches!(self, TagsetKind::Spell | TagsetKind::SpellInflect)
    }

    pub fn has_inflect(self) -> bool {
        matches!(self, TagsetKind::Inflect | TagsetKind::SpellInflect)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TagsetKind::Basetags => "basetags",
            TagsetKind::Spell => "spell",
            TagsetKind::Inflect => "inflect",
            TagsetKind::SpellInflect => "spell+inflect",
        }
    }

    pub fn allows(self, tag: &EditTag) -> bool {
        match tag {
            EditTag::Spell => self.has_spell(),
            EditTag::Inflect(_) => self.has_inflect(),
            EditTag::NounNumber(_) | EditTag::VerbForm { .. } => !self.has_inflect(),
            _ => true,
        }
    }

    /// Tags every vocabulary of this kind carries regardless of corpus counts.
    pub fn closed_class(self) -> Vec<EditTag> {
        let mut tags = vec![EditTag::Keep, EditTag::Delete];
        if self.has_spell() {
            tags.push(EditTag::Spell);
        }
        tags.extend(CaseKind::ALL.map(EditTag::Case));
        tags.extend(MergeKind::ALL.map(EditTag::Merge));
        tags.push(EditTag::SplitHyphen);
        if self.has_inflect() {
            tags.extend(PtbPos::ALL.map(EditTag::Inflect));
        } else {
            tags.extend(NounNumber::ALL.map(EditTag::NounNumber));
            for from in PtbPos::VERB_FORMS {
                for to in PtbPos::VERB_FORMS {
                    if from != to {
                        tags.push(EditTag::VerbForm { from, to });
                    }
                }
            }
        }
        tags
    }
}

impl fmt::Display for TagsetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TagsetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TagsetKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Contract(format!(
                    "unknown tagset `{s}` (expected basetags, spell, inflect or spell+inflect)"
                ))
            })
    }
}

/// An ordered tag inventory; a tag's position is its id. Id 0 is always `$KEEP`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagVocabulary {
    kind: TagsetKind,
    entries: Vec<EditTag>,
    index: HashMap<EditTag, usize>,
    size_limit: usize,
}

impl TagVocabulary {
    pub fn new(kind: TagsetKind, entries: Vec<EditTag>, size_limit: usize) -> Result<Self> {
        if entries.first() != Some(&EditTag::Keep) {
            return Err(Error::Contract("vocabulary must start with $KEEP".into()));
        }
        if entries.len() > size_limit {
            return Err(Error::Contract(format!(
                "vocabulary has {} entries, limit is {size_limit}",
                entries.len()
            )));
        }
        let mut index = HashMap::with_capacity(entries.len());
        for (id, tag) in entries.iter().enumerate() {
            if !kind.allows(tag) {
                return Err(Error::Contract(format!("tag {tag} is not legal in the {kind} tagset")));
            }
            if index.insert(tag.clone(), id).is_some() {
                return Err(Error::Contract(format!("duplicate vocabulary entry {tag}")));
            }
        }
        Ok(TagVocabulary {
            kind,
            entries,
            index,
            size_limit,
        })
    }

    /// Parse a vocabulary file: one tag per line, line order is tag id. The
    /// tagset kind is the narrowest one admitting every entry.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let tag: EditTag = line.parse().map_err(|e: Error| Error::parse(i + 1, e.to_string()))?;
            entries.push(tag);
        }
        let has_spell = entries.iter().any(|t| matches!(t, EditTag::Spell));
        let has_inflect = entries.iter().any(|t| matches!(t, EditTag::Inflect(_)));
        let kind = match (has_spell, has_inflect) {
            (false, false) => TagsetKind::Basetags,
            (true, false) => TagsetKind::Spell,
            (false, true) => TagsetKind::Inflect,
            (true, true) => TagsetKind::SpellInflect,
        };
        let limit = entries.len();
        TagVocabulary::new(kind, entries, limit)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TagVocabulary::parse(&text).map_err(|e| e.with_path(path))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for tag in &self.entries {
            out.push_str(&tag.to_string());
            out.push('\n');
        }
        out
    }

    pub fn kind(&self) -> TagsetKind {
        self.kind
    }

    pub fn size_limit(&self) -> usize {
        self.size_limit
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EditTag] {
        &self.entries
    }

    pub fn get(&self, id: usize) -> Option<&EditTag> {
        self.entries.get(id)
    }

    pub fn id_of(&self, tag: &EditTag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn contains(&self, tag: &EditTag) -> bool {
        self.index.contains_key(tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_class_respects_legality() {
        for kind in TagsetKind::ALL {
            let tags = kind.closed_class();
            assert_eq!(tags[0], EditTag::Keep);
            assert!(tags.iter().all(|t| kind.allows(t)));
            let v = TagVocabulary::new(kind, tags.clone(), tags.len()).unwrap();
            assert_eq!(v.len(), tags.len());
        }
        assert!(!TagsetKind::Basetags.allows(&EditTag::Spell));
        assert!(!TagsetKind::Inflect.allows(&EditTag::NounNumber(NounNumber::Plural)));
        assert!(TagsetKind::SpellInflect.allows(&EditTag::Inflect(PtbPos::NNS)));
    }

    #[test]
    fn rejects_duplicates_and_overflow() {
        let dup = vec![EditTag::Keep, EditTag::Delete, EditTag::Delete];
        assert!(TagVocabulary::new(TagsetKind::Basetags, dup, 10).is_err());
        let ok = vec![EditTag::Keep, EditTag::Delete];
        assert!(TagVocabulary::new(TagsetKind::Basetags, ok.clone(), 1).is_err());
        assert!(TagVocabulary::new(TagsetKind::Basetags, vec![EditTag::Delete, EditTag::Keep], 5).is_err());
    }

    #[test]
    fn text_round_trip_infers_kind() {
        let text = "$KEEP\n$DELETE\n$SPELL\n$INFLECT_NNS\n$APPEND_the\n";
        let v = TagVocabulary::parse(text).unwrap();
        assert_eq!(v.kind(), TagsetKind::SpellInflect);
        assert_eq!(v.to_text(), text);
        assert_eq!(v.id_of(&EditTag::Append("the".into())), Some(4));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = TagVocabulary::parse("$KEEP\n$BOGUS\n").unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }
}
