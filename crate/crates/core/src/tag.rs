//! Edit tags and their canonical textual syntax.
//!
//! | tag | text |
//! |-----|------|
//! | keep / delete | `$KEEP`, `$DELETE` |
//! | append / replace | `$APPEND_word`, `$REPLACE_word` |
//! | spelling | `$SPELL` |
//! | inflection | `$INFLECT_NNS`, `$INFLECT_VBD`, ... |
//! | case | `$CASE_CAPITAL`, `$CASE_LOWER`, `$CASE_UPPER`, `$CASE_CAPITAL_FIRST` |
//! | merge / split | `$MERGE_SPACE`, `$MERGE_HYPHEN`, `$SPLIT_HYPHEN` |
//! | noun number | `$NOUN_NUMBER_SINGULAR`, `$NOUN_NUMBER_PLURAL` |
//! | verb form | `$VERB_FORM_VB_VBD`, ... (source form, then target form) |
//!
//! Parsing and `Display` are exact inverses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::token::is_valid_surface;

/// The inflectable Penn Treebank tags, in the fixed order used wherever a
/// deterministic search over tags is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PtbPos {
    NN,
    NNS,
    VB,
    VBP,
    VBZ,
    VBD,
    VBG,
    VBN,
    JJ,
    JJR,
    JJS,
    RB,
    RBR,
    RBS,
}

/// Coarse part of speech, the granularity at which lemmas are stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoarsePos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl PtbPos {
    pub const ALL: [PtbPos; 14] = [
        PtbPos::NN,
        PtbPos::NNS,
        PtbPos::VB,
        PtbPos::VBP,
        PtbPos::VBZ,
        PtbPos::VBD,
        PtbPos::VBG,
        PtbPos::VBN,
        PtbPos::JJ,
        PtbPos::JJR,
        PtbPos::JJS,
        PtbPos::RB,
        PtbPos::RBR,
        PtbPos::RBS,
    ];

    /// Verb forms, in the order verb-form transforms are searched.
    pub const VERB_FORMS: [PtbPos; 6] = [
        PtbPos::VB,
        PtbPos::VBP,
        PtbPos::VBZ,
        PtbPos::VBD,
        PtbPos::VBG,
        PtbPos::VBN,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PtbPos::NN => "NN",
            PtbPos::NNS => "NNS",
            PtbPos::VB => "VB",
            PtbPos::VBP => "VBP",
            PtbPos::VBZ => "VBZ",
            PtbPos::VBD => "VBD",
            PtbPos::VBG => "VBG",
            PtbPos::VBN => "VBN",
            PtbPos::JJ => "JJ",
            PtbPos::JJR => "JJR",
            PtbPos::JJS => "JJS",
            PtbPos::RB => "RB",
            PtbPos::RBR => "RBR",
            PtbPos::RBS => "RBS",
        }
    }

    pub fn coarse(self) -> CoarsePos {
        use PtbPos::*;
        match self {
            NN | NNS => CoarsePos::Noun,
            VB | VBP | VBZ | VBD | VBG | VBN => CoarsePos::Verb,
            JJ | JJR | JJS => CoarsePos::Adj,
            RB | RBR | RBS => CoarsePos::Adv,
        }
    }

    pub fn is_verb(self) -> bool {
        self.coarse() == CoarsePos::Verb
    }

    /// True for the tags whose form is the lemma itself (NN, VB, VBP, JJ, RB).
    pub fn is_base(self) -> bool {
        matches!(
            self,
            PtbPos::NN | PtbPos::VB | PtbPos::VBP | PtbPos::JJ | PtbPos::RB
        )
    }
}

impl fmt::Display for PtbPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PtbPos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PtbPos::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidTag {
                tag: s.to_string(),
                reason: "not an inflectable Penn Treebank tag".into(),
            })
    }
}

impl CoarsePos {
    pub fn as_str(self) -> &'static str {
        match self {
            CoarsePos::Noun => "noun",
            CoarsePos::Verb => "verb",
            CoarsePos::Adj => "adj",
            CoarsePos::Adv => "adv",
        }
    }
}

impl FromStr for CoarsePos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "noun" => Ok(CoarsePos::Noun),
            "verb" => Ok(CoarsePos::Verb),
            "adj" => Ok(CoarsePos::Adj),
            "adv" => Ok(CoarsePos::Adv),
            _ => Err(Error::Contract(format!("unknown coarse POS `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    /// First letter upper, rest lower.
    Capital,
    Lower,
    Upper,
    /// First letter upper, rest untouched.
    CapitalFirst,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [
        CaseKind::Capital,
        CaseKind::Lower,
        CaseKind::Upper,
        CaseKind::CapitalFirst,
    ];

    fn as_str(self) -> &'static str {
        match self {
            CaseKind::Capital => "CAPITAL",
            CaseKind::Lower => "LOWER",
            CaseKind::Upper => "UPPER",
            CaseKind::CapitalFirst => "CAPITAL_FIRST",
        }
    }

    pub fn apply(self, s: &str) -> String {
        match self {
            CaseKind::Capital => {
                let mut chars = s.chars();
                match chars.next() {
                    Some(c) => c.to_uppercase().chain(chars.as_str().to_lowercase().chars()).collect(),
                    None => String::new(),
                }
            }
            CaseKind::Lower => s.to_lowercase(),
            CaseKind::Upper => s.to_uppercase(),
            CaseKind::CapitalFirst => crate::token::upper_first(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MergeKind {
    Space,
    Hyphen,
}

impl MergeKind {
    pub const ALL: [MergeKind; 2] = [MergeKind::Space, MergeKind::Hyphen];

    pub fn separator(self) -> &'static str {
        match self {
            MergeKind::Space => "",
            MergeKind::Hyphen => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NounNumber {
    Singular,
    Plural,
}

impl NounNumber {
    pub const ALL: [NounNumber; 2] = [NounNumber::Plural, NounNumber::Singular];

    /// The deliberately naive `-s` rule.
    pub fn apply(self, s: &str) -> String {
        match self {
            NounNumber::Plural => format!("{s}s"),
            NounNumber::Singular => match s.strip_suffix('s') {
                Some(stem) if !stem.is_empty() => stem.to_string(),
                _ => s.to_string(),
            },
        }
    }
}

/// One edit operation on one token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditTag {
    Keep,
    Delete,
    Append(String),
    Replace(String),
    Spell,
    Inflect(PtbPos),
    Case(CaseKind),
    Merge(MergeKind),
    SplitHyphen,
    NounNumber(NounNumber),
    VerbForm { from: PtbPos, to: PtbPos },
}

/// Coarse classification used by vocabulary construction and statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TagClass {
    /// Closed-class tags with no word payload.
    Closed,
    /// `$APPEND_w` / `$REPLACE_w`.
    Open,
}

impl EditTag {
    pub fn class(&self) -> TagClass {
        match self {
            EditTag::Append(_) | EditTag::Replace(_) => TagClass::Open,
            _ => TagClass::Closed,
        }
    }

    /// Inflection-performing basetags transforms (removed when `$INFLECT` is enabled).
    pub fn is_inflection_transform(&self) -> bool {
        matches!(self, EditTag::NounNumber(_) | EditTag::VerbForm { .. })
    }

    pub fn is_keep(&self) -> bool {
        matches!(self, EditTag::Keep)
    }
}

const APPEND: &str = "$APPEND_";
const REPLACE: &str = "$REPLACE_";
const INFLECT: &str = "$INFLECT_";
const CASE: &str = "$CASE_";
const MERGE: &str = "$MERGE_";
const NOUN_NUMBER: &str = "$NOUN_NUMBER_";
const VERB_FORM: &str = "$VERB_FORM_";

impl fmt::Display for EditTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditTag::Keep => f.write_str("$KEEP"),
            EditTag::Delete => f.write_str("$DELETE"),
            EditTag::Append(w) => write!(f, "{APPEND}{w}"),
            EditTag::Replace(w) => write!(f, "{REPLACE}{w}"),
            EditTag::Spell => f.write_str("$SPELL"),
            EditTag::Inflect(p) => write!(f, "{INFLECT}{p}"),
            EditTag::Case(k) => write!(f, "{CASE}{}", k.as_str()),
            EditTag::Merge(MergeKind::Space) => write!(f, "{MERGE}SPACE"),
            EditTag::Merge(MergeKind::Hyphen) => write!(f, "{MERGE}HYPHEN"),
            EditTag::SplitHyphen => f.write_str("$SPLIT_HYPHEN"),
            EditTag::NounNumber(NounNumber::Singular) => write!(f, "{NOUN_NUMBER}SINGULAR"),
            EditTag::NounNumber(NounNumber::Plural) => write!(f, "{NOUN_NUMBER}PLURAL"),
            EditTag::VerbForm { from, to } => write!(f, "{VERB_FORM}{from}_{to}"),
        }
    }
}

impl FromStr for EditTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: &str| Error::InvalidTag {
            tag: s.to_string(),
            reason: reason.to_string(),
        };
        let payload = |w: &str| -> Result<String, Error> {
            if is_valid_surface(w) {
                Ok(w.to_string())
            } else {
                Err(bad("payload word must be non-empty and whitespace-free"))
            }
        };

        match s {
            "$KEEP" => return Ok(EditTag::Keep),
            "$DELETE" => return Ok(EditTag::Delete),
            "$SPELL" => return Ok(EditTag::Spell),
            "$SPLIT_HYPHEN" => return Ok(EditTag::SplitHyphen),
            _ => {}
        }
        if let Some(w) = s.strip_prefix(APPEND) {
            return Ok(EditTag::Append(payload(w)?));
        }
        if let Some(w) = s.strip_prefix(REPLACE) {
            return Ok(EditTag::Replace(payload(w)?));
        }
        if let Some(p) = s.strip_prefix(INFLECT) {
            return p.parse().map(EditTag::Inflect).map_err(|_| bad("unknown POS"));
        }
        if let Some(k) = s.strip_prefix(CASE) {
            return CaseKind::ALL
                .into_iter()
                .find(|c| c.as_str() == k)
                .map(EditTag::Case)
                .ok_or_else(|| bad("unknown case kind"));
        }
        if let Some(k) = s.strip_prefix(MERGE) {
            return match k {
                "SPACE" => Ok(EditTag::Merge(MergeKind::Space)),
                "HYPHEN" => Ok(EditTag::Merge(MergeKind::Hyphen)),
                _ => Err(bad("unknown merge kind")),
            };
        }
        if let Some(k) = s.strip_prefix(NOUN_NUMBER) {
            return match k {
                "SINGULAR" => Ok(EditTag::NounNumber(NounNumber::Singular)),
                "PLURAL" => Ok(EditTag::NounNumber(NounNumber::Plural)),
                _ => Err(bad("unknown noun number")),
            };
        }
        if let Some(rest) = s.strip_prefix(VERB_FORM) {
            let (from, to) = rest.split_once('_').ok_or_else(|| bad("expected SRC_DST"))?;
            let from: PtbPos = from.parse().map_err(|_| bad("unknown source form"))?;
            let to: PtbPos = to.parse().map_err(|_| bad("unknown target form"))?;
            if !from.is_verb() || !to.is_verb() || from == to {
                return Err(bad("verb forms must be two distinct VB* tags"));
            }
            return Ok(EditTag::VerbForm { from, to });
        }
        Err(bad("unrecognised tag"))
    }
}

impl Serialize for EditTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EditTag {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
