//! Non-neural machinery for sequence-tagging grammatical error correction.
//!
//! A tagger assigns one [`EditTag`] per input token; [`apply_tags`] turns the
//! tags into corrected text. Besides the basic keep/delete/append/replace tags
//! and the case, merge/split, noun-number and verb-form transforms, two
//! generalised tags delegate to word-level resources:
//!
//! * `$SPELL` asks a symmetric-delete [`SpellDictionary`] for the nearest word;
//! * `$INFLECT_POS` re-inflects the word to a Penn Treebank tag through an
//!   [`InflectionEngine`] (lexicon first, suffix rules second).
//!
//! The [`preprocess`] module derives tags from parallel sentences and rewrites
//! `$REPLACE_t` tags into the generalised ones, [`infer`] selects tags from
//! per-token distributions, [`ensemble`] votes over system outputs by edit
//! span, and [`score`] computes span-based precision, recall and F-beta
//! against M2 gold annotations.

pub mod apply;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod infer;
pub mod inflector;
pub mod labeled;
pub mod preprocess;
pub mod score;
pub mod speller;
pub mod tag;
pub mod token;
pub mod vocab;

pub use apply::{apply_tags, Resources};
pub use data::ResourceSet;
pub use ensemble::{extract_spans, vote, EditSpan, SpanType};
pub use error::{Error, Result};
pub use inflector::{InflectionEngine, InflectionLexicon, VerbFormDictionary};
pub use labeled::LabeledSentence;
pub use speller::{osa_distance, SpellDictionary, Suggestion};
pub use tag::{CaseKind, CoarsePos, EditTag, MergeKind, NounNumber, PtbPos};
pub use token::{detokenize, tokenize, Token};
pub use vocab::{TagVocabulary, TagsetKind};
