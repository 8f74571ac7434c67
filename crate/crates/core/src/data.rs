//! Locating the shipped dictionary, lexicon and verb-form files.

use std::path::PathBuf;

use crate::error::Result;
use crate::inflector::{
    InflectionEngine, InflectionLexicon, VerbFormDictionary, SHIPPED_LEXICON, SHIPPED_VERB_FORMS,
};
use crate::speller::{SpellDictionary, DEFAULT_MAX_EDIT_DISTANCE, SHIPPED_DICTIONARY};

/// Environment variable overriding the default data directory.
pub const DATA_DIR_ENV: &str = "GECTAG_DATA";

/// `$GECTAG_DATA` if set, otherwise the `data/` directory of this crate.
pub fn default_data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

pub fn dictionary_path() -> PathBuf {
    default_data_dir().join(SHIPPED_DICTIONARY)
}

pub fn lexicon_path() -> PathBuf {
    default_data_dir().join(SHIPPED_LEXICON)
}

pub fn verb_forms_path() -> PathBuf {
    default_data_dir().join(SHIPPED_VERB_FORMS)
}

/// The three word-level resources, owned.
#[derive(Debug, Clone)]
pub struct ResourceSet {
    pub speller: SpellDictionary,
    pub inflector: InflectionEngine,
    pub verb_forms: VerbFormDictionary,
}

impl ResourceSet {
    pub fn load_default() -> Result<Self> {
        ResourceSet::load(dictionary_path(), lexicon_path(), verb_forms_path())
    }

    pub fn load(
        dictionary: impl Into<PathBuf>,
        lexicon: impl Into<PathBuf>,
        verb_forms: impl Into<PathBuf>,
    ) -> Result<Self> {
        let (dictionary, lexicon, verb_forms) = (dictionary.into(), lexicon.into(), verb_forms.into());
        let ((speller, inflector), verb_forms) = rayon::join(
            || {
                rayon::join(
                    || SpellDictionary::load(&dictionary, DEFAULT_MAX_EDIT_DISTANCE),
                    || InflectionLexicon::load(&lexicon).map(InflectionEngine::new),
                )
            },
            || VerbFormDictionary::load(&verb_forms),
        );
        Ok(ResourceSet {
            speller: speller?,
            inflector: inflector?,
            verb_forms: verb_forms?,
        })
    }

    pub fn resources(&self) -> crate::apply::Resources<'_> {
        crate::apply::Resources::new(&self.speller, &self.inflector, &self.verb_forms)
    }
}
