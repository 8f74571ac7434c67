use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tag::{CoarsePos, PtbPos};

/// One `lemma<TAB>ptb_pos<TAB>form1,form2,...` row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconRow {
    pub lemma: String,
    pub pos: PtbPos,
    pub forms: Vec<String>,
}

/// Parse lexicon TSV text. Blank lines and `#` comments are skipped; anything
/// else that does not have three fields is an error.
pub fn parse_rows(text: &str) -> Result<Vec<LexiconRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(lemma), Some(pos), Some(forms), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::parse(i + 1, "expected lemma<TAB>pos<TAB>forms"));
        };
        let pos: PtbPos = pos
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("unknown POS `{pos}`")))?;
        let forms: Vec<String> = forms
            .split(',')
            .filter(|f| !f.is_empty())
            .map(str::to_string)
            .collect();
        if lemma.is_empty() || forms.is_empty() {
            return Err(Error::parse(i + 1, "empty lemma or form list"));
        }
        rows.push(LexiconRow {
            lemma: lemma.to_string(),
            pos,
            forms,
        });
    }
    Ok(rows)
}

pub(crate) fn read_rows(path: &Path) -> Result<Vec<LexiconRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_rows(&text).map_err(|e| e.with_path(path))
}

/// Lemma ↔ form tables keyed by part of speech.
#[derive(Clone, Debug, Default)]
pub struct InflectionLexicon {
    lemma_of: HashMap<(String, CoarsePos), String>,
    forms_of: HashMap<(String, PtbPos), Vec<String>>,
    rows: usize,
}

impl InflectionLexicon {
    /// Lemmas are fixed points: a lemma never maps to another lemma even if it
    /// also appears as someone else's form. Otherwise the first row claiming a
    /// form wins.
    pub fn from_rows(rows: impl IntoIterator<Item = LexiconRow>) -> Self {
        let rows: Vec<LexiconRow> = rows.into_iter().collect();
        let mut lex = InflectionLexicon {
            rows: rows.len(),
            ..Default::default()
        };
        for r in &rows {
            lex.lemma_of
                .insert((r.lemma.clone(), r.pos.coarse()), r.lemma.clone());
        }
        for r in &rows {
            for f in &r.forms {
                lex.lemma_of
                    .entry((f.clone(), r.pos.coarse()))
                    .or_insert_with(|| r.lemma.clone());
            }
        }
        for r in rows {
            lex.forms_of
                .entry((r.lemma, r.pos))
                .or_default()
                .extend(r.forms);
        }
        lex
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(InflectionLexicon::from_rows(parse_rows(text)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(InflectionLexicon::from_rows(read_rows(path.as_ref())?))
    }

    pub fn lemma_of(&self, form: &str, pos: CoarsePos) -> Option<&str> {
        self.lemma_of
            .get(&(form.to_string(), pos))
            .map(String::as_str)
    }

    pub fn forms_of(&self, lemma: &str, pos: PtbPos) -> Option<&[String]> {
        self.forms_of
            .get(&(lemma.to_string(), pos))
            .map(Vec::as_slice)
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    /// Every `(lemma, pos, forms)` entry, in unspecified order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, PtbPos, &[String])> + '_ {
        self.forms_of
            .iter()
            .map(|((l, p), f)| (l.as_str(), *p, f.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
# comment
run\tVB\trun
run\tVBD\tran
run\tVBZ\truns
lie\tVB\tlie
lie\tVBD\tlied
lay\tVB\tlay
lay\tVBD\tlaid
burn\tVBD\tburned,burnt
";

    #[test]
    fn lookups() {
        let lex = InflectionLexicon::parse(TEXT).unwrap();
        assert_eq!(lex.lemma_of("ran", CoarsePos::Verb), Some("run"));
        assert_eq!(lex.lemma_of("run", CoarsePos::Verb), Some("run"));
        assert_eq!(lex.lemma_of("ran", CoarsePos::Noun), None);
        assert_eq!(lex.forms_of("burn", PtbPos::VBD).unwrap(), ["burned", "burnt"]);
        assert_eq!(lex.lemma_of("burnt", CoarsePos::Verb), Some("burn"));
        assert_eq!(lex.row_count(), 8);
    }

    #[test]
    fn lemmas_stay_fixed_points() {
        let text = "lie\tVBD\tlay\nlay\tVB\tlay\n";
        let lex = InflectionLexicon::parse(text).unwrap();
        assert_eq!(lex.lemma_of("lay", CoarsePos::Verb), Some("lay"));
    }

    #[test]
    fn malformed_rows_report_line() {
        let err = InflectionLexicon::parse("run\tVB\trun\nrun\tXX\tran\n").unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
        assert!(InflectionLexicon::parse("run\tVB\n").is_err());
        assert!(InflectionLexicon::parse("run\tVB\t\n").is_err());
    }
}
