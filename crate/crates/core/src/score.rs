//! Span-based precision, recall and F-beta against M2 gold edits.
//!
//! M2 blocks look like
//!
//! ```text
//! S This are a sentence .
//! A 1 2|||R:VERB:SVA|||is|||REQUIRED|||-NONE-|||0
//! ```
//!
//! A hypothesis span is a true positive when the chosen annotator has an edit
//! with the same start, end and replacement. Per sentence the annotator that
//! maximises (tp, −fp, −fn) is chosen, the lowest id on ties. Gold categories
//! label TPs and FNs; FPs are counted under [`UNKNOWN_CATEGORY`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{extract_spans, EditSpan};
use crate::error::{Error, Result};
use crate::token::{tokenize, Token};

/// Category assigned to false positives.
pub const UNKNOWN_CATEGORY: &str = "UNK";

/// The inflection-related error categories.
pub const INFLECTION_CATEGORIES: [&str; 8] = [
    "ADJ:FORM",
    "MORPH",
    "NOUN:INFL",
    "NOUN:NUM",
    "VERB:FORM",
    "VERB:INFL",
    "VERB:SVA",
    "VERB:TENSE",
];

/// The spelling error category.
pub const SPELLING_CATEGORY: &str = "SPELL";

/// One annotator's edits for one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldAnnotation {
    pub annotator_id: u32,
    /// Sorted and mutually non-conflicting.
    pub edits: Vec<EditSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M2Sentence {
    pub source: Vec<Token>,
    /// One entry per annotator, ordered by id. A sentence without `A` lines
    /// has a single annotator 0 with no edits.
    pub annotations: Vec<GoldAnnotation>,
}

/// Strip an operation-type prefix: "R:VERB:SVA" → "VERB:SVA". Categories
/// without a prefix are returned unchanged.
pub fn base_category(category: &str) -> &str {
    match category.split_once(':') {
        Some(("M" | "R" | "U", rest)) => rest,
        _ => category,
    }
}

fn parse_a_line(body: &str, line_no: usize, n_tokens: usize) -> Result<Option<(u32, EditSpan)>> {
    let fields: Vec<&str> = body.split("|||").collect();
    if fields.len() != 6 {
        return Err(Error::parse(line_no, format!("expected 6 `|||` fields, found {}", fields.len())));
    }
    let mut range = fields[0].split_whitespace();
    let (Some(s), Some(e), None) = (range.next(), range.next(), range.next()) else {
        return Err(Error::parse(line_no, "expected `start end` before the first `|||`"));
    };
    let annotator: u32 = fields[5]
        .trim()
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad annotator id `{}`", fields[5])))?;
    let category = fields[1].trim();
    if (s, e) == ("-1", "-1") {
        if !category.eq_ignore_ascii_case("noop") {
            return Err(Error::parse(line_no, "`-1 -1` span must be a noop"));
        }
        return Ok(None);
    }
    let parse_idx = |x: &str| {
        x.parse::<usize>()
            .map_err(|_| Error::parse(line_no, format!("bad token offset `{x}`")))
    };
    let (start, end) = (parse_idx(s)?, parse_idx(e)?);
    if end < start || end > n_tokens {
        return Err(Error::parse(
            line_no,
            format!("span [{start}, {end}) outside sentence of {n_tokens} tokens"),
        ));
    }
    let repl = fields[2].trim();
    let replacement = if repl == "-NONE-" { Vec::new() } else { tokenize(repl) };
    if start == end && replacement.is_empty() {
        return Err(Error::parse(line_no, "empty insertion"));
    }
    let span = EditSpan::new(start, end, replacement)
        .map_err(|e| Error::parse(line_no, e.to_string()))?
        .with_category(category);
    Ok(Some((annotator, span)))
}

/// A sentence being parsed: source tokens and edits per annotator.
type Pending = (Vec<Token>, BTreeMap<u32, Vec<EditSpan>>);

/// Parse M2 text. Errors carry 1-based line numbers.
pub fn parse_m2(text: &str) -> Result<Vec<M2Sentence>> {
    let mut out = Vec::new();
    let mut current: Option<Pending> = None;

    let finish = |cur: Option<Pending>,
                  out: &mut Vec<M2Sentence>,
                  line_no: usize|
     -> Result<()> {
        let Some((source, anns)) = cur else { return Ok(()) };
        let mut annotations = Vec::new();
        for (annotator_id, mut edits) in anns {
            edits.sort_by(|a, b| a.key().cmp(&b.key()));
            for w in edits.windows(2) {
                if w[0].conflicts_with(&w[1]) {
                    return Err(Error::parse(
                        line_no,
                        format!(
                            "annotator {annotator_id} has overlapping edits [{}, {}) and [{}, {})",
                            w[0].start, w[0].end, w[1].start, w[1].end
                        ),
                    ));
                }
            }
            annotations.push(GoldAnnotation { annotator_id, edits });
        }
        if annotations.is_empty() {
            annotations.push(GoldAnnotation {
                annotator_id: 0,
                edits: Vec::new(),
            });
        }
        out.push(M2Sentence { source, annotations });
        Ok(())
    };

    let mut block_start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            finish(current.take(), &mut out, block_start)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ").or(if line == "S" { Some("") } else { None }) {
            finish(current.take(), &mut out, block_start)?;
            block_start = line_no;
            current = Some((tokenize(rest), BTreeMap::new()));
        } else if let Some(rest) = line.strip_prefix("A ") {
            let Some((source, anns)) = current.as_mut() else {
                return Err(Error::parse(line_no, "`A` line outside a sentence block"));
            };
            match parse_a_line(rest, line_no, source.len())? {
                Some((id, span)) => anns.entry(id).or_default().push(span),
                None => {
                    let id = rest.rsplit("|||").next().unwrap_or("0").trim();
                    let id = id.parse().map_err(|_| Error::parse(line_no, "bad annotator id"))?;
                    anns.entry(id).or_default();
                }
            }
        } else {
            return Err(Error::parse(line_no, "expected an `S` or `A` line"));
        }
    }
    finish(current.take(), &mut out, block_start)?;
    Ok(out)
}

pub fn load_m2(path: impl AsRef<Path>) -> Result<Vec<M2Sentence>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_m2(&text).map_err(|e| e.with_path(path))
}

/// True/false positive and false negative counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    pub fn precision(&self) -> f64 {
        if self.tp + self.fp > 0 {
            self.tp as f64 / (self.tp + self.fp) as f64
        } else if self.tp + self.fn_ == 0 {
            1.0
        } else {
            0.0
        }
    }

    pub fn recall(&self) -> f64 {
        if self.tp + self.fn_ > 0 {
            self.tp as f64 / (self.tp + self.fn_) as f64
        } else if self.tp + self.fp == 0 {
            1.0
        } else {
            0.0
        }
    }

    pub fn f_beta(&self, beta: f64) -> f64 {
        fbeta(self.precision(), self.recall(), beta)
    }

    fn add(&mut self, o: Counts) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.fn_ += o.fn_;
    }
}

/// (1+β²)PR / (β²P + R), or 0 when the denominator vanishes.
pub fn fbeta(p: f64, r: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * p + r;
    if denom > 0.0 {
        (1.0 + b2) * p * r / denom
    } else {
        0.0
    }
}

/// Scoring outcome for one sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SentenceScore {
    /// Index into the gold annotations of the chosen annotator.
    pub annotator: usize,
    pub counts: Counts,
    pub per_category: BTreeMap<String, Counts>,
}

fn count_against(hyp: &[EditSpan], gold: &[EditSpan]) -> Counts {
    let gold_keys: BTreeSet<_> = gold.iter().map(EditSpan::key).collect();
    let hyp_keys: BTreeSet<_> = hyp.iter().map(EditSpan::key).collect();
    let tp = hyp_keys.intersection(&gold_keys).count();
    Counts {
        tp,
        fp: hyp_keys.len() - tp,
        fn_: gold_keys.len() - tp,
    }
}

/// Match hypothesis spans against the best-fitting annotator.
pub fn score_sentence(hyp: &[EditSpan], gold: &[GoldAnnotation]) -> SentenceScore {
    let empty = GoldAnnotation {
        annotator_id: 0,
        edits: Vec::new(),
    };
    let candidates: &[GoldAnnotation] = if gold.is_empty() { std::slice::from_ref(&empty) } else { gold };

    let mut best = 0;
    let mut best_counts = count_against(hyp, &candidates[0].edits);
    for (i, g) in candidates.iter().enumerate().skip(1) {
        let c = count_against(hyp, &g.edits);
        let rank = |c: &Counts| (c.tp, std::cmp::Reverse(c.fp), std::cmp::Reverse(c.fn_));
        if rank(&c) > rank(&best_counts) {
            best = i;
            best_counts = c;
        }
    }

    let chosen = &candidates[best].edits;
    let mut per_category: BTreeMap<String, Counts> = BTreeMap::new();
    let hyp_keys: BTreeSet<_> = hyp.iter().map(EditSpan::key).collect();
    for g in chosen {
        let cat = g.category.as_deref().map(base_category).unwrap_or(UNKNOWN_CATEGORY);
        let entry = per_category.entry(cat.to_string()).or_default();
        if hyp_keys.contains(&g.key()) {
            entry.tp += 1;
        } else {
            entry.fn_ += 1;
        }
    }
    if best_counts.fp > 0 {
        per_category.entry(UNKNOWN_CATEGORY.to_string()).or_default().fp += best_counts.fp;
    }

    SentenceScore {
        annotator: best,
        counts: best_counts,
        per_category,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryScore {
    #[serde(flatten)]
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
}

impl CategoryScore {
    fn new(counts: Counts, beta: f64) -> Self {
        CategoryScore {
            counts,
            precision: counts.precision(),
            recall: counts.recall(),
            f_beta: counts.f_beta(beta),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub beta: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
    pub per_category: BTreeMap<String, CategoryScore>,
}

impl ScoreReport {
    pub fn from_counts(total: Counts, per_category: BTreeMap<String, Counts>, beta: f64) -> Self {
        ScoreReport {
            beta,
            tp: total.tp,
            fp: total.fp,
            fn_: total.fn_,
            precision: total.precision(),
            recall: total.recall(),
            f_beta: total.f_beta(beta),
            per_category: per_category
                .into_iter()
                .map(|(k, c)| (k, CategoryScore::new(c, beta)))
                .collect(),
        }
    }

    /// Keep only the named categories (compared after prefix stripping).
    pub fn filter_categories(&mut self, keep: &[&str]) {
        let keep: BTreeSet<&str> = keep.iter().map(|c| base_category(c)).collect();
        self.per_category.retain(|k, _| keep.contains(k.as_str()));
    }

    /// Per-category table as CSV with a header row.
    pub fn category_csv(&self) -> String {
        let mut s = String::from("category,tp,fp,fn,precision,recall,f_beta\n");
        for (k, c) in &self.per_category {
            s.push_str(&format!(
                "{k},{},{},{},{:.4},{:.4},{:.4}\n",
                c.counts.tp, c.counts.fp, c.counts.fn_, c.precision, c.recall, c.f_beta
            ));
        }
        s
    }
}

/// Micro-averaged scores of hypothesis sentences against gold, in parallel.
pub fn score_corpus(hyps: &[Vec<Token>], gold: &[M2Sentence], beta: f64) -> Result<ScoreReport> {
    if hyps.len() != gold.len() {
        return Err(Error::Contract(format!(
            "{} hypothesis sentences for {} gold sentences",
            hyps.len(),
            gold.len()
        )));
    }
    let scores: Vec<SentenceScore> = hyps
        .par_iter()
        .zip(gold.par_iter())
        .map(|(h, g)| score_sentence(&extract_spans(&g.source, h), &g.annotations))
        .collect();
    let mut total = Counts::default();
    let mut per_category: BTreeMap<String, Counts> = BTreeMap::new();
    for s in scores {
        total.add(s.counts);
        for (k, c) in s.per_category {
            per_category.entry(k).or_default().add(c);
        }
    }
    Ok(ScoreReport::from_counts(total, per_category, beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AggregateReport {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub n_seeds: usize,
}

pub fn aggregate(scores: &[f64]) -> Result<AggregateReport> {
    let n = scores.len();
    if n == 0 {
        return Err(Error::Contract("cannot aggregate zero scores".into()));
    }
    let mean = scores.iter().sum::<f64>() / n as f64;
    let std = if n == 1 {
        0.0
    } else {
        (scores.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    Ok(AggregateReport {
        mean,
        std,
        n_seeds: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::tokens;
    use proptest::prelude::*;

    const M2: &str = "\
S This are a sentence .
A 1 2|||R:VERB:SVA|||is|||REQUIRED|||-NONE-|||0
A 3 3|||M:ADJ|||nice|||REQUIRED|||-NONE-|||0
A 1 2|||R:VERB:SVA|||is|||REQUIRED|||-NONE-|||1

S Fine .
A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0

S No edits here .
";

    #[test]
    fn parses_blocks() {
        let s = parse_m2(M2).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].annotations.len(), 2);
        assert_eq!(s[0].annotations[0].edits.len(), 2);
        assert_eq!(s[0].annotations[0].edits[1].replacement, tokens(&["nice"]).unwrap());
        assert_eq!(s[1].annotations, [GoldAnnotation { annotator_id: 0, edits: vec![] }]);
        assert_eq!(s[2].annotations.len(), 1);
    }

    #[test]
    fn parse_errors_have_line_numbers() {
        for (text, line) in [
            ("S a b\nA 0 1|||R:X|||c|||REQUIRED|||-NONE-\n", 2),
            ("S a b\nA 0 5|||R:X|||c|||REQUIRED|||-NONE-|||0\n", 2),
            ("A 0 1|||R:X|||c|||REQUIRED|||-NONE-|||0\n", 1),
            ("S a\n\nS b\nA 0 1|||R:X|||c|||REQUIRED|||-NONE-|||0\nA 0 1|||R:X|||d|||REQUIRED|||-NONE-|||0\n", 3),
            ("S a\nX what\n", 2),
        ] {
            let err = parse_m2(text).unwrap_err();
            assert!(err.to_string().contains(&format!(":{line}:")), "{text:?} → {err}");
        }
    }

    #[test]
    fn best_annotator_and_conventions() {
        let s = parse_m2(M2).unwrap();
        let hyp = |w: &[&str]| tokens(w).unwrap();
        // Matches annotator 1 exactly.
        let h = hyp(&["This", "is", "a", "sentence", "."]);
        let sc = score_sentence(&extract_spans(&s[0].source, &h), &s[0].annotations);
        assert_eq!(sc.annotator, 1);
        assert_eq!(sc.counts, Counts { tp: 1, fp: 0, fn_: 0 });

        let r = score_corpus(&[s[0].source.clone(), s[1].source.clone(), s[2].source.clone()], &s, 0.5)
            .unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (0, 0, 1));
        assert_eq!((r.precision, r.recall, r.f_beta), (0.0, 0.0, 0.0));
    }

    #[test]
    fn per_category_labels() {
        let s = parse_m2(M2).unwrap();
        let h = tokens(&["This", "is", "a", "sentence", "!"]).unwrap();
        let r = score_corpus(&[h], &s[..1], 0.5).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (1, 1, 0));
        assert_eq!(r.per_category["VERB:SVA"].counts.tp, 1);
        assert_eq!(r.per_category[UNKNOWN_CATEGORY].counts.fp, 1);
        assert!(r.category_csv().starts_with("category,tp,fp,fn"));
    }

    #[test]
    fn aggregate_examples() {
        let a = aggregate(&[0.5]).unwrap();
        assert_eq!((a.mean, a.std, a.n_seeds), (0.5, 0.0, 1));
        let a = aggregate(&[0.7, 0.7, 0.7]).unwrap();
        assert!((a.mean - 0.7).abs() < 1e-12 && a.std.abs() < 1e-12);
        let a = aggregate(&[0.72, 0.74]).unwrap();
        assert!((a.mean - 0.73).abs() < 1e-12);
        assert!((a.std - 0.0141).abs() < 1e-4);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn fbeta_examples() {
        assert!((fbeta(0.6813, 0.3812, 0.5) - 0.5886).abs() < 1e-4);
        assert!((fbeta(0.7789, 0.5672, 0.5) - 0.7247).abs() < 1e-4);
        assert_eq!(fbeta(0.0, 0.0, 0.5), 0.0);
    }

    proptest! {
        #[test]
        fn fbeta_fixed_point(x in 0.0f64..=1.0) {
            prop_assert!((fbeta(x, x, 0.5) - x).abs() < 1e-12);
        }

        #[test]
        fn half_beta_favours_precision(p in 0.01f64..=1.0, frac in 0.0f64..0.99) {
            let r = p * frac;
            prop_assume!(r > 0.0);
            prop_assert!(fbeta(p, r, 0.5) > fbeta(p, r, 1.0));
        }
    }
}
