//! Tag selection from per-token distributions, iterative correction and the
//! inference-tweak grid search.
//!
//! A distribution covers the tagger's input, i.e. `$START` followed by the
//! sentence. The external file format is JSONL, one object per sentence:
//!
//! ```text
//! {"src":["$START","I","beleive"],"probs":[[1.0,0.0],[1.0,0.0],[0.1,0.9]],"error_probs":[0.0,0.0,0.9]}
//! ```
//!
//! `probs` rows index the tag vocabulary by id.

use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apply::{apply_tags, Resources};
use crate::error::{Error, Result};
use crate::score::{score_corpus, M2Sentence, ScoreReport};
use crate::speller::SpellDictionary;
use crate::tag::EditTag;
use crate::token::Token;
use crate::vocab::TagVocabulary;

/// Tolerance on row sums.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;
/// Default bound on tag-and-apply rounds.
pub const DEFAULT_MAX_ITERS: usize = 4;
/// Values per grid axis: 0.00, 0.02, ..., 0.90.
pub const GRID_STEPS: usize = 46;

/// Per-token tag probabilities plus the detection head's error probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagDistribution {
    #[serde(rename = "src")]
    pub source: Vec<Token>,
    pub probs: Vec<Vec<f64>>,
    pub error_probs: Vec<f64>,
}

impl TagDistribution {
    pub fn new(source: Vec<Token>, probs: Vec<Vec<f64>>, error_probs: Vec<f64>) -> Result<Self> {
        let d = TagDistribution {
            source,
            probs,
            error_probs,
        };
        d.validate()?;
        Ok(d)
    }

    /// Certain distribution: each row puts all mass on the given tag id.
    pub fn one_hot(source: Vec<Token>, ids: &[usize], width: usize, error_probs: Vec<f64>) -> Result<Self> {
        let probs = ids
            .iter()
            .map(|&id| {
                let mut row = vec![0.0; width];
                if let Some(x) = row.get_mut(id) {
                    *x = 1.0;
                }
                row
            })
            .collect();
        TagDistribution::new(source, probs, error_probs)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.source.len();
        if self.probs.len() != n || self.error_probs.len() != n {
            return Err(Error::Contract(format!(
                "{} tokens but {} probability rows and {} error probabilities",
                n,
                self.probs.len(),
                self.error_probs.len()
            )));
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        for (i, row) in self.probs.iter().enumerate() {
            if !row.iter().all(|&p| unit(p)) {
                return Err(Error::Contract(format!("row {i} has a probability outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::Contract(format!("row {i} sums to {sum}")));
            }
        }
        if !self.error_probs.iter().all(|&p| unit(p)) {
            return Err(Error::Contract("error probability outside [0, 1]".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> Option<usize> {
        self.probs.first().map(Vec::len)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("distributions always serialise")
    }
}

/// Read distributions JSONL; blank lines skipped, errors line-numbered.
pub fn read_distributions<R: BufRead>(reader: R) -> Result<Vec<TagDistribution>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<distributions>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let d: TagDistribution =
            serde_json::from_str(&line).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        d.validate().map_err(|e| Error::parse(i + 1, e.to_string()))?;
        out.push(d);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct InferenceTweaks {
    /// Added to the `$KEEP` probability before the argmax.
    pub confidence_bias: f64,
    /// Sentences whose highest error probability is below this stay unchanged.
    pub min_error_prob: f64,
}

impl InferenceTweaks {
    pub fn new(confidence_bias: f64, min_error_prob: f64) -> Self {
        InferenceTweaks {
            confidence_bias,
            min_error_prob,
        }
    }
}

/// Per-row argmax after biasing `$KEEP` (id 0), ties to the lower id; all
/// `$KEEP` when no token's error probability reaches `min_error_prob`.
pub fn select_tags(
    dist: &TagDistribution,
    vocab: &TagVocabulary,
    tweaks: InferenceTweaks,
) -> Result<Vec<EditTag>> {
    if let Some(w) = dist.probs.iter().map(Vec::len).find(|&w| w != vocab.len()) {
        return Err(Error::Contract(format!(
            "distribution width {w} does not match vocabulary size {}",
            vocab.len()
        )));
    }
    let max_err = dist.error_probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if dist.source.is_empty() || max_err < tweaks.min_error_prob {
        return Ok(vec![EditTag::Keep; dist.source.len()]);
    }
    Ok(dist
        .probs
        .iter()
        .map(|row| {
            let mut best = 0;
            let mut best_p = row[0] + tweaks.confidence_bias;
            for (id, &p) in row.iter().enumerate().skip(1) {
                if p > best_p {
                    best = id;
                    best_p = p;
                }
            }
            vocab.get(best).expect("width checked").clone()
        })
        .collect())
}

/// Anything that produces a distribution for `$START` + sentence.
pub trait Tagger: Sync {
    fn tag(&self, input: &[Token]) -> Result<TagDistribution>;
}

fn with_start(sentence: &[Token]) -> Vec<Token> {
    let mut v = Vec::with_capacity(sentence.len() + 1);
    v.push(Token::start());
    v.extend(sentence.iter().cloned());
    v
}

/// Tag and apply until the output stops changing or `max_iters` rounds ran.
pub fn correct_iteratively(
    sentence: &[Token],
    tagger: &dyn Tagger,
    vocab: &TagVocabulary,
    tweaks: InferenceTweaks,
    res: &Resources<'_>,
    max_iters: usize,
) -> Result<Vec<Token>> {
    if max_iters == 0 {
        return Err(Error::Contract("max_iters must be at least 1".into()));
    }
    let mut current = sentence.to_vec();
    for _ in 0..max_iters {
        let input = with_start(&current);
        let dist = tagger.tag(&input)?;
        if dist.source != input {
            return Err(Error::Contract("tagger returned a distribution for other tokens".into()));
        }
        let tags = select_tags(&dist, vocab, tweaks)?;
        let next = apply_tags(&input, &tags, res)?;
        if next == current {
            break;
        }
        current = next;
    }
    Ok(current)
}

/// Single pass over precomputed distributions: select, then apply.
pub fn apply_distribution(
    dist: &TagDistribution,
    vocab: &TagVocabulary,
    tweaks: InferenceTweaks,
    res: &Resources<'_>,
) -> Result<Vec<Token>> {
    let tags = select_tags(dist, vocab, tweaks)?;
    apply_tags(&dist.source, &tags, res)
}

/// Test double: `$SPELL` with certainty on purely alphabetic tokens the
/// dictionary lacks (compared lowercased), `$KEEP` elsewhere.
pub struct DictionaryTagger<'a> {
    speller: &'a SpellDictionary,
    width: usize,
    spell_id: usize,
}

impl<'a> DictionaryTagger<'a> {
    pub fn new(speller: &'a SpellDictionary, vocab: &TagVocabulary) -> Result<Self> {
        let spell_id = vocab
            .id_of(&EditTag::Spell)
            .ok_or_else(|| Error::Contract("vocabulary has no $SPELL tag".into()))?;
        Ok(DictionaryTagger {
            speller,
            width: vocab.len(),
            spell_id,
        })
    }

    fn flags(&self, tok: &Token) -> bool {
        let w = tok.as_str();
        !tok.is_start()
            && w.chars().all(char::is_alphabetic)
            && !self.speller.contains(&w.to_lowercase())
    }
}

impl Tagger for DictionaryTagger<'_> {
    fn tag(&self, input: &[Token]) -> Result<TagDistribution> {
        let flagged: Vec<bool> = input.iter().map(|t| self.flags(t)).collect();
        let ids: Vec<usize> = flagged.iter().map(|&f| if f { self.spell_id } else { 0 }).collect();
        let errs = flagged.iter().map(|&f| if f { 1.0 } else { 0.0 }).collect();
        TagDistribution::one_hot(input.to_vec(), &ids, self.width, errs)
    }
}

/// The value of grid step `i`.
pub fn grid_value(i: usize) -> f64 {
    i as f64 / 50.0
}

/// Axis values 0.00 to 0.90 in steps of 0.02.
pub fn grid_axis() -> Vec<f64> {
    (0..GRID_STEPS).map(grid_value).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCell {
    pub tweaks: InferenceTweaks,
    pub report: ScoreReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridResult {
    pub best: InferenceTweaks,
    pub best_f_beta: f64,
    /// Row-major: confidence bias outer, minimum error probability inner.
    pub table: Vec<GridCell>,
}

impl GridResult {
    /// Header plus one row per cell.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("confidence_bias,min_error_prob,tp,fp,fn,precision,recall,f_beta\n");
        for c in &self.table {
            let r = &c.report;
            s.push_str(&format!(
                "{:.2},{:.2},{},{},{},{:.6},{:.6},{:.6}\n",
                c.tweaks.confidence_bias, c.tweaks.min_error_prob, r.tp, r.fp, r.fn_, r.precision, r.recall, r.f_beta
            ));
        }
        s
    }
}

/// Evaluate every cell of the 46 × 46 grid in parallel. The best cell has the
/// highest F-beta; ties go to the smaller bias, then the smaller gate.
pub fn grid_search<F>(evaluate: F) -> Result<GridResult>
where
    F: Fn(InferenceTweaks) -> Result<ScoreReport> + Sync,
{
    let cells: Vec<InferenceTweaks> = (0..GRID_STEPS)
        .flat_map(|cb| (0..GRID_STEPS).map(move |mep| InferenceTweaks::new(grid_value(cb), grid_value(mep))))
        .collect();
    let table: Vec<GridCell> = cells
        .into_par_iter()
        .map(|tweaks| evaluate(tweaks).map(|report| GridCell { tweaks, report }))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, c) in table.iter().enumerate() {
        if c.report.f_beta > table[best].report.f_beta {
            best = i;
        }
    }
    Ok(GridResult {
        best: table[best].tweaks,
        best_f_beta: table[best].report.f_beta,
        table,
    })
}

/// Score one tweak setting on a development set given as precomputed
/// distributions (one per gold sentence, each over `$START` + source).
pub fn evaluate_dev(
    dists: &[TagDistribution],
    gold: &[M2Sentence],
    vocab: &TagVocabulary,
    tweaks: InferenceTweaks,
    res: &Resources<'_>,
    beta: f64,
) -> Result<ScoreReport> {
    if dists.len() != gold.len() {
        return Err(Error::Contract(format!(
            "{} distributions for {} gold sentences",
            dists.len(),
            gold.len()
        )));
    }
    let hyps: Vec<Vec<Token>> = dists
        .iter()
        .map(|d| apply_distribution(d, vocab, tweaks, res))
        .collect::<Result<_>>()?;
    score_corpus(&hyps, gold, beta)
}
