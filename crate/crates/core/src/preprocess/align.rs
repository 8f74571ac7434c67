//! Token alignment of a (source, target) pair into one tag per source token.
//!
//! A shortest-path search over (source position, target position) states.
//! Each step consumes one or more source tokens and emits their tags:
//!
//! | step | source | target | tag(s) |
//! |------|--------|--------|--------|
//! | keep | 1 | 1 (equal) | `$KEEP` |
//! | keep + append | 1 | 2 | `$APPEND_t` |
//! | g-transform | 1 | 1 | `$CASE_*`, `$NOUN_NUMBER_*`, `$VERB_FORM_*_*` |
//! | split | 1 | k ≥ 2 | `$SPLIT_HYPHEN` |
//! | merge | r ≥ 2 | 1 | `$MERGE_*` ×(r−1), `$KEEP` |
//! | replace | 1 | 1 | `$REPLACE_t` |
//! | delete | 1 | 0 | `$DELETE` |
//! | lost insertion | 0 | 1 | none: unrepresentable |
//!
//! Costs compare lexicographically as (lost insertions, edits, replaces), so a
//! g-transform beats an equal-length `$REPLACE` path. Among equal-cost paths
//! the first step in the table order wins. The leading `$START` token can
//! only keep or append.

use crate::apply::{apply_tags, Resources};
use crate::labeled::LabeledSentence;
use crate::tag::{CaseKind, EditTag, MergeKind, NounNumber};
use crate::token::Token;

/// Longest run of source tokens one merge step may join.
const MAX_MERGE_RUN: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePair {
    pub source: Vec<Token>,
    pub target: Vec<Token>,
}

impl SentencePair {
    pub fn new(source: Vec<Token>, target: Vec<Token>) -> Self {
        SentencePair { source, target }
    }
}

/// Result of aligning one pair.
#[derive(Clone, Debug)]
pub struct Alignment {
    /// Tags over `$START` + source, with `target` set to the tags' actual output.
    pub labeled: LabeledSentence,
    /// Target tokens no single tag could express (consecutive insertions,
    /// insertions after a transformed token). Zero means the tags reproduce
    /// the target exactly.
    pub lost_insertions: usize,
}

impl Alignment {
    pub fn is_exact(&self) -> bool {
        self.lost_insertions == 0
    }
}

type Cost = (u32, u32, u32);

#[derive(Clone, Debug)]
enum Step {
    /// Consume `tags.len()` source tokens and `target` target tokens.
    Tags { tags: Vec<EditTag>, target: usize },
    Lost,
}

impl Step {
    fn cost(&self) -> Cost {
        match self {
            Step::Lost => (1, 0, 0),
            Step::Tags { tags, .. } => match tags.first() {
                Some(EditTag::Keep) if tags.len() == 1 => (0, 0, 0),
                Some(EditTag::Replace(_)) => (0, 1, 1),
                _ => (0, 1, 0),
            },
        }
    }

    fn advance(&self, i: usize, j: usize) -> (usize, usize) {
        match self {
            Step::Lost => (i, j + 1),
            Step::Tags { tags, target } => (i + tags.len(), j + target),
        }
    }
}

fn add(a: Cost, b: Cost) -> Cost {
    (a.0 + b.0, a.1 + b.1, a.2 + b.2)
}

struct Aligner<'a> {
    src: &'a [Token],
    tgt: &'a [Token],
    res: &'a Resources<'a>,
}

impl Aligner<'_> {
    /// Candidate steps from (i, j) in preference order.
    fn steps(&self, i: usize, j: usize) -> Vec<Step> {
        let (src, tgt) = (self.src, self.tgt);
        let mut out = Vec::new();
        if i < src.len() {
            let tok = &src[i];
            if i == 0 && tok.is_start() {
                out.push(Step::Tags { tags: vec![EditTag::Keep], target: 0 });
                if j < tgt.len() {
                    out.push(Step::Tags { tags: vec![EditTag::Append(tgt[j].to_string())], target: 1 });
                }
                return out;
            }
            if j < tgt.len() {
                let t = &tgt[j];
                if tok == t {
                    out.push(Step::Tags { tags: vec![EditTag::Keep], target: 1 });
                    if j + 1 < tgt.len() {
                        out.push(Step::Tags {
                            tags: vec![EditTag::Append(tgt[j + 1].to_string())],
                            target: 2,
                        });
                    }
                } else {
                    if let Some(tag) = self.g_transform(tok, t) {
                        out.push(Step::Tags { tags: vec![tag], target: 1 });
                    }
                    if let Some(k) = self.split_width(tok, j) {
                        out.push(Step::Tags { tags: vec![EditTag::SplitHyphen], target: k });
                    }
                    if let Some(tags) = self.merge_run(i, t.as_str()) {
                        out.push(Step::Tags { tags, target: 1 });
                    }
                    out.push(Step::Tags { tags: vec![EditTag::Replace(t.to_string())], target: 1 });
                }
            }
            out.push(Step::Tags { tags: vec![EditTag::Delete], target: 0 });
        }
        if j < tgt.len() {
            out.push(Step::Lost);
        }
        out
    }

    /// First single-token basetags transform turning `tok` into `t`.
    fn g_transform(&self, tok: &Token, t: &Token) -> Option<EditTag> {
        let mut candidates: Vec<EditTag> = CaseKind::ALL.map(EditTag::Case).into();
        candidates.extend(NounNumber::ALL.map(EditTag::NounNumber));
        if let Some((from, to)) = self
            .res
            .verb_forms
            .and_then(|d| d.find_transform(tok.as_str(), t.as_str()))
        {
            candidates.push(EditTag::VerbForm { from, to });
        }
        candidates
            .into_iter()
            .find(|tag| self.res.transform_word(tok, tag).as_ref() == Some(t))
    }

    fn split_width(&self, tok: &Token, j: usize) -> Option<usize> {
        let parts: Vec<&str> = tok.as_str().split('-').filter(|p| !p.is_empty()).collect();
        if parts.len() < 2 || j + parts.len() > self.tgt.len() {
            return None;
        }
        parts
            .iter()
            .zip(&self.tgt[j..])
            .all(|(p, t)| *p == t.as_str())
            .then_some(parts.len())
    }

    /// Tags for a run of 2..=MAX_MERGE_RUN source tokens starting at `i`
    /// whose concatenation (with "" or "-" joints) equals `t`.
    fn merge_run(&self, i: usize, t: &str) -> Option<Vec<EditTag>> {
        fn go(src: &[Token], i: usize, rest: &str, depth: usize, tags: &mut Vec<EditTag>) -> bool {
            let Some(tok) = src.get(i) else { return false };
            let Some(after) = rest.strip_prefix(tok.as_str()) else { return false };
            if after.is_empty() {
                if depth >= 1 {
                    tags.push(EditTag::Keep);
                    return true;
                }
                return false;
            }
            if depth + 1 >= MAX_MERGE_RUN {
                return false;
            }
            for kind in MergeKind::ALL {
                if let Some(next) = after.strip_prefix(kind.separator()) {
                    tags.push(EditTag::Merge(kind));
                    if go(src, i + 1, next, depth + 1, tags) {
                        return true;
                    }
                    tags.pop();
                }
            }
            false
        }
        let mut tags = Vec::new();
        go(self.src, i, t, 0, &mut tags).then_some(tags)
    }
}

/// Align one pair, prefixing the source with `$START`. Never fails: the path
/// always exists because deletions and lost insertions are unconstrained.
pub fn align_and_tag(pair: &SentencePair, res: &Resources<'_>) -> Alignment {
    let mut src = Vec::with_capacity(pair.source.len() + 1);
    src.push(Token::start());
    src.extend(pair.source.iter().cloned());
    let tgt = &pair.target;
    let al = Aligner { src: &src, tgt, res };

    let (n, m) = (src.len(), tgt.len());
    // best[i][j]: cheapest completion from state (i, j).
    let mut best = vec![vec![(u32::MAX, u32::MAX, u32::MAX); m + 1]; n + 1];
    best[n][m] = (0, 0, 0);
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if (i, j) == (n, m) {
                continue;
            }
            let mut b = (u32::MAX, u32::MAX, u32::MAX);
            for s in al.steps(i, j) {
                let (ni, nj) = s.advance(i, j);
                let rest = best[ni][nj];
                if rest.0 != u32::MAX {
                    b = b.min(add(s.cost(), rest));
                }
            }
            best[i][j] = b;
        }
    }

    let mut tags = Vec::with_capacity(n);
    let (mut i, mut j) = (0, 0);
    let mut lost = 0;
    while (i, j) != (n, m) {
        let step = al
            .steps(i, j)
            .into_iter()
            .find(|s| {
                let (ni, nj) = s.advance(i, j);
                best[ni][nj].0 != u32::MAX && add(s.cost(), best[ni][nj]) == best[i][j]
            })
            .expect("an optimal step exists from every reachable state");
        let (ni, nj) = step.advance(i, j);
        match step {
            Step::Lost => lost += 1,
            Step::Tags { tags: t, .. } => tags.extend(t),
        }
        (i, j) = (ni, nj);
    }

    let target = if lost == 0 {
        tgt.clone()
    } else {
        apply_tags(&src, &tags, res).expect("one tag per source token")
    };
    let labeled = LabeledSentence::new(src, tags)
        .expect("one tag per source token")
        .with_target(target);
    Alignment {
        labeled,
        lost_insertions: lost,
    }
}

/// Align repeatedly until the target is reached: each round's output becomes
/// the next round's source, so runs of insertions are spread over rounds.
/// Every returned sentence's `target` is exactly what its tags produce; the
/// last one's is the pair's target. `None` if `max_rounds` is not enough.
pub fn align_chain(
    pair: &SentencePair,
    res: &Resources<'_>,
    max_rounds: usize,
) -> Option<Vec<LabeledSentence>> {
    let mut rounds = Vec::new();
    let mut current = pair.clone();
    for _ in 0..max_rounds {
        let a = align_and_tag(&current, res);
        let exact = a.is_exact();
        let reached = a.labeled.target.clone().unwrap_or_default();
        rounds.push(a.labeled);
        if exact {
            return Some(rounds);
        }
        if reached == current.source {
            // No progress possible.
            return None;
        }
        current = SentencePair::new(reached, pair.target.clone());
    }
    None
}
