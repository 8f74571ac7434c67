//! Independent reference implementations and fixture loaders shared by the
//! integration tests.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use gectag_core::ensemble::EditSpan;
use gectag_core::preprocess::{read_parallel, SentencePair};
use gectag_core::score::GoldAnnotation;
use gectag_core::{ResourceSet, Token};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn shipped_resources() -> &'static ResourceSet {
    static RES: OnceLock<ResourceSet> = OnceLock::new();
    RES.get_or_init(|| ResourceSet::load_default().expect("shipped data loads"))
}

pub fn fixture_pairs() -> Vec<SentencePair> {
    let open = |n: &str| std::io::BufReader::new(std::fs::File::open(fixture(n)).unwrap());
    read_parallel(open("corpus.src"), open("corpus.tgt")).unwrap()
}

pub fn toks(words: &[&str]) -> Vec<Token> {
    words.iter().map(|w| Token::new(*w).unwrap()).collect()
}

/// Full-matrix optimal string alignment distance.
pub fn reference_osa(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut v = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                v = v.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = v;
        }
    }
    d[a.len()][b.len()]
}

/// Full-matrix OSA over char slices with caller-provided rows, so a linear
/// scan over a large dictionary does not allocate per word.
pub fn reference_osa_chars(a: &[char], b: &[char], rows: &mut [Vec<usize>; 3]) -> usize {
    let [prev2, prev, cur] = rows;
    for r in [&mut *prev2, &mut *prev, &mut *cur] {
        r.clear();
        r.resize(b.len() + 1, 0);
    }
    for (j, x) in prev.iter_mut().enumerate() {
        *x = j;
    }
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut v = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                v = v.min(prev2[j - 2] + 1);
            }
            cur[j] = v;
        }
        std::mem::swap(prev2, prev);
        std::mem::swap(prev, cur);
    }
    prev[b.len()]
}

/// Linear scan: nearest word within `max`, ties by higher frequency then
/// lexicographic order. `words` holds (chars, surface, frequency).
pub fn brute_force_lookup(words: &[(Vec<char>, String, u64)], input: &str, max: usize) -> Option<(String, usize)> {
    let q: Vec<char> = input.chars().collect();
    let mut rows: [Vec<usize>; 3] = Default::default();
    let mut best: Option<(usize, u64, &str)> = None;
    for (chars, w, f) in words {
        // Any alignment needs at least the length difference in edits.
        if chars.len().abs_diff(q.len()) > max {
            continue;
        }
        let d = reference_osa_chars(&q, chars, &mut rows);
        if d > max {
            continue;
        }
        let better = match best {
            None => true,
            Some((bd, bf, bw)) => d < bd || (d == bd && (*f > bf || (*f == bf && w.as_str() < bw))),
        };
        if better {
            best = Some((d, *f, w));
        }
    }
    best.map(|(d, _, w)| (w.to_string(), d))
}

/// Cells of the source a span touches: tokens at odd positions 2i+1 and
/// token boundaries at even positions 2i.
fn occupied(s: &EditSpan) -> Vec<usize> {
    if s.start == s.end {
        vec![2 * s.start]
    } else {
        (2 * s.start + 1..2 * s.end).collect()
    }
}

/// Ensemble by exhaustive counting: every span any system proposes is
/// counted against every system's full span list; accepted spans are taken in
/// (start, end, replacement) order, skipping any that share a cell with one
/// already taken; the result is spliced together token by token.
pub fn brute_force_vote(source: &[Token], outputs: &[Vec<Token>], threshold: usize) -> Vec<Token> {
    let lists: Vec<Vec<EditSpan>> = outputs
        .iter()
        .map(|o| gectag_core::extract_spans(source, o))
        .collect();
    let mut all: Vec<EditSpan> = Vec::new();
    for l in &lists {
        for s in l {
            if !all.iter().any(|a| a.key() == s.key()) {
                all.push(s.clone());
            }
        }
    }
    all.sort_by(|a, b| a.key().cmp(&b.key()));
    let mut taken: Vec<EditSpan> = Vec::new();
    let mut cells: Vec<usize> = Vec::new();
    for s in all {
        let votes = lists
            .iter()
            .filter(|l| l.iter().any(|x| x.key() == s.key()))
            .count();
        if votes < threshold {
            continue;
        }
        let occ = occupied(&s);
        if occ.iter().any(|c| cells.contains(c)) {
            continue;
        }
        cells.extend(occ);
        taken.push(s);
    }
    let mut out = Vec::new();
    for i in 0..=source.len() {
        for s in taken.iter().filter(|s| s.start == i && s.end == i) {
            out.extend(s.replacement.iter().cloned());
        }
        if i == source.len() {
            break;
        }
        match taken.iter().find(|s| s.start <= i && i < s.end) {
            Some(s) if s.start == i => out.extend(s.replacement.iter().cloned()),
            Some(_) => {}
            None => out.push(source[i].clone()),
        }
    }
    out
}

/// Best-annotator match by trying every annotator: (annotator index, tp, fp, fn).
pub fn brute_force_score(hyp: &[EditSpan], gold: &[GoldAnnotation]) -> (usize, usize, usize, usize) {
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for (idx, g) in gold.iter().enumerate() {
        let tp = hyp
            .iter()
            .filter(|h| g.edits.iter().any(|e| e.start == h.start && e.end == h.end && e.replacement == h.replacement))
            .count();
        let fp = hyp.len() - tp;
        let fn_ = g.edits.len() - tp;
        let better = match best {
            None => true,
            Some((_, btp, bfp, bfn)) => tp > btp || (tp == btp && (fp < bfp || (fp == bfp && fn_ < bfn))),
        };
        if better {
            best = Some((idx, tp, fp, fn_));
        }
    }
    best.unwrap_or((0, 0, hyp.len(), 0))
}
