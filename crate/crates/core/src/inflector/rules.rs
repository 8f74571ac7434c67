//! Ordered suffix rules for regular English morphology, used when a word is
//! missing from the lexicon.

use crate::tag::{CoarsePos, PtbPos};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn is_consonant(c: char) -> bool {
    c.is_alphabetic() && !is_vowel(c)
}

fn chars(w: &str) -> Vec<char> {
    w.chars().collect()
}

/// Vowel groups, reading `y` as a consonant and the `u` of `qu` as part of
/// the consonant.
fn syllables(w: &[char]) -> usize {
    let mut groups = 0;
    let mut in_vowel = false;
    for (i, &c) in w.iter().enumerate() {
        let v = is_vowel(c) && !(c == 'u' && i > 0 && w[i - 1] == 'q');
        if v && !in_vowel {
            groups += 1;
        }
        in_vowel = v;
    }
    groups
}

/// Monosyllabic consonant-vowel-consonant stems double their final consonant
/// before a vowel suffix (stop → stopped, big → bigger).
fn doubles_final(w: &[char]) -> bool {
    let n = w.len();
    if n < 3 || syllables(w) != 1 {
        return false;
    }
    let (a, b, c) = (w[n - 3], w[n - 2], w[n - 1]);
    let onset_ok = is_consonant(a) || (a == 'u' && n >= 4 && w[n - 4] == 'q');
    onset_ok && is_vowel(b) && is_consonant(c) && !matches!(c, 'w' | 'x' | 'y')
}

fn ends_sibilant(w: &str) -> bool {
    ["s", "x", "z", "ch", "sh"].iter().any(|s| w.ends_with(s))
}

fn consonant_y(w: &[char]) -> bool {
    w.len() >= 2 && w[w.len() - 1] == 'y' && is_consonant(w[w.len() - 2])
}

fn drop_last(w: &str, n: usize) -> &str {
    let cut = w.char_indices().rev().nth(n - 1).map_or(0, |(i, _)| i);
    &w[..cut]
}

fn with_suffix(lemma: &str, suffix: &str) -> String {
    let c = chars(lemma);
    let starts_vowel = suffix.starts_with(is_vowel);
    if starts_vowel && consonant_y(&c) && !suffix.starts_with('i') {
        return format!("{}i{suffix}", drop_last(lemma, 1));
    }
    if starts_vowel && lemma.ends_with('e') && lemma.chars().count() > 2 {
        return format!("{}{suffix}", drop_last(lemma, 1));
    }
    if starts_vowel && doubles_final(&c) {
        let last = c[c.len() - 1];
        return format!("{lemma}{last}{suffix}");
    }
    format!("{lemma}{suffix}")
}

/// Inflect a lemma to `target` by rule. Always returns a non-empty string for
/// non-empty input.
pub fn inflect_lemma(lemma: &str, target: PtbPos) -> String {
    use PtbPos::*;
    let c = chars(lemma);
    match target {
        NN | VB | VBP | JJ | RB => lemma.to_string(),
        NNS | VBZ => {
            if ends_sibilant(lemma) {
                format!("{lemma}es")
            } else if consonant_y(&c) {
                format!("{}ies", drop_last(lemma, 1))
            } else if target == VBZ && c.len() >= 2 && c[c.len() - 1] == 'o' && is_consonant(c[c.len() - 2]) {
                format!("{lemma}es")
            } else {
                format!("{lemma}s")
            }
        }
        VBD | VBN => {
            if lemma.ends_with('e') {
                format!("{lemma}d")
            } else {
                with_suffix(lemma, "ed")
            }
        }
        VBG => {
            if let Some(stem) = lemma.strip_suffix("ie") {
                format!("{stem}ying")
            } else if ["ee", "ye", "oe"].iter().any(|s| lemma.ends_with(s)) || c.len() <= 2 {
                format!("{lemma}ing")
            } else {
                with_suffix(lemma, "ing")
            }
        }
        JJR | RBR => {
            if lemma.ends_with('e') {
                format!("{lemma}r")
            } else {
                with_suffix(lemma, "er")
            }
        }
        JJS | RBS => {
            if lemma.ends_with('e') {
                format!("{lemma}st")
            } else {
                with_suffix(lemma, "est")
            }
        }
    }
}

fn has_vowel(w: &str) -> bool {
    w.chars().any(|c| is_vowel(c) || c == 'y')
}

/// Undo consonant doubling or restore a dropped final `e` on a stem left
/// after stripping a vowel suffix.
fn repair_stem(stem: &str) -> String {
    let c = chars(stem);
    let n = c.len();
    if n >= 3 && c[n - 1] == c[n - 2] && is_consonant(c[n - 1]) && !matches!(c[n - 1], 'l' | 's' | 'z' | 'f') {
        return drop_last(stem, 1).to_string();
    }
    if doubles_final(&c) {
        // An undoubled CVC stem means the suffix replaced a final `e`.
        return format!("{stem}e");
    }
    let last = c[n - 1];
    let needs_e = match last {
        'v' | 'c' | 'u' => true,
        'g' => n >= 2 && !matches!(c[n - 2], 'n' | 'g'),
        'z' => n >= 2 && c[n - 2] != 'z',
        _ => false,
    };
    if needs_e {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

fn strip_plural(w: &str) -> Option<String> {
    let n = w.chars().count();
    if n > 4 {
        if let Some(stem) = w.strip_suffix("ies") {
            return Some(format!("{stem}y"));
        }
    }
    for s in ["sses", "shes", "ches", "xes", "zzes"] {
        if w.ends_with(s) {
            return Some(drop_last(w, 2).to_string());
        }
    }
    if ["ss", "us", "is"].iter().any(|s| w.ends_with(s)) {
        return None;
    }
    if n > 3 && w.ends_with('s') {
        return Some(drop_last(w, 1).to_string());
    }
    None
}

/// Rule lemmatiser for a lowercased word. Returns the input when no rule applies.
pub fn lemmatize_word(w: &str, pos: CoarsePos) -> String {
    let n = w.chars().count();
    let accept = |stem: &str| has_vowel(stem) && stem.chars().count() >= 2;
    match pos {
        CoarsePos::Noun => strip_plural(w).unwrap_or_else(|| w.to_string()),
        CoarsePos::Verb => {
            if n >= 4 && w.ends_with("oes") {
                return drop_last(w, 2).to_string();
            }
            if let Some(l) = strip_plural(w) {
                return l;
            }
            if n > 4 {
                if let Some(stem) = w.strip_suffix("ied") {
                    return format!("{stem}y");
                }
            }
            if w.ends_with("eed") {
                return w.to_string();
            }
            if n > 4 {
                if let Some(stem) = w.strip_suffix("ed") {
                    if accept(stem) {
                        return repair_stem(stem);
                    }
                }
            }
            if n == 5 {
                if let Some(stem) = w.strip_suffix("ying") {
                    return format!("{stem}ie");
                }
            }
            if n > 5 {
                if let Some(stem) = w.strip_suffix("ing") {
                    if accept(stem) {
                        return repair_stem(stem);
                    }
                }
            }
            w.to_string()
        }
        CoarsePos::Adj | CoarsePos::Adv => {
            if n > 5 {
                if let Some(stem) = w.strip_suffix("iest") {
                    return format!("{stem}y");
                }
            }
            if n > 4 {
                if let Some(stem) = w.strip_suffix("ier") {
                    return format!("{stem}y");
                }
            }
            if n > 5 {
                if let Some(stem) = w.strip_suffix("est") {
                    if accept(stem) {
                        return repair_stem(stem);
                    }
                }
            }
            if n > 4 {
                if let Some(stem) = w.strip_suffix("er") {
                    if accept(stem) {
                        return repair_stem(stem);
                    }
                }
            }
            w.to_string()
        }
    }
}
