//! Symmetric-delete spelling correction.
//!
//! Every dictionary word is indexed under all strings reachable from it by at
//! most `n` character deletions. At lookup time the same deletions are applied
//! to the input; any dictionary word within `n` OSA edits of the input shares
//! at least one such variant with it, so the candidate set is complete and only
//! needs verifying with the true distance.

mod distance;

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;

pub use distance::osa_distance;
use distance::osa_chars_bounded;

use crate::error::{Error, Result};
use crate::token::{starts_uppercase, upper_first};

pub const DEFAULT_MAX_EDIT_DISTANCE: usize = 2;

/// File name of the shipped English frequency dictionary.
pub const SHIPPED_DICTIONARY: &str = "frequency_dictionary_en_82_765.txt";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suggestion {
    pub word: String,
    pub distance: usize,
    pub frequency: u64,
}

/// Counters from dictionary construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildWarnings {
    /// Entries rejected for a zero frequency or an empty word.
    pub rejected: usize,
    /// Repeated words (the maximum frequency is kept).
    pub duplicates: usize,
    /// Unparseable lines skipped by the file loader.
    pub malformed_lines: usize,
}

impl BuildWarnings {
    pub fn total(&self) -> usize {
        self.rejected + self.duplicates + self.malformed_lines
    }
}

/// Word frequencies plus the delete-variant index.
#[derive(Clone, Debug)]
pub struct SpellDictionary {
    words: Vec<String>,
    chars: Vec<Vec<char>>,
    freqs: Vec<u64>,
    by_word: HashMap<String, u32>,
    /// (variant hash, word id), sorted and deduplicated.
    index: Vec<(u64, u32)>,
    max_edit_distance: usize,
    warnings: BuildWarnings,
}

impl SpellDictionary {
    /// Build from `(word, frequency)` pairs. Duplicates keep their maximum
    /// frequency; zero frequencies and empty words are rejected and counted.
    pub fn build<I, S>(entries: I, max_edit_distance: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        if max_edit_distance == 0 {
            return Err(Error::Contract("max edit distance must be at least 1".into()));
        }
        let mut warnings = BuildWarnings::default();
        let mut by_word: HashMap<String, u32> = HashMap::new();
        let mut words = Vec::new();
        let mut freqs: Vec<u64> = Vec::new();
        for (word, freq) in entries {
            let word = word.into();
            if word.is_empty() || freq == 0 {
                warnings.rejected += 1;
                continue;
            }
            match by_word.get(&word) {
                Some(&id) => {
                    warnings.duplicates += 1;
                    let f = &mut freqs[id as usize];
                    *f = (*f).max(freq);
                }
                None => {
                    by_word.insert(word.clone(), words.len() as u32);
                    words.push(word);
                    freqs.push(freq);
                }
            }
        }
        let chars: Vec<Vec<char>> = words.iter().map(|w| w.chars().collect()).collect();

        let mut index = Vec::new();
        let mut buf = Vec::new();
        for (id, w) in chars.iter().enumerate() {
            buf.clear();
            variant_hashes(w, max_edit_distance, &mut buf);
            index.extend(buf.iter().map(|&h| (h, id as u32)));
        }
        index.sort_unstable();
        index.dedup();

        Ok(SpellDictionary {
            words,
            chars,
            freqs,
            by_word,
            index,
            max_edit_distance,
            warnings,
        })
    }

    /// Parse `word<SPACE>frequency` lines. Malformed lines are skipped and counted.
    pub fn from_reader<R: BufRead>(reader: R, max_edit_distance: usize) -> Result<Self> {
        let mut entries = Vec::new();
        let mut malformed = 0;
        for line in reader.lines() {
            let line = line.map_err(|e| Error::io("<dictionary>", e))?;
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(w), Some(f), None) => match f.parse::<u64>() {
                    Ok(f) => entries.push((w.to_string(), f)),
                    Err(_) => malformed += 1,
                },
                (None, _, _) => {}
                _ => malformed += 1,
            }
        }
        let mut dict = SpellDictionary::build(entries, max_edit_distance)?;
        dict.warnings.malformed_lines = malformed;
        Ok(dict)
    }

    pub fn load(path: impl AsRef<Path>, max_edit_distance: usize) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        SpellDictionary::from_reader(std::io::BufReader::new(file), max_edit_distance)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_edit_distance(&self) -> usize {
        self.max_edit_distance
    }

    pub fn warnings(&self) -> &BuildWarnings {
        &self.warnings
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.by_word.get(word).map(|&id| self.freqs[id as usize])
    }

    pub fn contains(&self, word: &str) -> bool {
        self.by_word.contains_key(word)
    }

    /// Iterate `(word, frequency)` in insertion order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.words.iter().map(String::as_str).zip(self.freqs.iter().copied())
    }

    /// Number of distinct delete variants in the index.
    pub fn index_key_count(&self) -> usize {
        let mut n = 0;
        let mut last = None;
        for &(h, _) in &self.index {
            if last != Some(h) {
                n += 1;
                last = Some(h);
            }
        }
        n
    }

    /// Dictionary words indexed under `variant`.
    pub fn words_for_variant(&self, variant: &str) -> Vec<&str> {
        let chars: Vec<char> = variant.chars().collect();
        let h = hash_chars(chars.iter().copied());
        let mut out: Vec<&str> = self
            .posting(h)
            .iter()
            .map(|&(_, id)| self.words[id as usize].as_str())
            .filter(|w| is_subsequence_by_deletions(&chars, w, self.max_edit_distance))
            .collect();
        out.sort_unstable();
        out
    }

    fn posting(&self, h: u64) -> &[(u64, u32)] {
        let lo = self.index.partition_point(|&(k, _)| k < h);
        let hi = self.index.partition_point(|&(k, _)| k <= h);
        &self.index[lo..hi]
    }

    /// Nearest dictionary word to `input` (exact-case lookup, no case policy).
    ///
    /// Ranking: smallest OSA distance, then highest frequency, then
    /// lexicographically smallest word. `None` when nothing is within the
    /// maximum edit distance.
    pub fn lookup(&self, input: &str) -> Option<Suggestion> {
        let n = self.max_edit_distance;
        let q: Vec<char> = input.chars().collect();
        let mut hashes = Vec::new();
        variant_hashes(&q, n, &mut hashes);
        hashes.sort_unstable();
        hashes.dedup();

        let mut candidates: Vec<u32> = hashes
            .iter()
            .flat_map(|&h| self.posting(h).iter().map(|&(_, id)| id))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();

        let mut best: Option<(usize, u32)> = None;
        for id in candidates {
            let w = &self.chars[id as usize];
            if w.len().abs_diff(q.len()) > n {
                continue;
            }
            let Some(d) = osa_chars_bounded(&q, w, n) else {
                continue;
            };
            let better = match best {
                None => true,
                Some((bd, bid)) => self.ranks_before(d, id, bd, bid),
            };
            if better {
                best = Some((d, id));
            }
        }
        best.map(|(d, id)| Suggestion {
            word: self.words[id as usize].clone(),
            distance: d,
            frequency: self.freqs[id as usize],
        })
    }

    fn ranks_before(&self, d: usize, id: u32, bd: usize, bid: u32) -> bool {
        let (f, bf) = (self.freqs[id as usize], self.freqs[bid as usize]);
        (d, std::cmp::Reverse(f), &self.words[id as usize])
            < (bd, std::cmp::Reverse(bf), &self.words[bid as usize])
    }

    /// Spelling correction with the case policy: lookup runs on the lowercased
    /// input and an initial capital on the input is restored on the result.
    pub fn correct(&self, input: &str) -> Option<Suggestion> {
        let lower = input.to_lowercase();
        let mut s = self.lookup(&lower)?;
        if starts_uppercase(input) {
            s.word = upper_first(&s.word);
        }
        Some(s)
    }
}

/// All distinct strings reachable from `word` by at most `max` deletions,
/// including `word` itself.
pub fn delete_variants(word: &str, max: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    out.insert(word.to_string());
    let mut frontier = vec![word.to_string()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            let chars: Vec<char> = w.chars().collect();
            for i in 0..chars.len() {
                let v: String = chars[..i].iter().chain(&chars[i + 1..]).collect();
                if out.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    out
}

fn hash_chars(chars: impl Iterator<Item = char>) -> u64 {
    // FNV-1a over code points.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in chars {
        h ^= c as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Push the hash of every ≤`max`-deletion variant of `w` (with repeats).
fn variant_hashes(w: &[char], max: usize, out: &mut Vec<u64>) {
    let mut skip = Vec::with_capacity(max);
    recurse(w, max, 0, &mut skip, out);

    fn recurse(w: &[char], max: usize, from: usize, skip: &mut Vec<usize>, out: &mut Vec<u64>) {
        out.push(hash_chars(
            w.iter()
                .enumerate()
                .filter(|(i, _)| !skip.contains(i))
                .map(|(_, &c)| c),
        ));
        if skip.len() == max {
            return;
        }
        for i in from..w.len() {
            skip.push(i);
            recurse(w, max, i + 1, skip, out);
            skip.pop();
        }
    }
}

/// Guards hash collisions in [`SpellDictionary::words_for_variant`].
fn is_subsequence_by_deletions(variant: &[char], word: &str, max: usize) -> bool {
    let w: Vec<char> = word.chars().collect();
    if w.len() < variant.len() || w.len() - variant.len() > max {
        return false;
    }
    let mut it = w.iter();
    variant.iter().all(|c| it.any(|x| x == c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SpellDictionary {
        SpellDictionary::build(
            [
                ("believe", 500u64),
                ("relieve", 100),
                ("receive", 300),
                ("cat", 50),
                ("bat", 50),
                ("hat", 80),
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn delete_variants_enumerates() {
        let v: Vec<String> = delete_variants("ab", 1).into_iter().collect();
        assert_eq!(v, ["a", "ab", "b"]);
        let v: Vec<String> = delete_variants("abc", 2).into_iter().collect();
        assert_eq!(v, ["a", "ab", "abc", "ac", "b", "bc", "c"]);
    }

    #[test]
    fn index_keys_match_enumeration() {
        let d = SpellDictionary::build([("ab", 5u64)], 1).unwrap();
        assert_eq!(d.index_key_count(), 3);
        for k in ["ab", "a", "b"] {
            assert_eq!(d.words_for_variant(k), ["ab"]);
        }
        assert!(d.words_for_variant("c").is_empty());

        let d = SpellDictionary::build([("abc", 1u64)], 2).unwrap();
        assert_eq!(d.index_key_count(), 7);
        for k in delete_variants("abc", 2) {
            assert_eq!(d.words_for_variant(&k), ["abc"], "{k}");
        }
    }

    #[test]
    fn build_counts_warnings() {
        let d = SpellDictionary::build([("a", 1u64), ("a", 7), ("b", 0), ("", 3)], 2).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.frequency("a"), Some(7));
        assert_eq!(d.warnings().duplicates, 1);
        assert_eq!(d.warnings().rejected, 2);
        assert!(SpellDictionary::build([("a", 1u64)], 0).is_err());
    }

    #[test]
    fn loader_skips_malformed_lines() {
        let text = "the 10\nbroken\nof x\n\nand 5 extra\nan 3\n";
        let d = SpellDictionary::from_reader(text.as_bytes(), 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.warnings().malformed_lines, 3);
    }

    #[test]
    fn lookup_ranks_distance_frequency_then_lexicographic() {
        let d = small();
        let s = d.lookup("believe").unwrap();
        assert_eq!((s.word.as_str(), s.distance, s.frequency), ("believe", 0, 500));
        assert_eq!(d.lookup("beleive").unwrap().word, "believe");
        // "xat": cat, bat and hat at distance 1; hat has the highest frequency.
        assert_eq!(d.lookup("xat").unwrap().word, "hat");
        let d2 = SpellDictionary::build([("cat", 5u64), ("bat", 5)], 2).unwrap();
        assert_eq!(d2.lookup("xat").unwrap().word, "bat");
        assert_eq!(d.lookup("qqqqqqqq"), None);
    }

    #[test]
    fn correct_applies_case_policy() {
        let d = small();
        assert_eq!(d.correct("Beleive").unwrap().word, "Believe");
        assert_eq!(d.correct("BELEIVE").unwrap().word, "Believe");
        assert_eq!(d.correct("beleive").unwrap().word, "believe");
    }

    #[test]
    fn short_inputs_reach_short_words() {
        let d = SpellDictionary::build([("a", 10u64), ("abc", 1)], 2).unwrap();
        assert_eq!(d.lookup("x").unwrap().word, "a");
        assert_eq!(d.lookup("c").unwrap().word, "a");
        assert_eq!(d.lookup("bc").unwrap().word, "abc");
    }
}
