//! Fuzzy keyword set construction.
//!
//! Two expansion strategies for a query word `w` at edit distance `d`:
//!
//! * dictionary-based ([`dfs_expand`]): the dictionary words within distance
//!   `d` of `w`, found by scanning only the length buckets `len(w) ± d`
//!   (lossless, because distance is bounded below by the length gap);
//! * wildcard-based ([`wfs_expand`]): every pattern obtained from `w` by
//!   wildcard substitutions and insertions, kept here as a size baseline for
//!   comparing the two strategies.
//!
//! [`avg_set_sizes`] computes the per-length mean set sizes that comparison
//! reports.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::RangeInclusive;
use std::path::Path;

use crate::editdist::within_distance;
use crate::textprep::read_word_file;
use crate::{Error, Result};

/// The wildcard symbol in WFS patterns.
pub const WILDCARD: char = '*';

/// An ordered set of distinct normalized keywords with stop words removed,
/// bucketed by character length for expansion scans.
#[derive(Debug, Clone)]
pub struct Dictionary {
    words: Vec<String>,
    by_length: BTreeMap<usize, Vec<u32>>,
}

impl Dictionary {
    /// Normalize a word list into a dictionary: fold case when requested,
    /// drop stop words and duplicates, and build the length buckets.
    ///
    /// Stop words are folded under the same rule before matching.
    pub fn load<I, S>(words: I, stop_words: &HashSet<String>, fold_case: bool) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let stop: HashSet<String> = if fold_case {
            stop_words.iter().map(|w| w.to_lowercase()).collect()
        } else {
            stop_words.clone()
        };
        let mut set = BTreeSet::new();
        for word in words {
            let word = word.as_ref();
            let normalized = if fold_case {
                word.to_lowercase()
            } else {
                word.to_string()
            };
            if normalized.is_empty() || stop.contains(&normalized) {
                continue;
            }
            set.insert(normalized);
        }
        if set.is_empty() {
            return Err(Error::EmptyDictionary);
        }

        let words: Vec<String> = set.into_iter().collect();
        let mut by_length: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (i, word) in words.iter().enumerate() {
            by_length
                .entry(word.chars().count())
                .or_default()
                .push(i as u32);
        }
        Ok(Self { words, by_length })
    }

    /// Load from a word-list file (one word per line, `#` comments).
    pub fn from_file(path: &Path, stop_words: &HashSet<String>, fold_case: bool) -> Result<Self> {
        Self::load(read_word_file(path)?, stop_words, fold_case)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// All words, sorted ascending by byte sequence.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).is_ok()
    }

    /// Words of exactly `length` characters, in sorted order.
    pub fn words_of_length(&self, length: usize) -> impl Iterator<Item = &str> {
        self.by_length
            .get(&length)
            .into_iter()
            .flatten()
            .map(|&i| self.words[i as usize].as_str())
    }
}

/// Dictionary words within edit distance `distance` of `query`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictFuzzySet {
    pub query: String,
    pub distance: usize,
    pub members: BTreeSet<String>,
}

impl DictFuzzySet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.members.contains(word)
    }
}

/// Expand `query` against the dictionary: every word `e` with
/// `ED(query, e) <= distance`.
///
/// Scans only the length buckets within `distance` of the query length; the
/// pruning is lossless because the distance between words of lengths `p` and
/// `q` is at least `|p - q|`.
pub fn dfs_expand(dict: &Dictionary, query: &str, distance: usize) -> DictFuzzySet {
    let qlen = query.chars().count();
    let mut members = BTreeSet::new();
    for length in qlen.saturating_sub(distance)..=qlen + distance {
        for word in dict.words_of_length(length) {
            if within_distance(query, word, distance) {
                members.insert(word.to_string());
            }
        }
    }
    DictFuzzySet {
        query: query.to_string(),
        distance,
        members,
    }
}

/// Wildcard patterns for `query` at edit distance `distance`, each pattern
/// mapped to its wildcard count τ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WildcardFuzzySet {
    pub query: String,
    pub distance: usize,
    patterns: BTreeMap<String, usize>,
}

impl WildcardFuzzySet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, pattern: &str) -> bool {
        self.patterns.contains_key(pattern)
    }

    /// Patterns in sorted order.
    pub fn patterns(&self) -> impl Iterator<Item = &str> {
        self.patterns.keys().map(String::as_str)
    }

    /// Wildcard count τ of a member pattern.
    pub fn tau(&self, pattern: &str) -> Option<usize> {
        self.patterns.get(pattern).copied()
    }
}

/// Build the wildcard-based fuzzy set of `query`.
///
/// One wildcard step produces, for a pattern of length ℓ, the pattern itself,
/// the ℓ substitution patterns (one character replaced by `*`), and the ℓ+1
/// insertion patterns (`*` inserted in each gap). The step is applied
/// `distance` times cumulatively and the results deduplicated, so every
/// pattern carries at most `distance` wildcards and `query` itself (τ = 0) is
/// always a member. Deletions need no pattern of their own: a substitution
/// pattern of the shorter word covers them.
pub fn wfs_expand(query: &str, distance: usize) -> Result<WildcardFuzzySet> {
    if query.contains(WILDCARD) {
        return Err(Error::InvalidInput(format!(
            "query {query:?} must not contain the wildcard character '{WILDCARD}'"
        )));
    }

    let mut set: BTreeSet<String> = BTreeSet::new();
    set.insert(query.to_string());
    for _ in 0..distance {
        let mut next = set.clone();
        for pattern in &set {
            let chars: Vec<char> = pattern.chars().collect();
            for i in 0..chars.len() {
                if chars[i] == WILDCARD {
                    continue;
                }
                let mut sub = chars.clone();
                sub[i] = WILDCARD;
                next.insert(sub.into_iter().collect());
            }
            for gap in 0..=chars.len() {
                let mut ins = chars.clone();
                ins.insert(gap, WILDCARD);
                next.insert(ins.into_iter().collect());
            }
        }
        set = next;
    }

    let patterns = set
        .into_iter()
        .map(|p| {
            let tau = p.chars().filter(|&c| c == WILDCARD).count();
            (p, tau)
        })
        .collect();
    Ok(WildcardFuzzySet {
        query: query.to_string(),
        distance,
        patterns,
    })
}

/// One row of the WFS/DFS size comparison: mean set sizes over up to
/// `sample_n` dictionary words of one length.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSizeRow {
    pub length: usize,
    pub wfs_avg: f64,
    pub dfs_avg: f64,
    pub sample_n: usize,
}

/// Mean fuzzy-set sizes per keyword length, for both strategies.
///
/// For each length in `lengths` with at least one dictionary word, takes the
/// first `sample` words of that length in sorted order (deterministic, so
/// benchmark output is reproducible bit for bit) and averages `|WFS|` and
/// `|DFS|` over them. Lengths with no words are skipped.
pub fn avg_set_sizes(
    dict: &Dictionary,
    lengths: RangeInclusive<usize>,
    distance: usize,
    sample: usize,
) -> Result<Vec<SetSizeRow>> {
    if sample == 0 {
        return Err(Error::InvalidInput("sample must be positive".to_string()));
    }
    let mut rows = Vec::new();
    for length in lengths {
        let words: Vec<&str> = dict.words_of_length(length).take(sample).collect();
        if words.is_empty() {
            continue;
        }
        let mut wfs_total = 0usize;
        let mut dfs_total = 0usize;
        for word in &words {
            wfs_total += wfs_expand(word, distance)?.len();
            dfs_total += dfs_expand(dict, word, distance).len();
        }
        rows.push(SetSizeRow {
            length,
            wfs_avg: wfs_total as f64 / words.len() as f64,
            dfs_avg: dfs_total as f64 / words.len() as f64,
            sample_n: words.len(),
        });
    }
    Ok(rows)
}
