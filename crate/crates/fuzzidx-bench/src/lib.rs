//! Deterministic data generators shared by the criterion benchmarks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fuzzidx_core::{Dictionary, Document};

/// `n` distinct lowercase words, lengths 3..=12, reproducible for a seed.
pub fn words(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = std::collections::BTreeSet::new();
    while out.len() < n {
        let len = rng.gen_range(3..=12);
        let word: String = (0..len)
            .map(|_| (b'a' + rng.gen_range(0..26)) as char)
            .collect();
        out.insert(word);
    }
    out.into_iter().collect()
}

pub fn dictionary(n: usize, seed: u64) -> Dictionary {
    Dictionary::load(words(n, seed), &Default::default(), false).expect("nonempty dictionary")
}

/// A corpus of `docs` documents drawn from a `vocabulary`-word list.
pub fn corpus(docs: usize, vocabulary: usize, seed: u64) -> Vec<Document> {
    let vocab = words(vocabulary, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0FFEE);
    (0..docs)
        .map(|i| {
            let len = rng.gen_range(20..=200);
            let text = (0..len)
                .map(|_| vocab.choose(&mut rng).unwrap().as_str())
                .collect::<Vec<_>>()
                .join(" ");
            Document::new(format!("doc-{i:04}.txt"), i, text)
        })
        .collect()
}

/// `n` distinct random byte keys with a payload, sorted, for B-tree loads.
pub fn sorted_entries(n: usize, seed: u64) -> Vec<(Vec<u8>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys = std::collections::BTreeSet::new();
    while keys.len() < n {
        keys.insert(rng.gen::<u64>());
    }
    keys.into_iter()
        .map(|k| (k.to_be_bytes().to_vec(), k))
        .collect()
}
