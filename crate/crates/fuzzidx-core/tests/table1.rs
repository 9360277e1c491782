//! Golden test for the three-document example corpus: the inverted and
//! fully-inverted rows must come out exactly, both from the plaintext-side
//! posting map and through trapdoor lookups on the secure index.
//!
//! Stop words are disabled and case preserved, because the reference rows
//! index "is", "a", "the" with their original casing. The source table omits
//! the word "of" (D2 position 7); the pipeline indexes it, so the derived row
//! `of → {2}, {(2,7)}` is asserted too.

use std::collections::BTreeSet;

use fuzzidx_core::{
    build_index, build_postings, intersect, positions_of, trapdoor, Credentials, Document,
    TextPrepConfig,
};

fn docs() -> Vec<Document> {
    vec![
        Document::new("D0.txt", 0, "Everyone likes Aishwarya_Rai"),
        Document::new("D1.txt", 1, "Aishwarya_Rai is a Bollywood actress"),
        Document::new(
            "D2.txt",
            2,
            "There is no one with the likes of Aishwarya_Rai",
        ),
    ]
}

fn cfg() -> TextPrepConfig {
    TextPrepConfig::without_stop_words(false)
}

/// One reference row: word, documents, flattened (doc, position) pairs.
type Row = (&'static str, &'static [u32], &'static [(u32, u32)]);

const ROWS: &[Row] = &[
    ("Everyone", &[0], &[(0, 0)]),
    ("likes", &[0, 2], &[(0, 1), (2, 6)]),
    ("Aishwarya_Rai", &[0, 1, 2], &[(0, 2), (1, 0), (2, 8)]),
    ("is", &[1, 2], &[(1, 1), (2, 1)]),
    ("a", &[1], &[(1, 2)]),
    ("Bollywood", &[1], &[(1, 3)]),
    ("actress", &[1], &[(1, 4)]),
    ("There", &[2], &[(2, 0)]),
    ("no", &[2], &[(2, 2)]),
    ("one", &[2], &[(2, 3)]),
    ("with", &[2], &[(2, 4)]),
    ("the", &[2], &[(2, 5)]),
    // derived: omitted by the source table but present in D2
    ("of", &[2], &[(2, 7)]),
];

#[test]
fn every_inverted_and_fully_inverted_row_matches() {
    let postings = build_postings(&docs(), &cfg()).unwrap();
    assert_eq!(postings.len(), ROWS.len(), "exactly the 13 expected words");
    for &(word, doc_set, position_pairs) in ROWS {
        let list = postings
            .get(word)
            .unwrap_or_else(|| panic!("missing row for {word:?}"));
        let ordinals: Vec<u32> = list.ordinals().collect();
        assert_eq!(ordinals, doc_set, "inverted row for {word:?}");
        assert_eq!(
            positions_of(&postings, word).unwrap(),
            position_pairs,
            "fully inverted row for {word:?}"
        );
    }
}

#[test]
fn secure_index_serves_the_same_rows_through_trapdoors() {
    let sk = Credentials::new("owner", "secret").derive_key().unwrap();
    let index = build_index(&docs(), &cfg(), &sk, 4).unwrap();
    assert_eq!(index.doc_count(), 3);
    assert_eq!(index.keyword_count(), ROWS.len());
    for &(word, doc_set, position_pairs) in ROWS {
        let postings = index
            .lookup(&trapdoor(&sk, word).unwrap())
            .unwrap_or_else(|| panic!("no hit for {word:?}"));
        let ordinals: Vec<u32> = postings.ordinals().collect();
        assert_eq!(ordinals, doc_set, "doc set for {word:?}");
        assert_eq!(postings.positions(), position_pairs, "positions for {word:?}");
    }
    // a word the corpus never mentions
    assert!(index.lookup(&trapdoor(&sk, "cinema").unwrap()).is_none());
}

#[test]
fn multi_keyword_join_matches_worked_example() {
    // {0,2} ∩ {0,1,2} = {0,2}
    let postings = build_postings(&docs(), &cfg()).unwrap();
    let joined = intersect(&[&postings["likes"], &postings["Aishwarya_Rai"]]);
    let ordinals: Vec<u32> = joined.ordinals().collect();
    assert_eq!(ordinals, vec![0, 2]);
}

#[test]
fn default_stop_list_would_drop_function_words_but_keep_positions() {
    // The same corpus with the default stop list: "is", "a", "the", "of"
    // vanish, but surviving positions are untouched.
    let cfg = TextPrepConfig {
        fold_case: false,
        ..TextPrepConfig::default()
    };
    let postings = build_postings(&docs(), &cfg).unwrap();
    let words: BTreeSet<&str> = postings.keys().map(String::as_str).collect();
    for gone in ["is", "a", "the", "of"] {
        assert!(!words.contains(gone), "{gone:?} should be filtered");
    }
    assert_eq!(
        positions_of(&postings, "Aishwarya_Rai").unwrap(),
        vec![(0, 2), (1, 0), (2, 8)],
        "positions survive stop-word removal unchanged"
    );
}
