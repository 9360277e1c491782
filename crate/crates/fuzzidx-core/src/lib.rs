//! Fuzzy keyword search over an encrypted index.
//!
//! The owner turns plaintext documents into a secure index: every distinct
//! word becomes a keyed-hash trapdoor mapped (through a B-tree) to a posting
//! list, and file identifiers are stored only encrypted. A user expands a
//! query word into its dictionary-based fuzzy set — all dictionary words
//! within a bounded edit distance — and sends one trapdoor per member; the
//! server matches trapdoors and returns encrypted identifiers it cannot read.
//!
//! Modules follow the pipeline:
//!
//! * [`textprep`] — extraction, tokenization, stop-word filtering
//! * [`editdist`] — Levenshtein distance and the banded bounded check
//! * [`fuzzyset`] — dictionary-based and wildcard-based expansion, plus the
//!   set-size comparison between the two
//! * [`btree`] — the order-m B-tree backing the index
//! * [`secureindex`] — trapdoors, FID encryption, posting lists, the index
//! * [`protocol`] — the owner/user/server flow, index persistence, and the
//!   line-oriented wire protocol

pub mod btree;
pub mod editdist;
mod error;
pub mod fuzzyset;
pub mod protocol;
pub mod secureindex;
pub mod textprep;

pub use btree::{BTree, BTreeNode, NodeId, Violation};
pub use editdist::{edit_distance, within_distance};
pub use error::{Error, Result};
pub use fuzzyset::{
    avg_set_sizes, dfs_expand, wfs_expand, DictFuzzySet, Dictionary, SetSizeRow, WildcardFuzzySet,
};
pub use protocol::{
    deserialize_index, owner_publish, serialize_index, server_answer, user_decrypt, user_query,
    QueryHit, QueryRequest, QueryResult, TrapdoorQuery,
};
pub use secureindex::{
    build_index, build_postings, decrypt_fid, derive_key, encrypt_fid, intersect, positions_of,
    trapdoor, Credentials, PostingEntry, PostingList, PostingMap, SecretKey, SecureIndex,
    Trapdoor, DEFAULT_ORDER,
};
pub use textprep::{
    default_stop_words, extract_text, filter_stopwords, parse_word_lines, read_word_file,
    tokenize, Document, FormatExtractor, TextPrepConfig, Token,
};
