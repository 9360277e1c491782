//! Trapdoor generation, file-identifier encryption, and the secure index.
//!
//! The server-side index maps keyed-hash trapdoors to posting lists and doc
//! ordinals to encrypted file identifiers; no plaintext keyword or FID ever
//! enters the structure. Keyword matching therefore works without revealing
//! what was indexed or asked for.
//!
//! # On MD5
//!
//! The keyed hash and the keystream are both instantiated from MD5 with
//! domain-separation bytes (`0x00` trapdoor, `0x01` keystream, `0x3A`
//! credential join). MD5 is cryptographically broken; it is kept for fidelity
//! with the system being reproduced, not for security. [`digest16`] is the
//! single seam to swap in any other 16-byte digest.

use std::collections::BTreeMap;

use md5::{Digest, Md5};

use crate::btree::BTree;
use crate::textprep::{filter_stopwords, tokenize, Document, TextPrepConfig};
use crate::{Error, Result};

/// Default B-tree order for the index.
pub const DEFAULT_ORDER: usize = 64;

const TRAPDOOR_DOMAIN: u8 = 0x00;
const KEYSTREAM_DOMAIN: u8 = 0x01;
const CREDENTIAL_SEP: u8 = 0x3A; // ':'

/// The 16-byte digest every construction here is built on. Swapping the
/// primitive means changing only this function.
pub fn digest16(parts: &[&[u8]]) -> [u8; 16] {
    let mut hasher = Md5::new();
    for part in parts {
        hasher.update(part);
    }
    hasher.finalize().into()
}

/// 16 bytes of key material derived from credentials. Never serialized into
/// the index file.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey([u8; 16]);

impl std::fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SecretKey(..)")
    }
}

/// The shared username/password pair the key is derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Credentials {
    pub username: String,
    pub password: String,
}

impl Credentials {
    pub fn new(username: impl Into<String>, password: impl Into<String>) -> Self {
        Self {
            username: username.into(),
            password: password.into(),
        }
    }

    pub fn derive_key(&self) -> Result<SecretKey> {
        derive_key(&self.username, &self.password)
    }
}

/// Derive the secret key from credentials: `H(username || ':' || password)`.
pub fn derive_key(username: &str, password: &str) -> Result<SecretKey> {
    if username.is_empty() {
        return Err(Error::InvalidCredentials("empty username".to_string()));
    }
    if password.is_empty() {
        return Err(Error::InvalidCredentials("empty password".to_string()));
    }
    Ok(SecretKey(digest16(&[
        username.as_bytes(),
        &[CREDENTIAL_SEP],
        password.as_bytes(),
    ])))
}

/// Keyed-hash digest of a keyword; the only form a keyword takes server-side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trapdoor([u8; 16]);

impl Trapdoor {
    pub fn from_digest(digest: [u8; 16]) -> Self {
        Self(digest)
    }

    pub fn digest(&self) -> &[u8; 16] {
        &self.0
    }

    /// Canonical lowercase 32-character hex encoding.
    pub fn hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s)
            .map_err(|_| Error::InvalidInput(format!("invalid trapdoor hex {s:?}")))?;
        let digest: [u8; 16] = bytes
            .try_into()
            .map_err(|_| Error::InvalidInput("trapdoor must be 16 bytes".to_string()))?;
        Ok(Self(digest))
    }
}

impl std::fmt::Debug for Trapdoor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Trapdoor({})", self.hex())
    }
}

/// Trapdoor of a keyword under a secret key: `H(sk || 0x00 || word)`.
pub fn trapdoor(sk: &SecretKey, word: &str) -> Result<Trapdoor> {
    if word.is_empty() {
        return Err(Error::InvalidInput("empty trapdoor word".to_string()));
    }
    Ok(Trapdoor(digest16(&[
        &sk.0,
        &[TRAPDOOR_DOMAIN],
        word.as_bytes(),
    ])))
}

fn keystream_block(sk: &SecretKey, block: u32) -> [u8; 16] {
    digest16(&[&sk.0, &[KEYSTREAM_DOMAIN], &block.to_be_bytes()])
}

/// Encrypt a file identifier: a 4-byte big-endian length prefix followed by
/// the identifier XORed with the keyed keystream.
pub fn encrypt_fid(sk: &SecretKey, fid: &str) -> Result<Vec<u8>> {
    if fid.is_empty() {
        return Err(Error::InvalidInput("empty fid".to_string()));
    }
    let plaintext = fid.as_bytes();
    let mut out = Vec::with_capacity(4 + plaintext.len());
    out.extend_from_slice(&(plaintext.len() as u32).to_be_bytes());
    for (i, byte) in plaintext.iter().enumerate() {
        let block = keystream_block(sk, (i / 16) as u32);
        out.push(byte ^ block[i % 16]);
    }
    Ok(out)
}

/// Invert [`encrypt_fid`]. Fails on a length prefix that disagrees with the
/// payload or on a decryption that is not valid UTF-8 (the symptom of a
/// wrong key).
pub fn decrypt_fid(sk: &SecretKey, bytes: &[u8]) -> Result<String> {
    if bytes.len() < 4 {
        return Err(Error::MalformedCiphertext(
            "shorter than the length prefix".to_string(),
        ));
    }
    let declared = u32::from_be_bytes(bytes[..4].try_into().expect("4 bytes")) as usize;
    let payload = &bytes[4..];
    if payload.len() != declared {
        return Err(Error::MalformedCiphertext(format!(
            "length prefix says {declared} bytes, payload has {}",
            payload.len()
        )));
    }
    let mut plaintext = Vec::with_capacity(payload.len());
    for (i, byte) in payload.iter().enumerate() {
        let block = keystream_block(sk, (i / 16) as u32);
        plaintext.push(byte ^ block[i % 16]);
    }
    String::from_utf8(plaintext)
        .map_err(|_| Error::DecryptionFailed("plaintext is not valid UTF-8".to_string()))
}

/// One document's occurrences of a word: ordinal plus ascending positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostingEntry {
    pub ordinal: u32,
    pub positions: Vec<u32>,
}

/// Per-keyword postings: ascending document ordinals, each with the ascending
/// word positions inside that document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PostingList {
    entries: Vec<PostingEntry>,
}

impl PostingList {
    /// Build from entries that are already strictly ascending by ordinal,
    /// with nonempty strictly ascending position lists.
    pub fn from_sorted_entries(entries: Vec<PostingEntry>) -> Result<Self> {
        for entry in &entries {
            if entry.positions.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "posting for ordinal {} has no positions",
                    entry.ordinal
                )));
            }
            if entry.positions.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::InvalidInput(format!(
                    "positions for ordinal {} not strictly ascending",
                    entry.ordinal
                )));
            }
        }
        if entries.windows(2).any(|e| e[0].ordinal >= e[1].ordinal) {
            return Err(Error::InvalidInput(
                "posting ordinals not strictly ascending".to_string(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[PostingEntry] {
        &self.entries
    }

    pub fn doc_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ascending document ordinals.
    pub fn ordinals(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|e| e.ordinal)
    }

    /// Flattened `(ordinal, position)` pairs, ascending.
    pub fn positions(&self) -> Vec<(u32, u32)> {
        self.entries
            .iter()
            .flat_map(|e| e.positions.iter().map(|&p| (e.ordinal, p)))
            .collect()
    }
}

/// Documents present in every input list, with the per-document positions of
/// all inputs merged. At least one list is expected; an empty slice yields an
/// empty list.
pub fn intersect(lists: &[&PostingList]) -> PostingList {
    let Some((first, rest)) = lists.split_first() else {
        return PostingList::default();
    };
    let mut entries: Vec<PostingEntry> = first.entries.clone();
    for list in rest {
        entries = entries
            .into_iter()
            .filter_map(|mut entry| {
                let other = list
                    .entries
                    .iter()
                    .find(|e| e.ordinal == entry.ordinal)?;
                entry.positions.extend_from_slice(&other.positions);
                Some(entry)
            })
            .collect();
    }
    for entry in &mut entries {
        entry.positions.sort_unstable();
        entry.positions.dedup();
    }
    PostingList { entries }
}

/// Owner-side plaintext view: word → posting list. Never leaves the owner;
/// the secure index stores only trapdoors.
pub type PostingMap = BTreeMap<String, PostingList>;

/// Flattened `(ordinal, position)` occurrences of `word`, or `None` if the
/// word was not indexed.
pub fn positions_of(postings: &PostingMap, word: &str) -> Option<Vec<(u32, u32)>> {
    postings.get(word).map(PostingList::positions)
}

fn check_corpus(docs: &[Document]) -> Result<()> {
    let mut fids = std::collections::HashSet::new();
    for (i, doc) in docs.iter().enumerate() {
        if doc.fid.is_empty() {
            return Err(Error::Corpus(format!("document {i} has an empty fid")));
        }
        if !fids.insert(doc.fid.as_str()) {
            return Err(Error::Corpus(format!("duplicate fid {:?}", doc.fid)));
        }
        if doc.ordinal != i {
            return Err(Error::Corpus(format!(
                "document {:?} has ordinal {}, expected {} (ordinals must be dense, in order)",
                doc.fid, doc.ordinal, i
            )));
        }
    }
    Ok(())
}

/// Tokenize and filter every document and assemble the plaintext posting map.
pub fn build_postings(docs: &[Document], cfg: &TextPrepConfig) -> Result<PostingMap> {
    check_corpus(docs)?;
    let mut map: BTreeMap<String, Vec<PostingEntry>> = BTreeMap::new();
    for doc in docs {
        let tokens = filter_stopwords(tokenize(&doc.text, cfg), cfg);
        for token in tokens {
            let entries = map.entry(token.word).or_default();
            match entries.last_mut() {
                Some(last) if last.ordinal == doc.ordinal as u32 => {
                    last.positions.push(token.position as u32);
                }
                _ => entries.push(PostingEntry {
                    ordinal: doc.ordinal as u32,
                    positions: vec![token.position as u32],
                }),
            }
        }
    }
    map.into_iter()
        .map(|(word, entries)| Ok((word, PostingList::from_sorted_entries(entries)?)))
        .collect()
}

/// The server-side index: a B-tree from trapdoor digests to posting lists,
/// plus the ordinal → encrypted-FID table.
pub struct SecureIndex {
    tree: BTree<PostingList>,
    doc_table: Vec<Vec<u8>>,
}

impl SecureIndex {
    /// Number of indexed documents.
    pub fn doc_count(&self) -> usize {
        self.doc_table.len()
    }

    /// Number of distinct indexed keywords.
    pub fn keyword_count(&self) -> usize {
        self.tree.len()
    }

    pub fn order(&self) -> usize {
        self.tree.order()
    }

    /// Posting list of the keyword whose trapdoor is `t`, if indexed.
    pub fn lookup(&self, t: &Trapdoor) -> Option<&PostingList> {
        self.tree.get(t.digest())
    }

    /// Encrypted FID of a document ordinal.
    pub fn encrypted_fid(&self, ordinal: u32) -> Option<&[u8]> {
        self.doc_table.get(ordinal as usize).map(Vec::as_slice)
    }

    pub fn doc_table(&self) -> &[Vec<u8>] {
        &self.doc_table
    }

    /// Entries sorted by trapdoor digest.
    pub fn entries(&self) -> Vec<(Trapdoor, &PostingList)> {
        self.tree
            .traverse()
            .into_iter()
            .map(|(key, list)| {
                let digest: [u8; 16] = key.try_into().expect("16-byte tree keys");
                (Trapdoor::from_digest(digest), list)
            })
            .collect()
    }

    /// Reassemble an index from its persisted parts: entries must be sorted
    /// strictly ascending by trapdoor digest, and every referenced ordinal
    /// must fall inside the doc table.
    pub fn from_parts(
        order: usize,
        doc_table: Vec<Vec<u8>>,
        entries: Vec<(Trapdoor, PostingList)>,
    ) -> Result<Self> {
        let doc_count = doc_table.len() as u32;
        for (trapdoor, list) in &entries {
            if let Some(bad) = list.ordinals().find(|&o| o >= doc_count) {
                return Err(Error::Format(format!(
                    "entry {} references ordinal {bad} outside the doc table",
                    trapdoor.hex()
                )));
            }
        }
        let tree = BTree::bulk_load(
            order,
            entries
                .into_iter()
                .map(|(t, list)| (t.digest().to_vec(), list))
                .collect(),
        )?;
        Ok(Self { tree, doc_table })
    }
}

impl std::fmt::Debug for SecureIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SecureIndex")
            .field("doc_count", &self.doc_count())
            .field("keyword_count", &self.keyword_count())
            .field("order", &self.order())
            .finish()
    }
}

/// The owner pipeline: tokenize, filter, build postings, key them by
/// trapdoor, and encrypt the FID table.
pub fn build_index(
    docs: &[Document],
    cfg: &TextPrepConfig,
    sk: &SecretKey,
    order: usize,
) -> Result<SecureIndex> {
    let postings = build_postings(docs, cfg)?;
    let mut entries: Vec<(Trapdoor, PostingList)> = postings
        .into_iter()
        .map(|(word, list)| Ok((trapdoor(sk, &word)?, list)))
        .collect::<Result<_>>()?;
    entries.sort_by(|a, b| a.0.digest().cmp(b.0.digest()));
    let doc_table = docs
        .iter()
        .map(|doc| encrypt_fid(sk, &doc.fid))
        .collect::<Result<Vec<_>>>()?;
    SecureIndex::from_parts(order, doc_table, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table1_docs() -> Vec<Document> {
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

    fn raw_cfg() -> TextPrepConfig {
        TextPrepConfig::without_stop_words(false)
    }

    fn sk() -> SecretKey {
        derive_key("alice", "pw").unwrap()
    }

    fn list(entries: &[(u32, &[u32])]) -> PostingList {
        PostingList::from_sorted_entries(
            entries
                .iter()
                .map(|&(ordinal, positions)| PostingEntry {
                    ordinal,
                    positions: positions.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    // Key/trapdoor/ciphertext vectors below were produced with an
    // independent MD5 implementation (Python hashlib).

    #[test]
    fn derive_key_matches_reference_md5() {
        let key = derive_key("a", "b").unwrap();
        assert_eq!(hex::encode(key.0), "d8160c9b3dc20d4e931aeb4f45262155");
        let key = derive_key("alice", "pw").unwrap();
        assert_eq!(hex::encode(key.0), "430a6a24c1999a7a0355012f4ae93f1a");
    }

    #[test]
    fn derive_key_is_deterministic_and_credential_sensitive() {
        assert_eq!(derive_key("u", "p").unwrap(), derive_key("u", "p").unwrap());
        assert_ne!(
            derive_key("alice", "pw").unwrap(),
            derive_key("alice", "pw2").unwrap()
        );
        // the separator byte keeps ("ab","c") and ("a","bc") apart
        assert_ne!(
            derive_key("ab", "c").unwrap(),
            derive_key("a", "bc").unwrap()
        );
    }

    #[test]
    fn derive_key_rejects_empty_credentials() {
        assert!(matches!(
            derive_key("", "p"),
            Err(Error::InvalidCredentials(_))
        ));
        assert!(matches!(
            derive_key("u", ""),
            Err(Error::InvalidCredentials(_))
        ));
    }

    #[test]
    fn trapdoor_matches_reference_construction() {
        assert_eq!(
            trapdoor(&sk(), "rat").unwrap().hex(),
            "9906967e857e90a72883e173bca5ef98"
        );
        assert_eq!(
            trapdoor(&sk(), "likes").unwrap().hex(),
            "94c0c726aff85cd781274b31a27ce02d"
        );
    }

    #[test]
    fn trapdoor_distinguishes_words_and_keys() {
        let t_rat = trapdoor(&sk(), "rat").unwrap();
        assert_eq!(t_rat, trapdoor(&sk(), "rat").unwrap());
        assert_ne!(t_rat, trapdoor(&sk(), "mat").unwrap());
        let other = derive_key("alice", "pw2").unwrap();
        assert_ne!(t_rat, trapdoor(&other, "rat").unwrap());
    }

    #[test]
    fn trapdoor_rejects_empty_word() {
        assert!(trapdoor(&sk(), "").is_err());
    }

    #[test]
    fn trapdoor_hex_roundtrip() {
        let t = trapdoor(&sk(), "rat").unwrap();
        assert_eq!(Trapdoor::from_hex(&t.hex()).unwrap(), t);
        assert!(Trapdoor::from_hex("zz").is_err());
        assert!(Trapdoor::from_hex("aabb").is_err());
    }

    #[test]
    fn encrypt_fid_matches_reference_keystream() {
        let ct = encrypt_fid(&sk(), "file1.txt").unwrap();
        assert_eq!(hex::encode(&ct), "00000009477edc689c090c8aec");
        // crosses a 16-byte keystream block boundary
        let ct = encrypt_fid(&sk(), "a-much-longer-file-name.txt").unwrap();
        assert_eq!(
            hex::encode(&ct),
            "0000001b403add78ce4f559ef70ea3676611998ac57f22e16a301ffa41b1e0"
        );
    }

    #[test]
    fn ciphertext_hides_the_fid() {
        let ct = encrypt_fid(&sk(), "file1.txt").unwrap();
        let needle = b"file1";
        assert!(!ct.windows(needle.len()).any(|w| w == needle));
    }

    #[test]
    fn encrypt_rejects_empty_fid() {
        assert!(encrypt_fid(&sk(), "").is_err());
    }

    #[test]
    fn decrypt_rejects_malformed_ciphertext() {
        let ct = encrypt_fid(&sk(), "file1.txt").unwrap();
        assert!(matches!(
            decrypt_fid(&sk(), &ct[..ct.len() - 1]),
            Err(Error::MalformedCiphertext(_))
        ));
        assert!(matches!(
            decrypt_fid(&sk(), &ct[..2]),
            Err(Error::MalformedCiphertext(_))
        ));
        let mut wrong_prefix = ct.clone();
        wrong_prefix[3] = wrong_prefix[3].wrapping_add(1);
        assert!(matches!(
            decrypt_fid(&sk(), &wrong_prefix),
            Err(Error::MalformedCiphertext(_))
        ));
    }

    proptest! {
        #[test]
        fn fid_roundtrips(fid in "[ -~]{1,64}") {
            let ct = encrypt_fid(&sk(), &fid).unwrap();
            prop_assert_eq!(decrypt_fid(&sk(), &ct).unwrap(), fid);
        }
    }

    #[test]
    fn long_fid_roundtrips() {
        let fid = "x".repeat(1 << 16);
        let ct = encrypt_fid(&sk(), &fid).unwrap();
        assert_eq!(decrypt_fid(&sk(), &ct).unwrap(), fid);
    }

    #[test]
    fn build_postings_reproduces_table1() {
        let postings = build_postings(&table1_docs(), &raw_cfg()).unwrap();
        assert_eq!(postings.len(), 13);
        assert_eq!(
            positions_of(&postings, "likes").unwrap(),
            vec![(0, 1), (2, 6)]
        );
        assert_eq!(
            positions_of(&postings, "Aishwarya_Rai").unwrap(),
            vec![(0, 2), (1, 0), (2, 8)]
        );
        assert_eq!(positions_of(&postings, "Everyone").unwrap(), vec![(0, 0)]);
        assert_eq!(positions_of(&postings, "of").unwrap(), vec![(2, 7)]);
        assert_eq!(positions_of(&postings, "unknown"), None);
        let likes_docs: Vec<u32> = postings["likes"].ordinals().collect();
        assert_eq!(likes_docs, vec![0, 2]);
    }

    #[test]
    fn build_index_lookup_and_misses() {
        let key = sk();
        let index = build_index(&table1_docs(), &raw_cfg(), &key, 4).unwrap();
        assert_eq!(index.doc_count(), 3);
        assert_eq!(index.keyword_count(), 13);

        let hits: Vec<u32> = index
            .lookup(&trapdoor(&key, "likes").unwrap())
            .expect("indexed word")
            .ordinals()
            .collect();
        assert_eq!(hits, vec![0, 2]);

        assert!(index.lookup(&trapdoor(&key, "zzzz").unwrap()).is_none());
        let wrong = derive_key("alice", "wrong").unwrap();
        assert!(index.lookup(&trapdoor(&wrong, "likes").unwrap()).is_none());
    }

    #[test]
    fn build_index_repeated_word_positions() {
        let docs = vec![Document::new("d", 0, "x x x")];
        let index = build_index(&docs, &raw_cfg(), &sk(), 4).unwrap();
        assert_eq!(index.keyword_count(), 1);
        let postings = index.lookup(&trapdoor(&sk(), "x").unwrap()).unwrap();
        assert_eq!(postings.positions(), vec![(0, 0), (0, 1), (0, 2)]);
    }

    #[test]
    fn build_index_empty_corpus() {
        let index = build_index(&[], &raw_cfg(), &sk(), 4).unwrap();
        assert_eq!(index.doc_count(), 0);
        assert_eq!(index.keyword_count(), 0);
    }

    #[test]
    fn build_index_rejects_duplicate_fid() {
        let docs = vec![
            Document::new("same.txt", 0, "one"),
            Document::new("same.txt", 1, "two"),
        ];
        assert!(matches!(
            build_index(&docs, &raw_cfg(), &sk(), 4),
            Err(Error::Corpus(_))
        ));
    }

    #[test]
    fn build_index_rejects_sparse_ordinals() {
        let docs = vec![Document::new("a.txt", 1, "one")];
        assert!(matches!(
            build_index(&docs, &raw_cfg(), &sk(), 4),
            Err(Error::Corpus(_))
        ));
    }

    #[test]
    fn intersect_worked_example() {
        // {0,2} ∩ {0,1,2} = {0,2}
        let likes = list(&[(0, &[1]), (2, &[6])]);
        let rai = list(&[(0, &[2]), (1, &[0]), (2, &[8])]);
        let joined = intersect(&[&likes, &rai]);
        let ordinals: Vec<u32> = joined.ordinals().collect();
        assert_eq!(ordinals, vec![0, 2]);
        assert_eq!(joined.positions(), vec![(0, 1), (0, 2), (2, 6), (2, 8)]);
    }

    #[test]
    fn intersect_single_and_disjoint() {
        let a = list(&[(0, &[1]), (2, &[6])]);
        assert_eq!(intersect(&[&a]), a);
        let b = list(&[(1, &[0])]);
        assert!(intersect(&[&a, &b]).is_empty());
    }

    proptest! {
        #[test]
        fn intersect_is_commutative_associative_idempotent(
            docs_a in proptest::collection::btree_set(0u32..12, 1..8),
            docs_b in proptest::collection::btree_set(0u32..12, 1..8),
            docs_c in proptest::collection::btree_set(0u32..12, 1..8),
        ) {
            let as_list = |docs: &std::collections::BTreeSet<u32>| {
                PostingList::from_sorted_entries(
                    docs.iter()
                        .map(|&ordinal| PostingEntry { ordinal, positions: vec![ordinal] })
                        .collect(),
                )
                .unwrap()
            };
            let (a, b, c) = (as_list(&docs_a), as_list(&docs_b), as_list(&docs_c));
            let ord = |l: &PostingList| l.ordinals().collect::<Vec<u32>>();

            prop_assert_eq!(ord(&intersect(&[&a, &b])), ord(&intersect(&[&b, &a])));
            prop_assert_eq!(
                ord(&intersect(&[&intersect(&[&a, &b]), &c])),
                ord(&intersect(&[&a, &intersect(&[&b, &c])]))
            );
            prop_assert_eq!(ord(&intersect(&[&a, &a])), ord(&a));
        }
    }

    #[test]
    fn posting_list_rejects_disorder() {
        assert!(PostingList::from_sorted_entries(vec![PostingEntry {
            ordinal: 0,
            positions: vec![],
        }])
        .is_err());
        assert!(PostingList::from_sorted_entries(vec![PostingEntry {
            ordinal: 0,
            positions: vec![3, 3],
        }])
        .is_err());
        assert!(PostingList::from_sorted_entries(vec![
            PostingEntry {
                ordinal: 1,
                positions: vec![0],
            },
            PostingEntry {
                ordinal: 0,
                positions: vec![0],
            },
        ])
        .is_err());
    }

    #[test]
    fn from_parts_rejects_out_of_range_ordinal() {
        let key = sk();
        let entries = vec![(
            trapdoor(&key, "w").unwrap(),
            list(&[(3, &[0])]),
        )];
        let doc_table = vec![encrypt_fid(&key, "only.txt").unwrap()];
        assert!(matches!(
            SecureIndex::from_parts(4, doc_table, entries),
            Err(Error::Format(_))
        ));
    }
}
