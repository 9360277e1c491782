//! The three-party flow: the owner builds and publishes an index, a user
//! expands a keyword into trapdoors, the server matches trapdoors and returns
//! encrypted file identifiers, and the user decrypts them.
//!
//! Also home to index persistence (the `FZIDX1` byte format) and the
//! line-oriented wire protocol served over a socket. Both are canonical:
//! identical inputs produce byte-identical files and messages.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::fuzzyset::{dfs_expand, Dictionary};
use crate::secureindex::{
    build_index, decrypt_fid, trapdoor, Credentials, PostingEntry, PostingList, SecureIndex,
    Trapdoor, DEFAULT_ORDER,
};
use crate::textprep::{Document, TextPrepConfig};
use crate::{Error, Result};

/// A user's raw query: the keyword and the requested edit distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRequest {
    pub keyword: String,
    pub distance: usize,
}

impl QueryRequest {
    pub fn new(keyword: impl Into<String>, distance: usize) -> Self {
        Self {
            keyword: keyword.into(),
            distance,
        }
    }
}

/// What actually crosses the wire: one trapdoor per fuzzy-set member, sorted
/// by digest and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrapdoorQuery {
    trapdoors: Vec<Trapdoor>,
}

impl TrapdoorQuery {
    pub fn from_trapdoors(mut trapdoors: Vec<Trapdoor>) -> Self {
        trapdoors.sort_unstable();
        trapdoors.dedup();
        Self { trapdoors }
    }

    pub fn trapdoors(&self) -> &[Trapdoor] {
        &self.trapdoors
    }

    pub fn len(&self) -> usize {
        self.trapdoors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trapdoors.is_empty()
    }
}

/// One matched trapdoor with the encrypted FIDs of its documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryHit {
    pub trapdoor: Trapdoor,
    pub encrypted_fids: Vec<Vec<u8>>,
}

/// Server answer: hits only, in query (digest) order; misses are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryResult {
    pub hits: Vec<QueryHit>,
}

/// Owner side: derive the key, build the index over the corpus, and write it
/// to `out` in the `FZIDX1` format.
pub fn owner_publish(
    docs: &[Document],
    cfg: &TextPrepConfig,
    credentials: &Credentials,
    order: usize,
    out: &Path,
) -> Result<SecureIndex> {
    let sk = credentials.derive_key()?;
    let index = build_index(docs, cfg, &sk, order)?;
    std::fs::write(out, serialize_index(&index))?;
    Ok(index)
}

/// User side: expand the keyword against the dictionary and emit one trapdoor
/// per fuzzy-set member. An empty fuzzy set yields an empty (valid) query.
///
/// The keyword must already be normalized the same way the dictionary was.
pub fn user_query(
    req: &QueryRequest,
    dict: &Dictionary,
    credentials: &Credentials,
) -> Result<TrapdoorQuery> {
    let sk = credentials.derive_key()?;
    let fuzzy = dfs_expand(dict, &req.keyword, req.distance);
    let trapdoors = fuzzy
        .members
        .iter()
        .map(|member| trapdoor(&sk, member))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrapdoorQuery::from_trapdoors(trapdoors))
}

/// Server side: look up each trapdoor in the index and map the matching
/// postings through the doc table to encrypted FIDs.
pub fn server_answer(index: &SecureIndex, query: &TrapdoorQuery) -> QueryResult {
    let hits = query
        .trapdoors()
        .iter()
        .filter_map(|t| {
            let postings = index.lookup(t)?;
            let encrypted_fids = postings
                .ordinals()
                .map(|ordinal| {
                    index
                        .encrypted_fid(ordinal)
                        .expect("index invariant: ordinal within doc table")
                        .to_vec()
                })
                .collect();
            Some(QueryHit {
                trapdoor: *t,
                encrypted_fids,
            })
        })
        .collect();
    QueryResult { hits }
}

/// User side: decrypt every returned FID and union them.
pub fn user_decrypt(result: &QueryResult, credentials: &Credentials) -> Result<BTreeSet<String>> {
    let sk = credentials.derive_key()?;
    let mut fids = BTreeSet::new();
    for hit in &result.hits {
        for encrypted in &hit.encrypted_fids {
            fids.insert(decrypt_fid(&sk, encrypted)?);
        }
    }
    Ok(fids)
}

// ---------------------------------------------------------------------------
// FZIDX1 persistence
// ---------------------------------------------------------------------------

/// Magic prefix of the index file format.
pub const MAGIC: &[u8; 7] = b"FZIDX1\n";

/// Serialize to the canonical `FZIDX1` layout (all integers big-endian):
///
/// ```text
/// "FZIDX1\n"
/// u32 doc_count
///   per doc:   u32 len, encrypted FID bytes
/// u32 entry_count
///   per entry (ascending by digest): 16-byte digest, u32 doc_hits,
///     per hit: u32 ordinal, u32 pos_count, u32 positions...
/// ```
pub fn serialize_index(index: &SecureIndex) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(index.doc_count() as u32).to_be_bytes());
    for encrypted in index.doc_table() {
        out.extend_from_slice(&(encrypted.len() as u32).to_be_bytes());
        out.extend_from_slice(encrypted);
    }
    let entries = index.entries();
    out.extend_from_slice(&(entries.len() as u32).to_be_bytes());
    for (trapdoor, postings) in entries {
        out.extend_from_slice(trapdoor.digest());
        out.extend_from_slice(&(postings.doc_count() as u32).to_be_bytes());
        for entry in postings.entries() {
            out.extend_from_slice(&entry.ordinal.to_be_bytes());
            out.extend_from_slice(&(entry.positions.len() as u32).to_be_bytes());
            for position in &entry.positions {
                out.extend_from_slice(&position.to_be_bytes());
            }
        }
    }
    out
}

struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize, section: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Format(format!("truncated {section}")));
        }
        let slice = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self, section: &str) -> Result<u32> {
        let bytes = self.take(4, section)?;
        Ok(u32::from_be_bytes(bytes.try_into().expect("4 bytes")))
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }
}

/// Parse an `FZIDX1` file, rebuilding the B-tree at [`DEFAULT_ORDER`].
pub fn deserialize_index(bytes: &[u8]) -> Result<SecureIndex> {
    deserialize_index_with_order(bytes, DEFAULT_ORDER)
}

/// Parse an `FZIDX1` file with an explicit B-tree order.
///
/// The layout is validated strictly — sorted entries, sorted nonempty
/// postings, in-range ordinals, no trailing bytes — so any parsed index
/// re-serializes to the exact input bytes.
pub fn deserialize_index_with_order(bytes: &[u8], order: usize) -> Result<SecureIndex> {
    let mut r = ByteReader { buf: bytes, pos: 0 };
    let magic = r.take(MAGIC.len(), "magic")?;
    if magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(MAGIC)
        )));
    }

    let doc_count = r.u32("document table header")?;
    let mut doc_table = Vec::with_capacity(doc_count.min(1 << 20) as usize);
    for i in 0..doc_count {
        let len = r.u32(&format!("document {i} length"))? as usize;
        doc_table.push(r.take(len, &format!("document {i}"))?.to_vec());
    }

    let entry_count = r.u32("entry table header")?;
    let mut entries: Vec<(Trapdoor, PostingList)> =
        Vec::with_capacity(entry_count.min(1 << 20) as usize);
    let mut previous_digest: Option<[u8; 16]> = None;
    for i in 0..entry_count {
        let section = format!("entry {i}");
        let digest: [u8; 16] = r.take(16, &section)?.try_into().expect("16 bytes");
        if let Some(previous) = previous_digest {
            if digest <= previous {
                return Err(Error::Format(format!(
                    "{section}: digests not strictly ascending"
                )));
            }
        }
        previous_digest = Some(digest);
        let doc_hits = r.u32(&section)?;
        let mut posting_entries = Vec::with_capacity(doc_hits.min(1 << 20) as usize);
        for _ in 0..doc_hits {
            let ordinal = r.u32(&section)?;
            let pos_count = r.u32(&section)?;
            let mut positions = Vec::with_capacity(pos_count.min(1 << 20) as usize);
            for _ in 0..pos_count {
                positions.push(r.u32(&section)?);
            }
            posting_entries.push(PostingEntry { ordinal, positions });
        }
        let postings = PostingList::from_sorted_entries(posting_entries)
            .map_err(|e| Error::Format(format!("{section}: {e}")))?;
        entries.push((Trapdoor::from_digest(digest), postings));
    }
    if r.remaining() != 0 {
        return Err(Error::Format(format!(
            "{} trailing bytes after entry table",
            r.remaining()
        )));
    }
    SecureIndex::from_parts(order, doc_table, entries)
}

// ---------------------------------------------------------------------------
// Wire protocol
// ---------------------------------------------------------------------------

/// Line-oriented request/response protocol:
///
/// ```text
/// -> QUERY <n>\n        then n lines, each a 32-hex-char trapdoor
/// <- RESULTS <m>\n      then m lines "<trapdoor_hex> <fid_hex>,<fid_hex>"
/// <- END\n
/// ```
///
/// A malformed request gets `ERR <message>\n` and the connection closes.
pub mod wire {
    use super::*;

    /// Upper bound on trapdoors per request; a count above this is refused
    /// before any line is read.
    pub const MAX_TRAPDOORS: usize = 1 << 20;

    fn read_line<R: BufRead>(reader: &mut R, section: &str) -> Result<Option<String>> {
        let mut line = String::new();
        let n = reader
            .read_line(&mut line)
            .map_err(|e| Error::Wire(format!("reading {section}: {e}")))?;
        if n == 0 {
            return Ok(None);
        }
        Ok(Some(line.trim_end_matches(['\n', '\r']).to_string()))
    }

    fn parse_count(line: &str, verb: &str) -> Result<usize> {
        let rest = line
            .strip_prefix(verb)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| Error::Wire(format!("expected \"{verb} <n>\", got {line:?}")))?;
        rest.parse::<usize>()
            .map_err(|_| Error::Wire(format!("bad count {rest:?}")))
    }

    /// Write a query request.
    pub fn write_query<W: Write>(writer: &mut W, query: &TrapdoorQuery) -> Result<()> {
        let mut out = format!("QUERY {}\n", query.len());
        for t in query.trapdoors() {
            out.push_str(&t.hex());
            out.push('\n');
        }
        writer.write_all(out.as_bytes())?;
        writer.flush()?;
        Ok(())
    }

    /// Read a query request. `Ok(None)` means the peer closed the connection
    /// cleanly before sending one.
    pub fn read_query<R: BufRead>(reader: &mut R) -> Result<Option<TrapdoorQuery>> {
        let Some(header) = read_line(reader, "request header")? else {
            return Ok(None);
        };
        let count = parse_count(&header, "QUERY")?;
        if count > MAX_TRAPDOORS {
            return Err(Error::Wire(format!(
                "trapdoor count {count} exceeds maximum {MAX_TRAPDOORS}"
            )));
        }
        let mut trapdoors = Vec::with_capacity(count);
        for i in 0..count {
            let line = read_line(reader, "trapdoor line")?
                .ok_or_else(|| Error::Wire(format!("connection closed after {i} trapdoors")))?;
            trapdoors
                .push(Trapdoor::from_hex(&line).map_err(|e| Error::Wire(format!("{e}")))?);
        }
        Ok(Some(TrapdoorQuery::from_trapdoors(trapdoors)))
    }

    /// Write a response.
    pub fn write_results<W: Write>(writer: &mut W, result: &QueryResult) -> Result<()> {
        let mut out = format!("RESULTS {}\n", result.hits.len());
        for hit in &result.hits {
            out.push_str(&hit.trapdoor.hex());
            out.push(' ');
            let fids: Vec<String> = hit.encrypted_fids.iter().map(hex::encode).collect();
            out.push_str(&fids.join(","));
            out.push('\n');
        }
        out.push_str("END\n");
        writer.write_all(out.as_bytes())?;
        writer.flush()?;
        Ok(())
    }

    /// Read a response (client side). An `ERR` line surfaces as [`Error::Wire`].
    pub fn read_results<R: BufRead>(reader: &mut R) -> Result<QueryResult> {
        let header = read_line(reader, "response header")?
            .ok_or_else(|| Error::Wire("connection closed before response".to_string()))?;
        if let Some(message) = header.strip_prefix("ERR ") {
            return Err(Error::Wire(format!("server error: {message}")));
        }
        let count = parse_count(&header, "RESULTS")?;
        let mut hits = Vec::with_capacity(count.min(MAX_TRAPDOORS));
        for _ in 0..count {
            let line = read_line(reader, "result line")?
                .ok_or_else(|| Error::Wire("connection closed mid-response".to_string()))?;
            let (trapdoor_hex, fid_part) = line
                .split_once(' ')
                .ok_or_else(|| Error::Wire(format!("bad result line {line:?}")))?;
            let trapdoor =
                Trapdoor::from_hex(trapdoor_hex).map_err(|e| Error::Wire(format!("{e}")))?;
            let encrypted_fids = fid_part
                .split(',')
                .map(|fid_hex| {
                    hex::decode(fid_hex)
                        .map_err(|_| Error::Wire(format!("bad fid hex {fid_hex:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            hits.push(QueryHit {
                trapdoor,
                encrypted_fids,
            });
        }
        let end = read_line(reader, "terminator")?;
        if end.as_deref() != Some("END") {
            return Err(Error::Wire(format!("expected END, got {end:?}")));
        }
        Ok(QueryResult { hits })
    }

    /// Write the error line sent before closing a connection.
    pub fn write_error<W: Write>(writer: &mut W, message: &str) -> Result<()> {
        writer.write_all(format!("ERR {message}\n").as_bytes())?;
        writer.flush()?;
        Ok(())
    }

    /// Serve one connection: answer requests until the peer disconnects or
    /// sends something malformed (which gets an `ERR` line and closes).
    pub fn handle_connection<R: BufRead, W: Write>(
        reader: &mut R,
        writer: &mut W,
        index: &SecureIndex,
    ) -> Result<()> {
        loop {
            match read_query(reader) {
                Ok(None) => return Ok(()),
                Ok(Some(query)) => {
                    let result = server_answer(index, &query);
                    log::info!(
                        "query: {} trapdoors, {} hits",
                        query.len(),
                        result.hits.len()
                    );
                    write_results(writer, &result)?;
                }
                Err(Error::Wire(message)) => {
                    log::info!("malformed request: {message}");
                    let _ = write_error(writer, &message);
                    return Err(Error::Wire(message));
                }
                Err(other) => return Err(other),
            }
        }
    }

    /// Client side of one round trip.
    pub fn query_round_trip<R: BufRead, W: Write>(
        reader: &mut R,
        writer: &mut W,
        query: &TrapdoorQuery,
    ) -> Result<QueryResult> {
        write_query(writer, query)?;
        read_results(reader)
    }
}
