//! Text preparation: format extraction, tokenization, and stop-word filtering.
//!
//! This is the owner-side front of the pipeline: raw files become a
//! position-annotated word stream that the index builder consumes. Positions
//! are assigned before stop-word removal and never renumbered, so positional
//! lookups stay stable regardless of the configured stop list.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::{Error, Result};

/// Stop words applied when no explicit list is configured.
pub const DEFAULT_STOP_WORDS: &[&str] = &["a", "an", "the", "is", "of", "to", "in", "and", "or"];

/// A corpus document: an opaque file identifier plus its extracted text.
///
/// Ordinals must be dense `0..N-1` in corpus ingestion order; fids must be
/// nonempty and unique within a corpus. Both are checked at index build time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub fid: String,
    pub ordinal: usize,
    pub text: String,
}

impl Document {
    pub fn new(fid: impl Into<String>, ordinal: usize, text: impl Into<String>) -> Self {
        Self {
            fid: fid.into(),
            ordinal,
            text: text.into(),
        }
    }
}

/// A word with its 0-based position within its document.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub word: String,
    pub position: usize,
}

impl Token {
    pub fn new(word: impl Into<String>, position: usize) -> Self {
        Self {
            word: word.into(),
            position,
        }
    }
}

/// Tokenization and filtering policy.
///
/// `stop_words` entries must already be normalized under the same `fold_case`
/// rule; [`filter_stopwords`] compares words byte-for-byte.
#[derive(Debug, Clone)]
pub struct TextPrepConfig {
    pub fold_case: bool,
    pub stop_words: HashSet<String>,
    /// Treat `_` as a word character so identifiers like `Aishwarya_Rai`
    /// survive as single tokens.
    pub keep_underscore: bool,
}

impl Default for TextPrepConfig {
    fn default() -> Self {
        Self {
            fold_case: true,
            stop_words: default_stop_words(),
            keep_underscore: true,
        }
    }
}

impl TextPrepConfig {
    /// Config with no stop words: every token is kept.
    pub fn without_stop_words(fold_case: bool) -> Self {
        Self {
            fold_case,
            stop_words: HashSet::new(),
            keep_underscore: true,
        }
    }
}

/// The built-in stop list, already lowercase.
pub fn default_stop_words() -> HashSet<String> {
    DEFAULT_STOP_WORDS.iter().map(|w| w.to_string()).collect()
}

type ExtractFn = fn(&Path) -> Result<String>;

/// Extension-keyed content extraction.
///
/// Only `.txt` is built in; other formats plug in through [`register`].
///
/// [`register`]: FormatExtractor::register
pub struct FormatExtractor {
    handlers: HashMap<String, ExtractFn>,
}

impl FormatExtractor {
    /// An extractor with the built-in plain-text handler.
    pub fn builtin() -> Self {
        let mut handlers: HashMap<String, ExtractFn> = HashMap::new();
        handlers.insert("txt".to_string(), extract_plain_text);
        Self { handlers }
    }

    /// Register (or replace) the handler for an extension, given without the
    /// leading dot. Extensions match case-insensitively.
    pub fn register(&mut self, extension: &str, handler: ExtractFn) {
        self.handlers.insert(extension.to_lowercase(), handler);
    }

    pub fn extract(&self, path: &Path) -> Result<String> {
        let extension = path
            .extension()
            .map(|e| e.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        match self.handlers.get(&extension) {
            Some(handler) => handler(path),
            None => Err(Error::UnsupportedFormat { extension }),
        }
    }
}

impl Default for FormatExtractor {
    fn default() -> Self {
        Self::builtin()
    }
}

fn extract_plain_text(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

/// Extract the text content of a file using the built-in handlers.
pub fn extract_text(path: &Path) -> Result<String> {
    FormatExtractor::builtin().extract(path)
}

/// Split text into tokens on whitespace and punctuation.
///
/// A word character is anything alphanumeric, plus `_` when
/// `cfg.keep_underscore` is set. Tokens are numbered `0, 1, 2, ...` in order
/// of appearance, and lowercased when `cfg.fold_case` is set. Stop words are
/// not removed here; see [`filter_stopwords`].
pub fn tokenize(text: &str, cfg: &TextPrepConfig) -> Vec<Token> {
    let is_word_char = |c: char| c.is_alphanumeric() || (cfg.keep_underscore && c == '_');
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<Token>| {
        if !current.is_empty() {
            let word = if cfg.fold_case {
                current.to_lowercase()
            } else {
                current.clone()
            };
            tokens.push(Token::new(word, tokens.len()));
            current.clear();
        }
    };
    for c in text.chars() {
        if is_word_char(c) {
            current.push(c);
        } else {
            flush(&mut current, &mut tokens);
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

/// Drop tokens whose word is in the stop list. Surviving tokens keep their
/// original positions.
pub fn filter_stopwords(tokens: Vec<Token>, cfg: &TextPrepConfig) -> Vec<Token> {
    if cfg.stop_words.is_empty() {
        return tokens;
    }
    tokens
        .into_iter()
        .filter(|t| !cfg.stop_words.contains(&t.word))
        .collect()
}

/// Parse a word-list file body: one word per line, `#` starts a comment line,
/// blank lines are ignored. Used for both stop-word and dictionary files.
pub fn parse_word_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// Read a word-list file (see [`parse_word_lines`] for the format).
pub fn read_word_file(path: &Path) -> Result<Vec<String>> {
    Ok(parse_word_lines(&fs::read_to_string(path)?))
}
