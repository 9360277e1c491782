//! `fuzzidx` — build, query, benchmark, and serve the encrypted fuzzy index.

use std::collections::{BTreeSet, HashSet};
use std::io::{BufReader, Write};
use std::net::TcpListener;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{ArgAction, Parser, Subcommand};

use fuzzidx_core::protocol::wire;
use fuzzidx_core::{
    avg_set_sizes, default_stop_words, deserialize_index, extract_text, owner_publish,
    read_word_file, server_answer, user_decrypt, user_query, Credentials, Dictionary, Document,
    QueryRequest, TextPrepConfig,
};

/// Environment variable naming a default stop-word file.
const STOPWORDS_ENV: &str = "FUZZIDX_STOPWORDS";

#[derive(Parser)]
#[command(name = "fuzzidx", version, about = "Fuzzy keyword search over an encrypted index")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a directory of .txt files and publish it.
    Build {
        /// Directory of input documents; files are read in sorted filename
        /// order, which assigns document ordinals.
        #[arg(long)]
        input: PathBuf,
        /// Accepted for interface compatibility; the index stores the exact
        /// corpus words, so no dictionary is consulted at build time.
        #[arg(long)]
        dict: Option<PathBuf>,
        /// Stop-word file (one word per line, `#` comments). Falls back to
        /// $FUZZIDX_STOPWORDS, then to the built-in list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        user: String,
        #[arg(long)]
        pass: String,
        /// B-tree order.
        #[arg(long, default_value_t = fuzzidx_core::DEFAULT_ORDER)]
        order: usize,
        /// Lowercase all words. Query with the same setting.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        fold_case: bool,
        /// Output index file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Query an index; prints matching file identifiers, one per line.
    Query {
        #[arg(long)]
        index: PathBuf,
        /// Dictionary file for fuzzy expansion.
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        user: String,
        #[arg(long)]
        pass: String,
        /// Keyword to search; repeat for a multi-keyword query, which
        /// returns only documents matching every keyword.
        #[arg(long, required = true)]
        keyword: Vec<String>,
        /// Maximum edit distance for fuzzy expansion.
        #[arg(long, default_value_t = 1)]
        distance: usize,
        /// Must match the setting the index was built with.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        fold_case: bool,
    },
    /// Compare wildcard-based and dictionary-based fuzzy set sizes per
    /// keyword length; writes CSV.
    Bench {
        /// Dictionary file.
        #[arg(long)]
        dict: PathBuf,
        /// Edit distance for both expansions.
        #[arg(long, default_value_t = 1)]
        distance: usize,
        /// Inclusive keyword-length range, e.g. 3..10.
        #[arg(long, default_value = "3..10", value_parser = parse_lengths)]
        lengths: RangeInclusive<usize>,
        /// Words sampled per length (first N in sorted order).
        #[arg(long, default_value_t = 200)]
        sample: usize,
        /// Output CSV file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve an index over the line-oriented query protocol.
    Serve {
        #[arg(long)]
        index: PathBuf,
        /// Address to bind, e.g. 127.0.0.1:7878 (port 0 picks a free port).
        #[arg(long)]
        listen: String,
    },
}

fn parse_lengths(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected <a>..<b>, got {s:?}"))?;
    let lo: usize = lo.parse().map_err(|_| format!("bad range start {lo:?}"))?;
    let hi: usize = hi.parse().map_err(|_| format!("bad range end {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

fn main() {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Build {
            input,
            dict: _,
            stopwords,
            user,
            pass,
            order,
            fold_case,
            out,
        } => build(&input, stopwords.as_deref(), &user, &pass, order, fold_case, &out),
        Command::Query {
            index,
            dict,
            user,
            pass,
            keyword,
            distance,
            fold_case,
        } => query(&index, &dict, &user, &pass, &keyword, distance, fold_case),
        Command::Bench {
            dict,
            distance,
            lengths,
            sample,
            out,
        } => bench(&dict, distance, lengths, sample, out.as_deref()),
        Command::Serve { index, listen } => serve(&index, &listen),
    }
}

/// Resolve the stop list: explicit flag, then $FUZZIDX_STOPWORDS, then the
/// built-in default. Entries are normalized under the fold_case rule.
fn resolve_stop_words(flag: Option<&Path>, fold_case: bool) -> Result<HashSet<String>> {
    let raw: HashSet<String> = match flag {
        Some(path) => read_word_file(path)
            .with_context(|| format!("reading stop words from {}", path.display()))?
            .into_iter()
            .collect(),
        None => match std::env::var(STOPWORDS_ENV) {
            Ok(path) => read_word_file(Path::new(&path))
                .with_context(|| format!("reading stop words from ${STOPWORDS_ENV}={path}"))?
                .into_iter()
                .collect(),
            Err(_) => default_stop_words(),
        },
    };
    Ok(if fold_case {
        raw.into_iter().map(|w| w.to_lowercase()).collect()
    } else {
        raw
    })
}

fn load_dictionary(path: &Path, fold_case: bool) -> Result<Dictionary> {
    let stop_words = resolve_stop_words(None, fold_case)?;
    Dictionary::from_file(path, &stop_words, fold_case)
        .with_context(|| format!("loading dictionary {}", path.display()))
}

fn build(
    input: &Path,
    stopwords: Option<&Path>,
    user: &str,
    pass: &str,
    order: usize,
    fold_case: bool,
    out: &Path,
) -> Result<()> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(input)
        .with_context(|| format!("reading input directory {}", input.display()))?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "txt"))
        .collect();
    paths.sort();

    let docs: Vec<Document> = paths
        .iter()
        .enumerate()
        .map(|(ordinal, path)| {
            let fid = path
                .file_name()
                .expect("directory entries have names")
                .to_string_lossy()
                .into_owned();
            let text = extract_text(path)?;
            Ok(Document::new(fid, ordinal, text))
        })
        .collect::<fuzzidx_core::Result<_>>()?;

    let cfg = TextPrepConfig {
        fold_case,
        stop_words: resolve_stop_words(stopwords, fold_case)?,
        keep_underscore: true,
    };
    let credentials = Credentials::new(user, pass);
    let index = owner_publish(&docs, &cfg, &credentials, order, out)?;
    println!(
        "{} documents, {} keywords",
        index.doc_count(),
        index.keyword_count()
    );
    Ok(())
}

fn query(
    index_path: &Path,
    dict_path: &Path,
    user: &str,
    pass: &str,
    keywords: &[String],
    distance: usize,
    fold_case: bool,
) -> Result<()> {
    let bytes = std::fs::read(index_path)
        .with_context(|| format!("reading index {}", index_path.display()))?;
    let index = deserialize_index(&bytes)?;
    let dict = load_dictionary(dict_path, fold_case)?;
    let credentials = Credentials::new(user, pass);

    // One fid set per keyword; a multi-keyword query intersects them.
    let mut result: Option<BTreeSet<String>> = None;
    for keyword in keywords {
        let keyword = if fold_case {
            keyword.to_lowercase()
        } else {
            keyword.clone()
        };
        let trapdoors = user_query(&QueryRequest::new(keyword, distance), &dict, &credentials)?;
        let fids = user_decrypt(&server_answer(&index, &trapdoors), &credentials)?;
        result = Some(match result {
            None => fids,
            Some(acc) => acc.intersection(&fids).cloned().collect(),
        });
    }

    let mut stdout = std::io::stdout().lock();
    for fid in result.unwrap_or_default() {
        writeln!(stdout, "{fid}")?;
    }
    Ok(())
}

fn bench(
    dict_path: &Path,
    distance: usize,
    lengths: RangeInclusive<usize>,
    sample: usize,
    out: Option<&Path>,
) -> Result<()> {
    let dict = load_dictionary(dict_path, true)?;
    let rows = avg_set_sizes(&dict, lengths, distance, sample)?;

    let mut csv = String::from("length,wfs_avg,dfs_avg,sample_n\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.length, row.wfs_avg, row.dfs_avg, row.sample_n
        ));
    }
    match out {
        Some(path) => std::fs::write(path, csv)
            .with_context(|| format!("writing CSV to {}", path.display()))?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn serve(index_path: &Path, listen: &str) -> Result<()> {
    let bytes = std::fs::read(index_path)
        .with_context(|| format!("reading index {}", index_path.display()))?;
    let index = Arc::new(deserialize_index(&bytes)?);
    let listener = TcpListener::bind(listen).with_context(|| format!("binding {listen}"))?;

    // announce the actual address so callers using port 0 can find it
    println!("listening on {}", listener.local_addr()?);
    std::io::stdout().flush()?;
    log::info!(
        "serving {} keywords over {} documents",
        index.keyword_count(),
        index.doc_count()
    );

    for stream in listener.incoming() {
        let stream = match stream {
            Ok(stream) => stream,
            Err(e) => {
                log::warn!("accept failed: {e}");
                continue;
            }
        };
        let index = Arc::clone(&index);
        std::thread::spawn(move || {
            let peer = stream
                .peer_addr()
                .map(|a| a.to_string())
                .unwrap_or_else(|_| "<unknown>".to_string());
            let reader = match stream.try_clone() {
                Ok(clone) => clone,
                Err(e) => {
                    log::warn!("{peer}: cannot clone stream: {e}");
                    return;
                }
            };
            let mut reader = BufReader::new(reader);
            let mut writer = stream;
            if let Err(e) = wire::handle_connection(&mut reader, &mut writer, &index) {
                log::info!("{peer}: connection closed: {e}");
            }
        });
    }
    Ok(())
}
