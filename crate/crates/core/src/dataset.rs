//! Benchmark datasets: loading, normalization, sequencing, permutations and
//! shard plans.

use std::fmt;
use std::fs;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::rng::{Domain, SeedStream};

/// Audits truncate datasets to this many examples unless told otherwise.
pub const DEFAULT_MAX_EXAMPLES: usize = 5000;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: cannot read dataset: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: dataset is empty")]
    Empty { path: PathBuf },
    #[error("{path}:{line}: {reason}")]
    Line {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("example {index}: {reason}")]
    InvalidExample { index: usize, reason: String },
    #[error("dataset `{0}` has no examples")]
    NoExamples(String),
    #[error("invalid shard configuration: {0}")]
    ShardConfig(String),
    #[error("cannot permute {0} items; need at least 2")]
    PermutationSize(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub index: usize,
    pub text: String,
}

/// An ordered, non-empty collection of newline-free examples. The order is
/// the canonical order under test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleDataset {
    name: String,
    source_path: String,
    examples: Vec<Example>,
}

/// Collapses every run of line breaks to one space and trims the ends.
pub fn normalize_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut in_break = false;
    for ch in raw.chars() {
        if ch == '\n' || ch == '\r' {
            if !in_break {
                out.push(' ');
                in_break = true;
            }
        } else {
            out.push(ch);
            in_break = false;
        }
    }
    out.trim().to_string()
}

impl ExampleDataset {
    /// Builds a dataset from raw texts, normalizing each one.
    pub fn from_texts<I, S>(name: impl Into<String>, texts: I) -> Result<Self, DatasetError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut examples = Vec::new();
        for (index, raw) in texts.into_iter().enumerate() {
            let text = normalize_text(raw.as_ref());
            if text.is_empty() {
                return Err(DatasetError::InvalidExample {
                    index,
                    reason: "empty text after normalization".into(),
                });
            }
            examples.push(Example { index, text });
        }
        if examples.is_empty() {
            return Err(DatasetError::NoExamples(name));
        }
        Ok(Self {
            name,
            source_path: String::new(),
            examples,
        })
    }

    pub fn with_source_path(mut self, path: impl Into<String>) -> Self {
        self.source_path = path.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> + '_ {
        self.examples.iter().map(|e| e.text.as_str())
    }

    /// The canonical-order sequence of the whole dataset.
    pub fn canonical_seq(&self) -> String {
        seq(self.texts())
    }

    /// Re-emits the normalized dataset as JSON-lines.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for ex in &self.examples {
            let line = serde_json::json!({ "text": ex.text });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<(), DatasetError> {
        let io = |source| DatasetError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = fs::File::create(path).map_err(io)?;
        file.write_all(self.to_jsonl().as_bytes()).map_err(io)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    JsonLines,
    PlainText,
}

impl DatasetFormat {
    /// `.jsonl`/`.json` files are JSON-lines, `.txt` plain text; anything else
    /// is JSON-lines when its first line opens an object.
    fn detect(path: &Path, first_line: &[u8]) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "json" | "ndjson") => Self::JsonLines,
            Some("txt") => Self::PlainText,
            _ if first_line.trim_ascii_start().starts_with(b"{") => Self::JsonLines,
            _ => Self::PlainText,
        }
    }
}

#[derive(Deserialize)]
struct JsonLine {
    text: Option<serde_json::Value>,
}

/// Reads a dataset in file line order, keeping at most `max_examples` lines.
pub fn load_dataset(path: &Path, max_examples: Option<usize>) -> Result<ExampleDataset, DatasetError> {
    let bytes = fs::read(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    while lines.last().is_some_and(|l| l.trim_ascii().is_empty()) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(DatasetError::Empty {
            path: path.to_path_buf(),
        });
    }
    let format = DatasetFormat::detect(path, lines[0]);
    let limit = max_examples.unwrap_or(usize::MAX);
    let line_err = |line: usize, reason: String| DatasetError::Line {
        path: path.to_path_buf(),
        line,
        reason,
    };

    let mut examples = Vec::new();
    for (i, raw) in lines.iter().take(limit).enumerate() {
        let lineno = i + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|e| line_err(lineno, format!("invalid UTF-8: {e}")))?;
        let text = match format {
            DatasetFormat::PlainText => line.to_string(),
            DatasetFormat::JsonLines => {
                let parsed: JsonLine =
                    serde_json::from_str(line).map_err(|e| line_err(lineno, format!("invalid JSON: {e}")))?;
                match parsed.text {
                    Some(serde_json::Value::String(s)) => s,
                    Some(_) => return Err(line_err(lineno, "field \"text\" is not a string".into())),
                    None => return Err(line_err(lineno, "missing field \"text\"".into())),
                }
            }
        };
        let text = normalize_text(&text);
        if text.is_empty() {
            return Err(line_err(lineno, "empty text".into()));
        }
        examples.push(Example { index: i, text });
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Ok(ExampleDataset {
        name,
        source_path: path.display().to_string(),
        examples,
    })
}

/// Joins texts with a single `\n` between consecutive items.
pub fn seq<'a, I>(texts: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = String::new();
    for (i, t) in texts.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(t);
    }
    out
}

/// Contiguous partition of `0..n` into `r` shards, larger shards first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardPlan {
    pub num_examples: usize,
    pub num_shards: usize,
    pub boundaries: Vec<(usize, usize)>,
}

impl ShardPlan {
    pub fn ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.boundaries.iter().map(|&(s, e)| s..e)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.boundaries.iter().map(|&(s, e)| e - s).collect()
    }
}

pub fn make_shard_plan(n: usize, r: usize) -> Result<ShardPlan, DatasetError> {
    if r < 2 {
        return Err(DatasetError::ShardConfig(format!(
            "{r} shard(s) requested; the t-test needs at least 2"
        )));
    }
    if n < 2 * r {
        return Err(DatasetError::ShardConfig(format!(
            "{n} examples cannot fill {r} shards with at least 2 examples each; use at most {} shards",
            n / 2
        )));
    }
    let base = n / r;
    let extra = n % r;
    let mut boundaries = Vec::with_capacity(r);
    let mut start = 0;
    for i in 0..r {
        let size = base + usize::from(i < extra);
        boundaries.push((start, start + size));
        start += size;
    }
    Ok(ShardPlan {
        num_examples: n,
        num_shards: r,
        boundaries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLineage {
    pub master_seed: u64,
    pub shard_index: u32,
    pub permutation_index: u32,
}

impl fmt::Display for SeedLineage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.master_seed, self.shard_index, self.permutation_index)
    }
}

/// `mapping[j]` is the original position of the item placed at position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    pub mapping: Vec<usize>,
    pub seed_lineage: SeedLineage,
}

impl Permutation {
    pub fn apply<'a, T>(&'a self, items: &'a [T]) -> impl Iterator<Item = &'a T> + 'a {
        debug_assert_eq!(items.len(), self.mapping.len());
        self.mapping.iter().map(move |&i| &items[i])
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(j, &i)| i == j)
    }
}

/// Uniform permutation of `0..k` from the stream keyed by the seed lineage.
pub fn sample_permutation(
    k: usize,
    master_seed: u64,
    shard_index: u32,
    permutation_index: u32,
) -> Result<Permutation, DatasetError> {
    if k < 2 {
        return Err(DatasetError::PermutationSize(k));
    }
    let mut stream = SeedStream::new(master_seed, Domain::Permutation, shard_index, permutation_index);
    let mut mapping: Vec<usize> = (0..k).collect();
    stream.shuffle(&mut mapping);
    Ok(Permutation {
        mapping,
        seed_lineage: SeedLineage {
            master_seed,
            shard_index,
            permutation_index,
        },
    })
}
