//! Seeded synthetic text: random sentences over a fixed 1,000-word lexicon.
//!
//! Background documents, canary examples and held-out control examples are
//! all drawn from the same sentence distribution, so a dataset built here is
//! exchangeable by construction and only injection can make its order
//! special. Every document and example has its own stream, so generation is
//! parallel and prefix-stable (the first `k` of `n` examples do not depend on
//! `n`).

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::dataset::{DatasetError, ExampleDataset};
use crate::rng::{Domain, SeedStream};

pub const LEXICON_SIZE: usize = 1000;
const LEXICON_SEED: u64 = 0x1e71_c0de;
const ZIPF_EXPONENT: f64 = 0.8;
const SENTENCE_WORDS: (u64, u64) = (4, 8);
const DOC_SENTENCES: (u64, u64) = (3, 9);

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z", "br", "ch", "cl",
    "dr", "fl", "gr", "pl", "pr", "sh", "st", "th", "tr",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "io", "ou"];
const CODAS: &[&str] = &["", "", "", "n", "r", "s", "t", "l", "m", "nd", "st", "ck"];

pub struct Lexicon {
    words: Vec<String>,
    /// Cumulative Zipf weights, last element 1.0.
    cumulative: Vec<f64>,
}

impl Lexicon {
    fn build() -> Self {
        let mut rng = SeedStream::new(LEXICON_SEED, Domain::Lexicon, 0, 0);
        let mut seen = HashSet::new();
        let mut words = Vec::with_capacity(LEXICON_SIZE);
        while words.len() < LEXICON_SIZE {
            let syllables = 1 + rng.below(3);
            let mut w = String::new();
            for _ in 0..syllables {
                w.push_str(ONSETS[rng.below(ONSETS.len() as u64) as usize]);
                w.push_str(VOWELS[rng.below(VOWELS.len() as u64) as usize]);
                w.push_str(CODAS[rng.below(CODAS.len() as u64) as usize]);
            }
            if seen.insert(w.clone()) {
                words.push(w);
            }
        }
        let weights: Vec<f64> = (0..LEXICON_SIZE).map(|r| 1.0 / ((r + 1) as f64).powf(ZIPF_EXPONENT)).collect();
        let sum: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / sum;
                acc
            })
            .collect();
        *cumulative.last_mut().unwrap() = 1.0;
        Self { words, cumulative }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    fn sample(&self, rng: &mut SeedStream) -> &str {
        let u = rng.unit();
        let i = self.cumulative.partition_point(|&c| c <= u);
        &self.words[i.min(self.words.len() - 1)]
    }
}

pub fn lexicon() -> &'static Lexicon {
    static LEXICON: OnceLock<Lexicon> = OnceLock::new();
    LEXICON.get_or_init(Lexicon::build)
}

fn between(rng: &mut SeedStream, (lo, hi): (u64, u64)) -> u64 {
    lo + rng.below(hi - lo + 1)
}

/// One lowercase sentence of 4–8 words, no punctuation.
pub fn sentence(rng: &mut SeedStream) -> String {
    let lex = lexicon();
    let n = between(rng, SENTENCE_WORDS);
    let mut s = String::new();
    for i in 0..n {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(lex.sample(rng));
    }
    s
}

/// `docs` background documents of 3–9 sentences each, one sentence per line.
pub fn background_documents(seed: u64, docs: usize) -> Vec<String> {
    (0..docs)
        .into_par_iter()
        .map(|d| {
            let mut rng = SeedStream::new(seed, Domain::Synthetic, 0, d as u32);
            let n = between(&mut rng, DOC_SENTENCES);
            (0..n).map(|_| sentence(&mut rng)).collect::<Vec<_>>().join("\n")
        })
        .collect()
}

/// An exchangeable dataset of `examples` independent sentences.
pub fn synthetic_dataset(name: impl Into<String>, seed: u64, examples: usize) -> Result<ExampleDataset, DatasetError> {
    let texts: Vec<String> = (0..examples)
        .into_par_iter()
        .map(|i| sentence(&mut SeedStream::new(seed, Domain::Synthetic, 1, i as u32)))
        .collect();
    ExampleDataset::from_texts(name, texts)
}

/// Where a training corpus comes from.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CorpusSource {
    /// `synthetic:seed=N,docs=M`
    Synthetic { seed: u64, docs: usize },
    /// A text file; documents are separated by blank lines.
    File { path: PathBuf },
}

impl CorpusSource {
    pub fn load(&self) -> std::io::Result<Vec<String>> {
        match self {
            CorpusSource::Synthetic { seed, docs } => Ok(background_documents(*seed, *docs)),
            CorpusSource::File { path } => read_documents(path),
        }
    }
}

pub fn read_documents(path: &Path) -> std::io::Result<Vec<String>> {
    let raw = std::fs::read_to_string(path)?;
    let raw = raw.replace("\r\n", "\n");
    let docs: Vec<String> = raw
        .split("\n\n")
        .map(|d| d.trim_matches('\n').to_string())
        .filter(|d| !d.trim().is_empty())
        .collect();
    if docs.is_empty() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("{}: no documents", path.display()),
        ));
    }
    Ok(docs)
}

impl FromStr for CorpusSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(params) = s.strip_prefix("synthetic:") else {
            return Ok(CorpusSource::File { path: PathBuf::from(s) });
        };
        let (mut seed, mut docs) = (None, None);
        for part in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value in `{part}`"))?;
            let v = v.trim();
            match k.trim() {
                "seed" => seed = Some(v.parse::<u64>().map_err(|e| format!("seed `{v}`: {e}"))?),
                "docs" => docs = Some(v.parse::<usize>().map_err(|e| format!("docs `{v}`: {e}"))?),
                other => return Err(format!("unknown synthetic corpus parameter `{other}`")),
            }
        }
        let docs = docs.ok_or("synthetic corpus needs docs=<count>")?;
        if docs == 0 {
            return Err("synthetic corpus needs at least one document".into());
        }
        Ok(CorpusSource::Synthetic {
            seed: seed.ok_or("synthetic corpus needs seed=<n>")?,
            docs,
        })
    }
}

impl TryFrom<String> for CorpusSource {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CorpusSource> for String {
    fn from(source: CorpusSource) -> Self {
        source.to_string()
    }
}

impl fmt::Display for CorpusSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusSource::Synthetic { seed, docs } => write!(f, "synthetic:seed={seed},docs={docs}"),
            CorpusSource::File { path } => write!(f, "{}", path.display()),
        }
    }
}
