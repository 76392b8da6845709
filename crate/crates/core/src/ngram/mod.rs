//! Byte-level additive-smoothing n-gram language model.
//!
//! The probability of byte `b` after context `c` (the longest available
//! context, at most `order − 1` bytes, never crossing a document boundary) is
//!
//! ```text
//! P(b | c) = (count(c·b) + α) / (total(c) + 256·α)
//! ```
//!
//! Counts live in two hash maps keyed by a packed gram: up to 15 bytes in the
//! low bits of a `u128` and the gram length in the top byte.

mod canary;
mod io;
pub mod synthetic;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::oracle::WindowScorer;

pub use canary::{build_contaminated_corpus, CanaryPlan, CanarySpec};
pub use synthetic::CorpusSource;
pub use io::{load_model, read_model, save_model, write_model, ModelFileError, FORMAT_VERSION, MAGIC};

pub const VOCAB_SIZE: usize = 256;
pub const DEFAULT_ORDER: usize = 5;
pub const DEFAULT_ALPHA: f64 = 0.1;
/// Largest order accepted by default; contexts must fit the packed key.
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NGramConfig {
    pub order: usize,
    pub alpha: f64,
}

impl Default for NGramConfig {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            alpha: DEFAULT_ALPHA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NGramError {
    #[error("order must be between 1 and {max}, got {order}")]
    Order { order: usize, max: usize },
    #[error("alpha must be a positive finite number, got {0}")]
    Alpha(f64),
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("canary `{0}` has no examples")]
    EmptyCanary(String),
    #[error("canary `{0}` must be injected at least once")]
    ZeroDuplication(String),
}

type Key = u128;

#[inline]
fn key(len: usize, packed: u128) -> Key {
    ((len as u128) << 120) | packed
}

#[inline]
fn pack(bytes: &[u8]) -> u128 {
    bytes.iter().fold(0u128, |acc, &b| (acc << 8) | b as u128)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    order: usize,
    alpha: f64,
    /// count(c·b) for grams of length 1..=order.
    grams: FxHashMap<Key, u64>,
    /// total(c) for contexts of length 0..order.
    totals: FxHashMap<Key, u64>,
}

impl NGramModel {
    pub fn empty(config: NGramConfig) -> Result<Self, NGramError> {
        Self::empty_with_limit(config, MAX_ORDER)
    }

    /// Like [`NGramModel::empty`] with a different order guard; orders above
    /// 15 never fit the packed key.
    pub fn empty_with_limit(config: NGramConfig, max_order: usize) -> Result<Self, NGramError> {
        let max = max_order.min(15);
        if config.order == 0 || config.order > max {
            return Err(NGramError::Order {
                order: config.order,
                max,
            });
        }
        if !(config.alpha > 0.0 && config.alpha.is_finite()) {
            return Err(NGramError::Alpha(config.alpha));
        }
        Ok(Self {
            order: config.order,
            alpha: config.alpha,
            grams: FxHashMap::default(),
            totals: FxHashMap::default(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn config(&self) -> NGramConfig {
        NGramConfig {
            order: self.order,
            alpha: self.alpha,
        }
    }

    /// Adds one document's counts. Contexts never reach into other documents.
    pub fn add_document(&mut self, doc: &[u8]) {
        for i in 0..doc.len() {
            let max_ctx = i.min(self.order - 1);
            let mut ctx: u128 = 0;
            let mut gram: u128 = doc[i] as u128;
            // Context of length o is doc[i-o..i]; gram of length o+1 is doc[i-o..=i].
            for o in 0..=max_ctx {
                if o > 0 {
                    let b = doc[i - o] as u128;
                    ctx |= b << (8 * (o - 1));
                    gram |= b << (8 * o);
                }
                *self.totals.entry(key(o, ctx)).or_insert(0) += 1;
                *self.grams.entry(key(o + 1, gram)).or_insert(0) += 1;
            }
        }
    }

    pub fn count(&self, context: &[u8], next: u8) -> u64 {
        let mut g = context.to_vec();
        g.push(next);
        self.grams.get(&key(g.len(), pack(&g))).copied().unwrap_or(0)
    }

    pub fn total(&self, context: &[u8]) -> u64 {
        self.totals.get(&key(context.len(), pack(context))).copied().unwrap_or(0)
    }

    /// ln P(next | context) using the last `order − 1` bytes of `context`.
    pub fn ln_prob(&self, context: &[u8], next: u8) -> f64 {
        let keep = context.len().min(self.order - 1);
        let ctx = &context[context.len() - keep..];
        self.smoothed(self.count(ctx, next), self.total(ctx)).ln()
    }

    #[inline]
    fn smoothed(&self, count: u64, total: u64) -> f64 {
        (count as f64 + self.alpha) / (total as f64 + VOCAB_SIZE as f64 * self.alpha)
    }

    /// Total log-probability of `text` scored as one document.
    pub fn logprob(&self, text: &[u8]) -> f64 {
        self.logprob_from(text, 0)
    }

    /// Σ ln P(text[i] | text[..i]) for `i ≥ score_from`, with no context
    /// before `text[0]`.
    pub fn logprob_from(&self, text: &[u8], score_from: usize) -> f64 {
        let mut sum = 0.0;
        for i in score_from..text.len() {
            let o = i.min(self.order - 1);
            let ctx = pack(&text[i - o..i]);
            let gram = (ctx << 8) | text[i] as u128;
            let total = self.totals.get(&key(o, ctx)).copied().unwrap_or(0);
            let count = if total == 0 {
                0
            } else {
                self.grams.get(&key(o + 1, gram)).copied().unwrap_or(0)
            };
            sum += self.smoothed(count, total).ln();
        }
        sum
    }

    /// Contexts with at least one observation, as byte strings.
    pub fn contexts(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.totals.keys().map(|&k| unpack(k))
    }

    pub fn num_contexts(&self) -> usize {
        self.totals.len()
    }

    pub fn num_grams(&self) -> usize {
        self.grams.len()
    }

    /// SHA-256 of the serialized model, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut bytes = Vec::new();
        write_model(self, &mut bytes).expect("writing to a Vec cannot fail");
        hex::encode(Sha256::digest(&bytes))
    }

    fn sorted_entries(map: &FxHashMap<Key, u64>) -> Vec<(Key, u64)> {
        let mut v: Vec<_> = map.iter().map(|(&k, &c)| (k, c)).collect();
        v.sort_unstable_by_key(|&(k, _)| k);
        v
    }
}

fn unpack(k: Key) -> Vec<u8> {
    let len = (k >> 120) as usize;
    (0..len).rev().map(|i| (k >> (8 * i)) as u8).collect()
}

impl WindowScorer<u8> for NGramModel {
    fn score_window(&self, window: &[u8], score_from: usize) -> f64 {
        self.logprob_from(window, score_from)
    }
}

/// Counts every document of `corpus` in one pass.
pub fn train<S: AsRef<[u8]>>(corpus: &[S], config: NGramConfig) -> Result<NGramModel, NGramError> {
    train_with_limit(corpus, config, MAX_ORDER)
}

pub fn train_with_limit<S: AsRef<[u8]>>(
    corpus: &[S],
    config: NGramConfig,
    max_order: usize,
) -> Result<NGramModel, NGramError> {
    let mut model = NGramModel::empty_with_limit(config, max_order)?;
    if corpus.is_empty() {
        return Err(NGramError::EmptyCorpus);
    }
    for doc in corpus {
        model.add_document(doc.as_ref());
    }
    Ok(model)
}
