//! Log-probability oracles.
//!
//! An oracle answers one question: the total log-probability of a text. The
//! built-in n-gram model answers it exactly; remote oracles answer it over the
//! JSON-lines protocol in [`protocol`], and are responsible for their own
//! context-window striding (see [`strided`] for the required semantics).

pub mod protocol;
pub mod remote;
pub mod strided;

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use crate::ngram::NGramModel;

pub use remote::{RemoteConfig, RemoteOracle};
pub use strided::{stride_windows, strided_log_likelihood, StrideWindow, WindowScorer};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    /// The connection or process failed; the same request may succeed later.
    #[error("oracle `{oracle}`: transport failure: {message}")]
    Transport { oracle: String, message: String },
    /// The oracle understood the request and refused it.
    #[error("oracle `{oracle}`: {message}")]
    Semantic { oracle: String, message: String },
    /// The peer violated the wire protocol; the connection is unusable.
    #[error("oracle `{oracle}`: protocol violation: {message}")]
    Protocol { oracle: String, message: String },
    #[error("oracle `{oracle}`: cannot open: {message}")]
    Open { oracle: String, message: String },
}

impl OracleError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, OracleError::Transport { .. })
    }

    pub fn oracle(&self) -> &str {
        match self {
            OracleError::Transport { oracle, .. }
            | OracleError::Semantic { oracle, .. }
            | OracleError::Protocol { oracle, .. }
            | OracleError::Open { oracle, .. } => oracle,
        }
    }
}

/// A black-box scorer of total log-probabilities.
///
/// Implementations must be deterministic (same text, same bits) and must
/// only return finite values.
pub trait LogProbOracle: Send + Sync {
    fn name(&self) -> &str;

    /// Context window in oracle-defined units; 0 means unbounded.
    fn context_length(&self) -> usize;

    fn score(&self, text: &str) -> Result<f64, OracleError>;

    fn score_batch(&self, texts: &[&str]) -> Result<Vec<f64>, OracleError> {
        texts.iter().map(|t| self.score(t)).collect()
    }
}

impl<T: LogProbOracle + ?Sized> LogProbOracle for Arc<T> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn context_length(&self) -> usize {
        (**self).context_length()
    }
    fn score(&self, text: &str) -> Result<f64, OracleError> {
        (**self).score(text)
    }
    fn score_batch(&self, texts: &[&str]) -> Result<Vec<f64>, OracleError> {
        (**self).score_batch(texts)
    }
}

impl<T: LogProbOracle + ?Sized> LogProbOracle for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn context_length(&self) -> usize {
        (**self).context_length()
    }
    fn score(&self, text: &str) -> Result<f64, OracleError> {
        (**self).score(text)
    }
    fn score_batch(&self, texts: &[&str]) -> Result<Vec<f64>, OracleError> {
        (**self).score_batch(texts)
    }
}

pub(crate) fn check_finite(oracle: &str, value: f64) -> Result<f64, OracleError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(OracleError::Semantic {
            oracle: oracle.to_string(),
            message: format!("non-finite log-probability {value}"),
        })
    }
}

/// Scores `text` exactly with an in-memory n-gram model.
#[derive(Debug, Clone)]
pub struct NGramOracle {
    name: String,
    model: Arc<NGramModel>,
}

impl NGramOracle {
    pub fn new(name: impl Into<String>, model: Arc<NGramModel>) -> Self {
        Self {
            name: name.into(),
            model,
        }
    }

    pub fn model(&self) -> &NGramModel {
        &self.model
    }
}

impl LogProbOracle for NGramOracle {
    fn name(&self) -> &str {
        &self.name
    }

    fn context_length(&self) -> usize {
        0
    }

    fn score(&self, text: &str) -> Result<f64, OracleError> {
        if text.is_empty() {
            return Err(OracleError::Semantic {
                oracle: self.name.clone(),
                message: "cannot score empty text".into(),
            });
        }
        check_finite(&self.name, self.model.logprob(text.as_bytes()))
    }
}

/// Parsed form of the `--oracle` specifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleSpec {
    /// `builtin:ngram=<model-file>`
    NGram(PathBuf),
    /// `cmd:<shell command>`
    Command(String),
    /// `tcp:<host>:<port>`
    Tcp(String),
}

impl FromStr for OracleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(path) = s.strip_prefix("builtin:ngram=") {
            if path.is_empty() {
                return Err("builtin:ngram= needs a model file".into());
            }
            Ok(OracleSpec::NGram(PathBuf::from(path)))
        } else if let Some(cmd) = s.strip_prefix("cmd:") {
            if cmd.trim().is_empty() {
                return Err("cmd: needs a command".into());
            }
            Ok(OracleSpec::Command(cmd.to_string()))
        } else if let Some(addr) = s.strip_prefix("tcp:") {
            match addr.rsplit_once(':') {
                Some((host, port)) if !host.is_empty() && port.parse::<u16>().is_ok() => {
                    Ok(OracleSpec::Tcp(addr.to_string()))
                }
                _ => Err(format!("expected tcp:<host>:<port>, got `{s}`")),
            }
        } else {
            Err(format!(
                "unknown oracle `{s}`; expected builtin:ngram=<file>, cmd:<command> or tcp:<host>:<port>"
            ))
        }
    }
}

impl std::fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleSpec::NGram(p) => write!(f, "builtin:ngram={}", p.display()),
            OracleSpec::Command(c) => write!(f, "cmd:{c}"),
            OracleSpec::Tcp(a) => write!(f, "tcp:{a}"),
        }
    }
}

pub fn open_oracle(spec: &OracleSpec, remote: &RemoteConfig) -> Result<Box<dyn LogProbOracle>, OracleError> {
    match spec {
        OracleSpec::NGram(path) => {
            let model = crate::ngram::load_model(path).map_err(|e| OracleError::Open {
                oracle: spec.to_string(),
                message: e.to_string(),
            })?;
            let name = format!(
                "ngram:{}",
                path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default()
            );
            Ok(Box::new(NGramOracle::new(name, Arc::new(model))))
        }
        OracleSpec::Command(_) | OracleSpec::Tcp(_) => {
            Ok(Box::new(RemoteOracle::connect(spec.clone(), remote.clone())?))
        }
    }
}

/// How often a retryable (transport) failure is retried before giving up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            backoff: Duration::from_millis(200),
        }
    }
}

impl RetryPolicy {
    pub fn none() -> Self {
        Self {
            max_attempts: 1,
            backoff: Duration::ZERO,
        }
    }

    pub fn score(&self, oracle: &dyn LogProbOracle, text: &str) -> Result<f64, OracleError> {
        let mut attempt = 1;
        loop {
            match oracle.score(text) {
                Err(e) if e.is_retryable() && attempt < self.max_attempts.max(1) => {
                    thread::sleep(self.backoff * attempt);
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}
