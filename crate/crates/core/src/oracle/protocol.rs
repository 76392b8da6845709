//! JSON-lines wire protocol spoken by remote oracles.
//!
//! One JSON object per line, UTF-8, terminated by `\n`. Requests:
//!
//! ```text
//! {"id":1,"op":"meta"}
//! {"id":2,"op":"logprob","text":"a\nb"}
//! {"id":3,"op":"logprob_batch","texts":["a","b"]}
//! ```
//!
//! Responses echo the id and carry exactly one payload:
//!
//! ```text
//! {"id":1,"name":"gpt2","context_length":1024,"scores_first_token":false}
//! {"id":2,"logprob":-12.5}
//! {"id":3,"logprobs":[-3.25,-4.0]}
//! {"id":2,"error":"text too long"}
//! ```
//!
//! Doubles are written in shortest round-trip form. Unknown fields are
//! ignored on input. Responses may arrive in any order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Meta,
    Logprob,
    LogprobBatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: u64,
    pub op: Op,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub texts: Option<Vec<String>>,
}

impl Request {
    pub fn meta(id: u64) -> Self {
        Self {
            id,
            op: Op::Meta,
            text: None,
            texts: None,
        }
    }

    pub fn logprob(id: u64, text: impl Into<String>) -> Self {
        Self {
            id,
            op: Op::Logprob,
            text: Some(text.into()),
            texts: None,
        }
    }

    pub fn logprob_batch(id: u64, texts: Vec<String>) -> Self {
        Self {
            id,
            op: Op::LogprobBatch,
            text: None,
            texts: Some(texts),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores_first_token: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logprob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logprobs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Response {
    pub fn meta(id: u64, name: impl Into<String>, context_length: u64) -> Self {
        Self {
            id,
            name: Some(name.into()),
            context_length: Some(context_length),
            ..Default::default()
        }
    }

    pub fn logprob(id: u64, value: f64) -> Self {
        Self {
            id,
            logprob: Some(value),
            ..Default::default()
        }
    }

    pub fn logprobs(id: u64, values: Vec<f64>) -> Self {
        Self {
            id,
            logprobs: Some(values),
            ..Default::default()
        }
    }

    pub fn error(id: u64, message: impl Into<String>) -> Self {
        Self {
            id,
            error: Some(message.into()),
            ..Default::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("malformed message: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("non-finite number cannot be encoded: {0}")]
    NonFinite(f64),
}

/// Encodes a message as one line including the trailing `\n`.
pub fn encode<T: Serialize>(msg: &T) -> Result<String, ProtocolError> {
    let mut line = serde_json::to_string(msg)?;
    line.push('\n');
    Ok(line)
}

pub fn encode_response(resp: &Response) -> Result<String, ProtocolError> {
    let all = resp.logprob.iter().chain(resp.logprobs.iter().flatten());
    if let Some(&bad) = all.into_iter().find(|v| !v.is_finite()) {
        return Err(ProtocolError::NonFinite(bad));
    }
    encode(resp)
}

pub fn decode_request(line: &str) -> Result<Request, ProtocolError> {
    Ok(serde_json::from_str(line.trim_end_matches(['\n', '\r']))?)
}

pub fn decode_response(line: &str) -> Result<Response, ProtocolError> {
    Ok(serde_json::from_str(line.trim_end_matches(['\n', '\r']))?)
}

/// Extracts the `id` from a line that failed to parse as a request, so a
/// server can still address its error reply.
pub fn salvage_id(line: &str) -> Option<u64> {
    serde_json::from_str::<serde_json::Value>(line).ok()?.get("id")?.as_u64()
}
