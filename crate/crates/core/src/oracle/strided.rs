//! Log-likelihood of sequences longer than a model's context window.
//!
//! With context length `C` and stride `s = ⌊C/2⌋`, window 0 covers units
//! `[0, min(C, L))` and scores all of them. Window `j ≥ 1` starts at `j·s`,
//! covers up to `C` units and scores only `[j·s + C − s, min(j·s + C, L))`,
//! so every unit after the first window sees at least `C − s` units of
//! context, and every unit is scored exactly once.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrideWindow {
    /// Units visible to the model.
    pub start: usize,
    pub end: usize,
    /// First unit whose conditional log-probability is counted.
    pub score_from: usize,
}

impl StrideWindow {
    pub fn span(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn scored(&self) -> Range<usize> {
        self.score_from..self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("context length {0} is too short for strided scoring; need at least 2")]
pub struct ContextTooShort(pub usize);

/// Scores a suffix of a window of units, conditioning on the units of the
/// window that precede it and on nothing earlier.
pub trait WindowScorer<U> {
    /// Σ log p(window[i] | window[..i]) for `i` in `score_from..window.len()`.
    fn score_window(&self, window: &[U], score_from: usize) -> f64;
}

impl<U, F> WindowScorer<U> for F
where
    F: Fn(&[U], usize) -> f64,
{
    fn score_window(&self, window: &[U], score_from: usize) -> f64 {
        self(window, score_from)
    }
}

pub fn stride_windows(len: usize, context: usize) -> Result<Vec<StrideWindow>, ContextTooShort> {
    if context < 2 {
        return Err(ContextTooShort(context));
    }
    if len == 0 {
        return Ok(Vec::new());
    }
    let stride = context / 2;
    let mut windows = vec![StrideWindow {
        start: 0,
        end: len.min(context),
        score_from: 0,
    }];
    let mut j = 1;
    loop {
        let start = j * stride;
        let score_from = start + context - stride;
        if score_from >= len {
            break;
        }
        windows.push(StrideWindow {
            start,
            end: len.min(start + context),
            score_from,
        });
        j += 1;
    }
    Ok(windows)
}

/// Sums window scores over the strided partition of `units`.
pub fn strided_log_likelihood<U, S>(scorer: &S, units: &[U], context: usize) -> Result<f64, ContextTooShort>
where
    S: WindowScorer<U> + ?Sized,
{
    let windows = stride_windows(units.len(), context)?;
    Ok(windows
        .iter()
        .map(|w| scorer.score_window(&units[w.span()], w.score_from - w.start))
        .sum())
}
