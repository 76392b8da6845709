//! Detecting benchmark contamination by testing whether a language model
//! prefers the published order of a dataset over shuffled orders.

pub mod dataset;
pub mod harness;
pub mod ngram;
pub mod oracle;
pub mod rng;
pub mod stats;
