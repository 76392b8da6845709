//! Fisher's method with negative-control filtering.
//!
//! A dataset that a known-clean control model flags is not exchangeable as
//! published, so its p-value says nothing about the target model and is
//! dropped before combining.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::special::chi2_sf;
use super::{StatsError, DEFAULT_P_FLOOR, RESULT_SCHEMA_VERSION, TOOL_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub name: String,
    pub reason: String,
    /// Controls whose p-value fell below the threshold.
    pub flagged_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub schema_version: u32,
    pub tool_version: String,
    pub component_p_values: Vec<Component>,
    pub excluded: Vec<Exclusion>,
    pub threshold: Option<f64>,
    pub fisher_statistic: f64,
    pub degrees_of_freedom: u32,
    pub combined_p: f64,
    pub p_floor: f64,
}

impl AggregateResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("aggregate serializes");
        s.push('\n');
        s
    }

    pub fn included_p_values(&self) -> Vec<f64> {
        self.component_p_values.iter().map(|c| c.p_value).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSet {
    pub name: String,
    pub p_values: BTreeMap<String, f64>,
}

fn check_p(name: &str, p: f64) -> Result<(), StatsError> {
    if p.is_nan() || p > 1.0 || p < 0.0 {
        return Err(StatsError::InvalidPValue {
            name: name.to_string(),
            value: p,
        });
    }
    Ok(())
}

/// X² = −2 Σ ln max(p_i, p_floor), combined p = P(χ²_{2k} > X²).
pub fn fisher_combine_named(components: Vec<Component>, p_floor: f64) -> Result<AggregateResult, StatsError> {
    if components.is_empty() {
        return Err(StatsError::Empty);
    }
    for c in &components {
        check_p(&c.name, c.p_value)?;
    }
    let statistic = -2.0 * components.iter().map(|c| c.p_value.max(p_floor).ln()).sum::<f64>();
    let df = 2 * components.len() as u32;
    Ok(AggregateResult {
        schema_version: RESULT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        component_p_values: components,
        excluded: Vec::new(),
        threshold: None,
        fisher_statistic: statistic,
        degrees_of_freedom: df,
        combined_p: chi2_sf(statistic, df).max(p_floor),
        p_floor,
    })
}

pub fn fisher_combine(p_values: &[f64]) -> Result<AggregateResult, StatsError> {
    let components = p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| Component {
            name: i.to_string(),
            p_value: p,
        })
        .collect();
    fisher_combine_named(components, DEFAULT_P_FLOOR)
}

/// Drops every dataset that any control flags at `threshold`, then combines
/// the target's remaining p-values.
pub fn filtered_aggregate(
    target: &BTreeMap<String, f64>,
    controls: &[ControlSet],
    threshold: f64,
) -> Result<AggregateResult, StatsError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(StatsError::InvalidThreshold(threshold));
    }
    if target.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut included = Vec::new();
    let mut excluded = Vec::new();
    for (name, &p) in target {
        let mut flagged_by = Vec::new();
        let mut reasons = Vec::new();
        for control in controls {
            let cp = *control
                .p_values
                .get(name)
                .ok_or_else(|| StatsError::MissingControlValue {
                    control: control.name.clone(),
                    dataset: name.clone(),
                })?;
            check_p(name, cp)?;
            if cp < threshold {
                flagged_by.push(control.name.clone());
                reasons.push(format!("control `{}` p={cp} < {threshold}", control.name));
            }
        }
        if flagged_by.is_empty() {
            included.push(Component {
                name: name.clone(),
                p_value: p,
            });
        } else {
            excluded.push(Exclusion {
                name: name.clone(),
                reason: reasons.join("; "),
                flagged_by,
            });
        }
    }
    if included.is_empty() {
        return Err(StatsError::AllExcluded);
    }
    let mut result = fisher_combine_named(included, DEFAULT_P_FLOOR)?;
    result.excluded = excluded;
    result.threshold = Some(threshold);
    Ok(result)
}
