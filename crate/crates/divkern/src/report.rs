//! JSON verification reports shared by the summation and Lambert drivers.

use crate::quadrature::QuadratureConfig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const REPORT_SCHEMA: u32 = 1;

/// Right side after `terms` dual-series terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub terms: u64,
    pub rhs: Complex64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub target: f64,
    pub kind: ToleranceKind,
    pub quadrature: Option<QuadratureConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub identity: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Closed-form part of the right side (main terms, no dual series).
    pub rhs_main: Complex64,
    pub trace: Vec<TracePoint>,
    pub terms: u64,
    pub tolerances: Tolerances,
    /// `|lhs - rhs|`, divided by `|lhs|` for relative tolerances.
    pub discrepancy: f64,
    pub est_error: f64,
    pub route: String,
    /// Whether the discrepancy decreases along the trace (informational).
    pub trend_non_increasing: Option<bool>,
    /// Discrepancy of the Riesz mean of the dual series at the last
    /// truncation (informational; not used for `pass`).
    pub smoothed_discrepancy: Option<f64>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }
}

/// Discrepancy of `rhs` against `lhs` under `kind`.
pub fn discrepancy(lhs: Complex64, rhs: Complex64, kind: ToleranceKind) -> f64 {
    let d = (lhs - rhs).norm();
    match kind {
        ToleranceKind::Absolute => d,
        ToleranceKind::Relative => d / lhs.norm().max(f64::MIN_POSITIVE),
    }
}

/// At least two of the last three steps of `d` do not increase.
pub fn majority_non_increasing(d: &[f64]) -> bool {
    if d.len() < 2 {
        return true;
    }
    let steps: Vec<bool> = d.windows(2).map(|w| w[1] <= w[0]).collect();
    let tail = &steps[steps.len().saturating_sub(3)..];
    let ok = tail.iter().filter(|&&b| b).count();
    2 * ok >= tail.len() + (tail.len() % 2)
}

pub(crate) fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}
