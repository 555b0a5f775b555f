//! JSON report schema for the command-line front end.
//!
//! A report carries every input that affects the numbers (scheme, flags,
//! seed, reps, data fingerprint), so that re-running with the echoed values
//! reproduces it byte-identically apart from `generated_at`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gof::StatisticKind;

#[derive(Debug, Serialize, Deserialize)]
pub struct SchemeEcho {
    pub n: usize,
    pub m: usize,
    pub removals: Vec<usize>,
    pub literal: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DataEcho {
    pub path: String,
    /// SHA-256 of the raw file bytes.
    pub sha256: String,
    pub observations: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StatBlock {
    pub kind: StatisticKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub w: usize,
    pub w_auto: bool,
    pub value: f64,
    pub theta_hat: f64,
    /// Level (as printed key, e.g. "0.10") -> empirical critical value,
    /// ascending by level.
    pub critical_values: BTreeMap<String, f64>,
    pub p_value: f64,
    /// Level -> reject H0 at that level.
    pub reject: BTreeMap<String, bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TestReport {
    pub scheme: SchemeEcho,
    pub data: DataEcho,
    pub reps: usize,
    pub seed: u64,
    pub workers: usize,
    pub statistics: Vec<StatBlock>,
    /// Unix seconds; excluded from the determinism contract.
    pub generated_at: u64,
}

/// Key used to format levels consistently in JSON maps.
pub fn level_key(level: f64) -> String {
    format!("{level:.4}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
