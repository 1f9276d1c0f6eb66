//! Verdicts and the per-weight report written by the pipelines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::BeurlingWeight;
use crate::engine::complex_list;
use crate::lab::decay::{DecayFit, Window};
use crate::lab::zeros::ZeroEntry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
    NotRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub reason: String,
    #[serde(default)]
    pub evidence: BTreeMap<String, Value>,
}

impl Default for Verdict {
    fn default() -> Self {
        Verdict::new(VerdictStatus::NotRun, "")
    }
}

impl Verdict {
    pub fn new(status: VerdictStatus, reason: impl Into<String>) -> Self {
        Verdict {
            status,
            reason: reason.into(),
            evidence: BTreeMap::new(),
        }
    }

    pub fn pass(reason: impl Into<String>) -> Self {
        Self::new(VerdictStatus::Pass, reason)
    }

    pub fn fail(reason: impl Into<String>) -> Self {
        Self::new(VerdictStatus::Fail, reason)
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Self::new(VerdictStatus::Inconclusive, reason)
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Self::new(VerdictStatus::NotApplicable, reason)
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.evidence.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    pub fn with_float(self, key: &str, x: f64) -> Self {
        let v = crate::float_json::to_value(x);
        self.with(key, v)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub baxter_classical: Verdict,
    pub crucial: Verdict,
    pub product: Verdict,
    pub bernstein: Verdict,
    pub extended: Verdict,
}

impl Verdicts {
    pub fn all(&self) -> [&Verdict; 5] {
        [
            &self.baxter_classical,
            &self.crucial,
            &self.product,
            &self.bernstein,
            &self.extended,
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Fits {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<DecayFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<DecayFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_minus: Option<DecayFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_hat: Option<DecayFit>,
}

/// Running sums `sum_{n<=K} nu(n) |x_n|` for `K = 0..N`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PartialSums {
    #[serde(with = "crate::float_json::vec")]
    pub alpha: Vec<f64>,
    #[serde(with = "crate::float_json::vec")]
    pub c: Vec<f64>,
    #[serde(with = "crate::float_json::vec")]
    pub d_minus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaxterReport {
    pub weight_id: String,
    pub nu: BeurlingWeight,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub window: Window,
    pub fits: Fits,
    pub partial_sums: PartialSums,
    pub zeros: Vec<ZeroEntry>,
    #[serde(with = "complex_list::optional", default)]
    pub p: Vec<Complex64>,
    pub verdicts: Verdicts,
    pub evidence: BTreeMap<String, Value>,
}

impl BaxterReport {
    pub fn new(weight_id: impl Into<String>, nu: BeurlingWeight, n: usize, window: Window) -> Self {
        BaxterReport {
            weight_id: weight_id.into(),
            nu,
            n,
            m: 0,
            window,
            fits: Fits::default(),
            partial_sums: PartialSums::default(),
            zeros: Vec::new(),
            p: Vec::new(),
            verdicts: Verdicts::default(),
            evidence: BTreeMap::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.evidence.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    pub fn note_float(&mut self, key: &str, x: f64) {
        self.note(key, crate::float_json::to_value(x));
    }

    pub fn statuses(&self) -> impl Iterator<Item = VerdictStatus> + '_ {
        self.verdicts.all().into_iter().map(|v| v.status)
    }
}

/// CSV rows `n, |alpha_n|, |tilde alpha_n|, |e_n|` after a `#` comment line.
/// Floats use the shortest round-trip form.
pub fn alpha_table_csv(comment: &str, alpha: &[Complex64], alpha_tilde: &[Complex64]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", comment.trim_start_matches('#').trim());
    out.push_str("n,abs_alpha,abs_alpha_tilde,abs_error\n");
    for (n, (a, t)) in alpha.iter().zip(alpha_tilde).enumerate() {
        let _ = writeln!(out, "{n},{:?},{:?},{:?}", a.norm(), t.norm(), (a - t).norm());
    }
    out
}
