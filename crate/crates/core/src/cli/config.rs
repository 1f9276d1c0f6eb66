//! The JSON run configuration.

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer};

use crate::algebra::BeurlingWeight;
use crate::engine::{complex_list, Quadrature, WeightSpec, MAX_QUADRATURE};
use crate::lab::families;
use crate::lab::Window;

pub const MAX_N: usize = 4096;
pub const DEFAULT_N: usize = 64;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub id: String,
    /// Inline weight specification.
    #[serde(default)]
    pub spec: Option<WeightSpec>,
    /// Name of a built-in family; see [`families::builtin`].
    #[serde(default)]
    pub builtin: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub weights: Vec<WeightEntry>,
    #[serde(default = "default_nu")]
    pub nu: BeurlingWeight,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default, deserialize_with = "window_string")]
    pub window: Option<Window>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Ids to run; all weights when absent.
    #[serde(default)]
    pub cases: Option<Vec<String>>,
    /// Pairs for `product-check`; all pairs of cases when absent.
    #[serde(default)]
    pub products: Option<Vec<(String, String)>>,
    /// Polynomial for the Bernstein–Szegő modification in `baxter-check`.
    #[serde(default, deserialize_with = "optional_complex_list")]
    pub bernstein_p: Option<Vec<Complex64>>,
}

fn default_nu() -> BeurlingWeight {
    BeurlingWeight::Exponential { r: 1.0 }
}

fn default_n() -> usize {
    DEFAULT_N
}

fn window_string<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Window>, D::Error> {
    let s = Option::<String>::deserialize(d)?;
    s.map(|s| s.parse().map_err(serde::de::Error::custom))
        .transpose()
}

fn optional_complex_list<'de, D: Deserializer<'de>>(
    d: D,
) -> Result<Option<Vec<Complex64>>, D::Error> {
    complex_list::deserialize(d).map(Some)
}

/// A weight after resolving built-in names.
#[derive(Debug, Clone)]
pub struct Case {
    pub id: String,
    pub spec: WeightSpec,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }

    /// Structural checks; returns the weights in definition order.
    pub fn resolve(&self) -> Result<Vec<Case>, String> {
        if self.n < 2 || self.n > MAX_N {
            return Err(format!("config: field `n` must be in 2..={MAX_N}, got {}", self.n));
        }
        if let Quadrature::Fixed(m) = self.quadrature {
            if !m.is_power_of_two() || m > MAX_QUADRATURE {
                return Err(format!(
                    "config: field `quadrature` must be a power of two up to {MAX_QUADRATURE} or \"auto\", got {m}"
                ));
            }
        }
        self.nu
            .validate()
            .map_err(|e| format!("config: field `nu`: {e}"))?;
        if let Some(w) = self.window {
            if w.hi >= self.n {
                return Err(format!(
                    "config: field `window` {}:{} must end below n = {}",
                    w.lo, w.hi, self.n
                ));
            }
        }
        let mut seen = BTreeSet::new();
        let mut cases = Vec::with_capacity(self.weights.len());
        for (i, entry) in self.weights.iter().enumerate() {
            if !seen.insert(entry.id.as_str()) {
                return Err(format!("config: weight id `{}` is defined twice", entry.id));
            }
            let spec = match (&entry.spec, &entry.builtin) {
                (Some(spec), None) => spec.clone(),
                (None, Some(name)) => families::lookup(name)
                    .ok_or_else(|| format!("config: weights[{i}]: unknown builtin `{name}`"))?
                    .spec,
                _ => {
                    return Err(format!(
                        "config: weights[{i}] (`{}`) needs exactly one of `spec` or `builtin`",
                        entry.id
                    ))
                }
            };
            spec.validate()
                .map_err(|e| format!("config: weights[{i}] (`{}`): {e}", entry.id))?;
            cases.push(Case {
                id: entry.id.clone(),
                spec,
            });
        }
        let known = |id: &str| -> Result<(), String> {
            if seen.contains(id) {
                Ok(())
            } else {
                Err(format!("config: undefined weight id `{id}`"))
            }
        };
        for id in self.cases.iter().flatten() {
            known(id)?;
        }
        for (a, b) in self.products.iter().flatten() {
            known(a)?;
            known(b)?;
        }
        Ok(cases)
    }
}
