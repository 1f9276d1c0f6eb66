//! Output files: run metadata, JSON and CSV encodings, atomic writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::engine::Quadrature;
use crate::lab::Window;

pub fn config_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parameters embedded in every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub config_hash: String,
    pub subcommand: String,
    pub weight_id: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub quadrature: Quadrature,
    pub window: Window,
}

impl Meta {
    pub fn csv_comment(&self) -> String {
        format!(
            "# config_hash={} subcommand={} weight_id={} N={} M={} window={}:{}\n",
            self.config_hash,
            self.subcommand,
            self.weight_id,
            self.n,
            self.m,
            self.window.lo,
            self.window.hi
        )
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    meta: &'a Meta,
    result: &'a T,
}

pub fn json_document<T: Serialize>(meta: &Meta, result: &T) -> Result<Vec<u8>, String> {
    let mut bytes = serde_json::to_vec_pretty(&Envelope { meta, result })
        .map_err(|e| format!("output: {e}"))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Rows `n, re, im, abs` of a coefficient list.
pub fn coefficient_csv(meta: &Meta, values: &[Complex64]) -> Vec<u8> {
    let mut out = meta.csv_comment();
    out.push_str("n,re,im,abs\n");
    for (n, v) in values.iter().enumerate() {
        // Adding 0.0 turns -0 into 0.
        let _ = writeln!(out, "{n},{:?},{:?},{:?}", v.re + 0.0, v.im + 0.0, v.norm());
    }
    out.into_bytes()
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), String> {
    let fail = |e: std::io::Error| format!("output: {}: {e}", dir.join(name).display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(dir.join(name)).map_err(|e| fail(e.error))?;
    Ok(())
}
