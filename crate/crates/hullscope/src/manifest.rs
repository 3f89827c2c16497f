//! Run manifests: enough metadata alongside every output to rerun it.

use chrono::{DateTime, Utc};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Sorted key-value parameters; equality of manifests (ignoring the
    /// timestamps) implies equality of result payloads.
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub tool_version: String,
    pub started: DateTime<Utc>,
    pub finished: Option<DateTime<Utc>>,
}

impl RunManifest {
    pub fn new(subcommand: impl Into<String>) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            params: BTreeMap::new(),
            seed: 0,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            started: Utc::now(),
            finished: None,
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn finish(&mut self) {
        self.finished = Some(Utc::now());
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("manifest serialization is infallible")
    }

    /// Sidecar path for an output file: `<out>.manifest.json`.
    pub fn sidecar_path(out: &Path) -> PathBuf {
        let mut name = out.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        out.with_file_name(name)
    }

    /// Write the sidecar next to `out`.
    pub fn write_alongside(&self, out: &Path) -> Result<PathBuf> {
        let path = Self::sidecar_path(out);
        std::fs::write(&path, serde_json::to_vec_pretty(self).unwrap())?;
        Ok(path)
    }
}
