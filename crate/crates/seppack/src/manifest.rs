//! Run manifests: what was run, on which inputs, with which verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// Arguments after the program name, without `--manifest`.
    pub command: Vec<String>,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    /// SHA-256 of every file read (`inputs`) and written (`outputs`), by path.
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub exit_code: i32,
    /// The machine-readable report of the run.
    pub verdicts: Value,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
