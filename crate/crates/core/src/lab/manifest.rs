//! Run manifests: what was run, with which settings, and what it produced.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{LabError, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub version: String,
    pub started: String,
    pub finished: Option<String>,
    pub seed: Option<u64>,
    pub verdict: Option<Verdict>,
    /// Output name → SHA-256 of its bytes.
    pub outputs: BTreeMap<String, String>,
    /// Scalar results worth keeping next to the hashes.
    pub metrics: serde_json::Value,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn start(command: Vec<String>, config: BTreeMap<String, String>) -> Self {
        RunManifest {
            command,
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: now(),
            finished: None,
            seed: None,
            verdict: None,
            outputs: BTreeMap::new(),
            metrics: serde_json::Value::Null,
        }
    }

    pub fn record_output(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.outputs.insert(name.into(), sha256_hex(bytes));
    }

    pub fn finish(&mut self, verdict: Option<Verdict>, metrics: serde_json::Value) {
        self.verdict = verdict;
        self.metrics = metrics;
        self.finished = Some(now());
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), LabError> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<RunManifest, LabError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let mut m = RunManifest::start(vec!["kdvh".into(), "solve".into()], BTreeMap::from([("grid.N".into(), "64".into())]));
        m.seed = Some(3);
        m.record_output("out.csv", b"t,l2\n");
        m.finish(Some(Verdict::Pass), serde_json::json!({"drift": 1e-12}));
        m.write(&path).unwrap();
        assert_eq!(RunManifest::read(&path).unwrap(), m);
    }
}
