use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl OutputDigest {
    pub fn of(path: &str, data: &[u8]) -> Self {
        Self { path: path.into(), bytes: data.len(), sha256: format!("{:x}", Sha256::digest(data)) }
    }
}

/// Record of one run. Everything except `wall_time_s` is a function of the
/// command line, the config file and the code.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub versions: BTreeMap<&'static str, &'static str>,
    pub threads: usize,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
}

pub fn versions() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([("hyp-cli", env!("CARGO_PKG_VERSION"))])
}
