//! On-disk cache for search results.
//!
//! Each entry is a JSON envelope holding a format tag, the payload and a
//! SHA-256 of the payload's compact JSON. Entries whose check does not match
//! are ignored, and callers re-verify whatever they load.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CACHE_ENV: &str = "STEINERFLOW_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".steinerflow-cache";

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    check: String,
    payload: serde_json::Value,
}

fn check_of(payload: &serde_json::Value) -> String {
    let compact = serde_json::to_string(payload).expect("json value serializes");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

/// Cache directory from the environment, falling back to the default.
pub fn dir_from_env() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

pub fn load<T: DeserializeOwned>(dir: &Path, name: &str, format: &str) -> Option<T> {
    let text = fs::read_to_string(dir.join(name)).ok()?;
    let env: Envelope = serde_json::from_str(&text).ok()?;
    if env.format != format || env.check != check_of(&env.payload) {
        return None;
    }
    serde_json::from_value(env.payload).ok()
}

pub fn store<T: Serialize>(dir: &Path, name: &str, format: &str, payload: &T) -> Result<()> {
    fs::create_dir_all(dir)?;
    let payload = serde_json::to_value(payload)?;
    let env = Envelope { format: format.to_string(), check: check_of(&payload), payload };
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&env)?)?;
    fs::rename(tmp, dir.join(name))?;
    Ok(())
}
