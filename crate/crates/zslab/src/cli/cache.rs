//! Content-addressed result cache.
//!
//! A cache entry keys on the sha256 of the canonical request encoding
//! (tool version included, so version bumps miss by design) and stores the
//! result document verbatim. Writes are atomic (temp file + rename);
//! corrupt entries are recomputed with a warning, never trusted.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    digest: String,
    version: String,
    timestamp: u64,
    exit: i32,
    result: Value,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub(super) fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex(&Sha256::digest(&bytes)))
}

fn request_digest(request: &Value) -> String {
    let canonical = serde_json::to_string(request).expect("serializable request");
    hex(&Sha256::digest(canonical.as_bytes()))
}

fn read_entry(path: &Path, digest: &str) -> Option<(Value, i32)> {
    let text = std::fs::read_to_string(path).ok()?;
    let entry: CacheEntry = serde_json::from_str(&text).ok()?;
    if entry.digest != digest || entry.version != env!("CARGO_PKG_VERSION") {
        return None;
    }
    Some((entry.result, entry.exit))
}

/// Look up the request; on a miss run `compute`, store atomically, return.
pub(super) fn get_or_compute(
    dir: &Path,
    request: &Value,
    compute: impl FnOnce() -> Result<(Value, i32)>,
) -> Result<(Value, i32)> {
    let digest = request_digest(request);
    let path = dir.join(format!("{digest}.json"));
    if path.exists() {
        match read_entry(&path, &digest) {
            Some(hit) => return Ok(hit),
            None => eprintln!(
                "warning: cache entry {} is corrupt or stale; recomputing",
                path.display()
            ),
        }
    }
    let (result, exit) = compute()?;
    std::fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        digest: digest.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        exit,
        result: result.clone(),
    };
    let tmp = dir.join(format!(".{digest}.tmp.{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_string_pretty(&entry)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok((result, exit))
}
