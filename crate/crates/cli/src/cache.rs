//! Content-addressed on-disk cache of operad structures.
//!
//! An entry is a JSON file named by the SHA-256 of (tool version,
//! presentation text, maximal arity, ring). It stores the operad together
//! with the digest of its serialization, so a truncated or edited file is
//! detected and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use opk_core::exact_linalg::CoefficientRing;
use opk_core::sigma_operads::OperadStructure;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_FORMAT: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
struct Entry {
    format: u32,
    tool_version: String,
    key: String,
    digest: String,
    operad: OperadStructure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Off,
    Hit,
    Miss,
    /// An entry was present but failed validation.
    Invalid,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn cache_key(source: &str, max_arity: usize, ring: CoefficientRing) -> String {
    let mut h = Sha256::new();
    for part in [TOOL_VERSION, source, &max_arity.to_string(), &ring.name()] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("operad-{key}.json"))
}

/// Loads an entry. `Err` carries the reason an existing entry was rejected.
pub fn cache_load(dir: &Path, key: &str) -> Result<Option<OperadStructure>, String> {
    let path = entry_path(dir, key);
    let Ok(bytes) = fs::read(&path) else {
        return Ok(None);
    };
    let entry: Entry = serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    if entry.format != CACHE_FORMAT || entry.tool_version != TOOL_VERSION || entry.key != key {
        return Err(format!("{}: stale entry", path.display()));
    }
    let body = serde_json::to_vec(&entry.operad).map_err(|e| e.to_string())?;
    if sha256_hex(&body) != entry.digest {
        return Err(format!("{}: digest mismatch", path.display()));
    }
    Ok(Some(entry.operad))
}

pub fn cache_store(dir: &Path, key: &str, operad: &OperadStructure) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let body = serde_json::to_vec(operad)?;
    let entry = Entry {
        format: CACHE_FORMAT,
        tool_version: TOOL_VERSION.to_string(),
        key: key.to_string(),
        digest: sha256_hex(&body),
        operad: operad.clone(),
    };
    let path = entry_path(dir, key);
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(&entry)?)?;
    fs::rename(tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use opk_core::sigma_operads::{preset, quadratic_quotient};

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let ring = CoefficientRing::Integers;
        let lie = quadratic_quotient(&preset("lie").unwrap(), ring, 5).unwrap();
        let key = cache_key("lie", 5, ring);
        assert_eq!(cache_load(dir.path(), &key), Ok(None));
        cache_store(dir.path(), &key, &lie).unwrap();
        assert_eq!(cache_load(dir.path(), &key).unwrap().unwrap(), lie);
        let path = entry_path(dir.path(), &key);
        let text = fs::read_to_string(&path).unwrap();
        let digest_at = text.find("\"digest\":\"").unwrap() + 10;
        let mut bytes = text.into_bytes();
        bytes[digest_at] = if bytes[digest_at] == b'0' { b'1' } else { b'0' };
        fs::write(&path, bytes).unwrap();
        assert!(cache_load(dir.path(), &key).is_err());
        fs::write(&path, b"{not json").unwrap();
        assert!(cache_load(dir.path(), &key).is_err());
    }

    #[test]
    fn keys_separate_inputs() {
        let z = CoefficientRing::Integers;
        assert_ne!(cache_key("a", 4, z), cache_key("a", 5, z));
        assert_ne!(cache_key("a", 4, z), cache_key("a", 4, CoefficientRing::Rationals));
        assert_ne!(cache_key("ab", 4, z), cache_key("a", 4, z));
    }
}
