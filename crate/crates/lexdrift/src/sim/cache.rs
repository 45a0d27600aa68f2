//! On-disk response cache, one JSON file per request digest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::SimError;

/// Cache entry: the request body that was sent and the response content
/// extracted from the endpoint's reply.
#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub request: serde_json::Value,
    pub response: CachedResponse,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CachedResponse {
    pub content: String,
}

/// Digest of (model, prompt, seed, text digest); the cache filename stem.
pub fn request_key(model: &str, prompt: &str, seed: u64, text: &str) -> String {
    let text_digest = hex::encode(Sha256::digest(text.as_bytes()));
    let mut hasher = Sha256::new();
    // Length-prefix each part so no two field splits collide.
    for part in [model, prompt, &seed.to_string(), &text_digest] {
        hasher.update(part.len().to_le_bytes());
        hasher.update(part.as_bytes());
    }
    hex::encode(hasher.finalize())
}

pub fn entry_path(cache_dir: &Path, key: &str) -> PathBuf {
    cache_dir.join(format!("{key}.json"))
}

/// Loads a cache entry if present. A file that exists but fails to parse is
/// an error, not a miss: silently re-requesting would mask cache corruption.
pub fn load(cache_dir: &Path, key: &str) -> Result<Option<CacheEntry>, SimError> {
    let path = entry_path(cache_dir, key);
    let bytes = match fs::read(&path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let entry = serde_json::from_slice(&bytes).map_err(|e| SimError::CorruptCache {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(Some(entry))
}

/// Stores an entry atomically: write a temp file, then rename into place.
pub fn store(cache_dir: &Path, key: &str, entry: &CacheEntry) -> Result<(), SimError> {
    fs::create_dir_all(cache_dir)?;
    let final_path = entry_path(cache_dir, key);
    let tmp_path = cache_dir.join(format!(".{key}.tmp-{}", std::process::id()));
    let bytes = serde_json::to_vec_pretty(entry).map_err(std::io::Error::other)?;
    fs::write(&tmp_path, bytes)?;
    fs::rename(&tmp_path, &final_path)?;
    Ok(())
}
