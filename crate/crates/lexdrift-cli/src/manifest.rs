//! Run manifests: what a command read, with what parameters, under what
//! tool version. Input digests let a later run prove its inputs were
//! identical; the timestamp is the only field outside that guarantee, and
//! honoring SOURCE_DATE_EPOCH pins even it.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    /// Input path -> sha256 of its bytes.
    pub input_digests: BTreeMap<String, String>,
    /// Full effective configuration, defaults included.
    pub parameters: serde_json::Value,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            argv: std::env::args().collect(),
            input_digests: BTreeMap::new(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> anyhow::Result<()> {
        let digest = digest_file(path)?;
        self.input_digests.insert(path.display().to_string(), digest);
        Ok(())
    }

    /// Writes manifest_<command>.json into `out_dir`.
    pub fn write(&self, out_dir: &Path) -> anyhow::Result<PathBuf> {
        let path = out_dir.join(format!("manifest_{}.json", self.command));
        let mut file = File::create(&path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        serde_json::to_writer_pretty(&mut file, self)?;
        file.write_all(b"\n")?;
        Ok(path)
    }
}

pub fn digest_file(path: &Path) -> anyhow::Result<String> {
    let mut file =
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

fn timestamp() -> String {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Some(t) = epoch
            .parse::<i64>()
            .ok()
            .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        {
            return t.to_rfc3339_opts(SecondsFormat::Secs, true);
        }
    }
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}
