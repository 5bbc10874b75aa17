//! JSON file cache for expensive density-route results. Entries are keyed by
//! the full parameter tuple plus the crate version; hits require an exact
//! key match, so lower-precision results are never substituted for
//! higher-precision requests. Writes are atomic (write temp, then rename).

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub value: serde_json::Value,
    pub certified_digits: Option<u32>,
    pub timestamp: u64,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Cache directory from the flag, else SEPKIT_CACHE_DIR, else none.
    pub fn resolve(flag: Option<&Path>) -> Option<Cache> {
        let dir = flag
            .map(|p| p.to_path_buf())
            .or_else(|| std::env::var_os("SEPKIT_CACHE_DIR").map(PathBuf::from))?;
        Some(Cache { dir })
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let safe: String = key
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect();
        self.dir.join(format!("{}.json", safe))
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        let text = std::fs::read_to_string(self.path_for(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        // exact key match only (defends against filename sanitization clashes)
        (entry.key == key).then_some(entry)
    }

    pub fn put(&self, key: &str, value: serde_json::Value, certified_digits: Option<u32>) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            key: key.to_string(),
            value,
            certified_digits,
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let target = self.path_for(key);
        let tmp = target.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&entry).unwrap())?;
        std::fs::rename(&tmp, &target)
    }
}

/// Key builder: operation name, crate version, then parameter pairs.
pub fn cache_key(op: &str, params: &[(&str, String)]) -> String {
    let mut key = format!("{}-v{}", op, env!("CARGO_PKG_VERSION"));
    for (name, value) in params {
        key.push_str(&format!("-{}={}", name, value));
    }
    key
}
