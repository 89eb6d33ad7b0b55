//! On-disk cache of emitted reports keyed by a content hash.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "ES_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".es-cache";

/// Hex SHA-256 of the computation name, its parameters, the output format
/// and the report-schema version.
pub fn cache_key(computation: &str, params: &BTreeMap<String, String>, format: &str, version: &str) -> String {
    let mut h = Sha256::new();
    for part in [computation, format, version] {
        h.update(part.as_bytes());
        h.update([0]);
    }
    for (k, v) in params {
        h.update(k.as_bytes());
        h.update([b'=']);
        h.update(v.as_bytes());
        h.update([0]);
    }
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `explicit`, else `$ES_CACHE_DIR`, else `.es-cache`.
    pub fn resolve(explicit: Option<&Path>) -> Self {
        match explicit {
            Some(p) => Cache::new(p),
            None => Cache::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_DIR.into())),
        }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    /// A missing or unreadable entry is a miss.
    pub fn load(&self, key: &str) -> Option<Vec<u8>> {
        fs::read(self.path(key)).ok()
    }

    /// Writes the payload and a JSON sidecar with the parameters, each via a
    /// temporary file and a rename.
    pub fn store(&self, key: &str, payload: &[u8], computation: &str, params: &BTreeMap<String, String>) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let sidecar = serde_json::json!({ "computation": computation, "params": params, "key": key });
        let sidecar = serde_json::to_vec_pretty(&sidecar).map_err(std::io::Error::other)?;
        self.write_atomic(&self.dir.join(format!("{key}.json")), &sidecar)?;
        self.write_atomic(&self.path(key), payload)
    }

    fn write_atomic(&self, target: &Path, bytes: &[u8]) -> std::io::Result<()> {
        let tmp = target.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn store_then_load_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let p = params(&[("x", "100")]);
        let key = cache_key("mean", &p, "json", "1");
        let payload = b"{\n  \"a\": 1.5\n}\n";
        c.store(&key, payload, "mean", &p).unwrap();
        assert_eq!(c.load(&key).unwrap(), payload);
        assert!(dir.path().join(format!("{key}.json")).exists());
    }

    #[test]
    fn unknown_key_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        assert!(Cache::new(dir.path().join("absent")).load("00").is_none());
    }

    #[test]
    fn key_depends_on_every_input() {
        let p = params(&[("x", "100")]);
        let base = cache_key("mean", &p, "json", "1");
        assert_ne!(base, cache_key("mean", &params(&[("x", "101")]), "json", "1"));
        assert_ne!(base, cache_key("weightsum", &p, "json", "1"));
        assert_ne!(base, cache_key("mean", &p, "csv", "1"));
        assert_ne!(base, cache_key("mean", &p, "json", "2"));
        assert_eq!(base, cache_key("mean", &p, "json", "1"));
        assert_eq!(base.len(), 64);
    }
}
