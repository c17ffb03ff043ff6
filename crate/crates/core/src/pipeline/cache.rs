use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CACHE_VERSION: &str = "anticyclo-cache v1";

/// The exact artifacts kept between runs: the eigencocycle and enough of
/// the quotient graph to confirm it belongs to the graph rebuilt on load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: String,
    pub vertices: usize,
    pub edges: usize,
    pub mass: BigRational,
    pub cocycle: Vec<BigRational>,
}

/// Hash of everything that determines the quotient graph and the cocycle.
pub fn cache_key(n_minus: u64, n_plus: u64, p: u64, traces: &std::collections::BTreeMap<u64, i64>, bound: u64) -> String {
    let mut h = Sha256::new();
    h.update(format!("{n_minus} {n_plus} {p} {bound}\n"));
    for (l, a) in traces {
        h.update(format!("{l}:{a}\n"));
    }
    hex::encode(h.finalize())
}

pub fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{}.cache", &key[..16]))
}

fn checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl CacheEntry {
    pub fn to_text(&self) -> String {
        let vals: Vec<String> = self.cocycle.iter().map(|v| v.to_string()).collect();
        let body = format!(
            "{CACHE_VERSION}\nkey {}\nvertices {}\nedges {}\nmass {}\ncocycle {}\n",
            self.key,
            self.vertices,
            self.edges,
            self.mass,
            vals.join(" ")
        );
        let sum = checksum(&body);
        format!("{body}checksum {sum}\n")
    }

    pub fn from_text(text: &str) -> Result<CacheEntry> {
        let first = text.lines().next().unwrap_or("");
        if first != CACHE_VERSION {
            return Err(Error::VersionMismatch {
                found: first.to_string(),
                expected: format!("{CACHE_VERSION} (delete the file to rebuild it)"),
            });
        }
        let at = text.rfind("checksum ").ok_or_else(|| Error::CorruptCache("no checksum line".into()))?;
        let (body, tail) = text.split_at(at);
        if tail.trim_end() != format!("checksum {}", checksum(body)) {
            return Err(Error::CorruptCache("checksum mismatch".into()));
        }
        let mut fields = std::collections::BTreeMap::new();
        for line in body.lines().skip(1) {
            let (k, v) = line.split_once(' ').unwrap_or((line, ""));
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| Error::CorruptCache(format!("missing {k}")));
        let bad = |k: &str| Error::CorruptCache(format!("unreadable {k}"));
        let rat = |s: &str| BigRational::from_str(s).map_err(|_| bad("rational"));
        Ok(CacheEntry {
            key: get("key")?.to_string(),
            vertices: get("vertices")?.parse().map_err(|_| bad("vertices"))?,
            edges: get("edges")?.parse().map_err(|_| bad("edges"))?,
            mass: rat(get("mass")?)?,
            cocycle: get("cocycle")?.split_whitespace().map(rat).collect::<Result<_>>()?,
        })
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cache directory: {e}")))?;
        let path = cache_path(dir, &self.key);
        std::fs::write(&path, self.to_text()).map_err(|e| Error::Config(format!("cache write: {e}")))?;
        Ok(path)
    }

    /// `Ok(None)` when no entry exists for `key`.
    pub fn load(dir: &Path, key: &str) -> Result<Option<CacheEntry>> {
        let path = cache_path(dir, key);
        let Ok(text) = std::fs::read_to_string(&path) else {
            return Ok(None);
        };
        let entry = CacheEntry::from_text(&text)?;
        if entry.key != key {
            return Err(Error::CorruptCache(format!("{} holds a different key", path.display())));
        }
        Ok(Some(entry))
    }
}
