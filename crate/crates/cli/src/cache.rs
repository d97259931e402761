//! Append-only JSON-lines result cache. The last record per
//! `(group_key, kind)` wins; unreadable lines are skipped with a warning.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use zerosum_core::zero_sum::Method;
use zerosum_core::Group;

pub const CACHE_ENV: &str = "ZEROSUM_CACHE";

/// Which constant a record holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    D,
    Ds(u64),
    Zs,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::D => f.write_str("D"),
            Kind::Ds(s) => write!(f, "D_s({s})"),
            Kind::Zs => f.write_str("ZS"),
        }
    }
}

impl FromStr for Kind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "D" => Ok(Kind::D),
            "ZS" => Ok(Kind::Zs),
            _ => {
                let inner = s
                    .strip_prefix("D_s(")
                    .and_then(|r| r.strip_suffix(')'))
                    .with_context(|| format!("unknown kind {s:?}"))?;
                Ok(Kind::Ds(inner.parse().with_context(|| format!("bad s in {s:?}"))?))
            }
        }
    }
}

impl Serialize for Kind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Kind, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub group_key: String,
    pub kind: Kind,
    pub value: u64,
    pub method: Method,
    /// False for certified lower bounds from truncated searches.
    pub exact: bool,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CacheRecord {
    pub fn new(group: &Group, kind: Kind, value: u64, method: Method, exact: bool) -> CacheRecord {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        CacheRecord { group_key: group.to_string(), kind, value, method, exact, timestamp }
    }

    fn check(&self) -> Result<()> {
        let g: Group = self.group_key.parse().with_context(|| format!("bad group key {:?}", self.group_key))?;
        if g.to_string() != self.group_key {
            bail!("group key {:?} is not normalized", self.group_key);
        }
        Ok(())
    }
}

pub struct Cache {
    path: PathBuf,
}

/// Records by key plus warnings about skipped lines.
pub struct Loaded {
    pub records: HashMap<(String, Kind), CacheRecord>,
    pub warnings: Vec<String>,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Cache {
        Cache { path: path.into() }
    }

    /// Flag, then `ZEROSUM_CACHE`, then the platform data directory.
    pub fn resolve(flag: Option<&Path>) -> Option<Cache> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| dirs::data_dir().map(|d| d.join("zerosum").join("cache.jsonl")))
            .map(Cache::new)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn load(&self) -> Result<Loaded> {
        let mut loaded = Loaded { records: HashMap::new(), warnings: Vec::new() };
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(loaded),
            Err(e) => return Err(e).with_context(|| format!("opening cache {}", self.path.display())),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    loaded.warnings.push(format!("line {}: {e}", i + 1));
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line).map_err(anyhow::Error::from).and_then(|r| r.check().map(|_| r)) {
                Ok(r) => {
                    loaded.records.insert((r.group_key.clone(), r.kind), r);
                }
                Err(e) => loaded.warnings.push(format!("line {}: {e}", i + 1)),
            }
        }
        Ok(loaded)
    }

    /// The newest exact record for a key.
    pub fn lookup(&self, group: &Group, kind: Kind) -> Result<(Option<CacheRecord>, Vec<String>)> {
        let mut loaded = self.load()?;
        let rec = loaded.records.remove(&(group.to_string(), kind)).filter(|r| r.exact);
        Ok((rec, loaded.warnings))
    }

    /// Appends one line under an exclusive advisory lock.
    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {}", self.path.display()))?;
        file.lock().context("locking cache")?;
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let written = file.write_all(line.as_bytes()).and_then(|_| file.flush());
        file.unlock().context("unlocking cache")?;
        written.context("writing cache")
    }
}
