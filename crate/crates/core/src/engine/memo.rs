use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use super::recursion::StateCache;
use crate::error::{Error, Result};
use crate::profiles::{CanonicalKey, Family};
use crate::scalars::{format_rational, parse_rational, Rational};

const CACHE_FORMAT: &str = "wpvol-memo";
pub const CACHE_VERSION: u32 = 1;

/// Shared write-once table of normalized volumes keyed by canonical
/// profile.
#[derive(Debug, Default)]
pub struct MemoTable {
    entries: RwLock<HashMap<CanonicalKey, Rational>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    entries: BTreeMap<String, String>,
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<Rational> {
        self.entries.read().get(key).cloned()
    }

    /// Inserts unless the key is present. An existing entry is never
    /// replaced; a conflicting value is a logic error.
    pub fn insert(&self, key: CanonicalKey, value: Rational) {
        let mut map = self.entries.write();
        match map.get(&key) {
            Some(old) => debug_assert_eq!(old, &value, "memo conflict for {key}"),
            None => {
                map.insert(key, value);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.read().is_empty()
    }

    pub fn clear(&self) {
        self.entries.write().clear();
    }

    pub fn snapshot(&self) -> BTreeMap<CanonicalKey, Rational> {
        self.entries
            .read()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = CacheFile {
            format: CACHE_FORMAT.to_string(),
            version: CACHE_VERSION,
            entries: self
                .snapshot()
                .into_iter()
                .map(|(k, v)| (k.to_string(), format_rational(&v)))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("cache serializes")
    }

    /// Parses a cache document. Blank input is an empty cache.
    pub fn parse_json(text: &str) -> Result<Vec<(CanonicalKey, Rational)>> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        let file: CacheFile =
            serde_json::from_str(text).map_err(|e| Error::Cache(format!("unreadable cache: {e}")))?;
        if file.format != CACHE_FORMAT {
            return Err(Error::Cache(format!("not a volume cache (format `{}`)", file.format)));
        }
        if file.version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "cache version {} not supported (expected {CACHE_VERSION})",
                file.version
            )));
        }
        file.entries
            .iter()
            .map(|(k, v)| {
                let key: CanonicalKey = k
                    .parse()
                    .map_err(|e| Error::Cache(format!("bad key `{k}`: {e}")))?;
                let val = parse_rational(v).map_err(|e| Error::Cache(format!("bad value for `{k}`: {e}")))?;
                Ok((key, val))
            })
            .collect()
    }

    pub fn persist(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::Cache(format!("cannot write {}: {e}", path.display())))
    }

    /// Loads entries from `path`. Nothing is inserted unless the whole file
    /// parses. Returns the number of entries read.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Cache(format!("cannot read {}: {e}", path.display())))?;
        let entries = Self::parse_json(&text)?;
        let n = entries.len();
        for (k, v) in entries {
            self.insert(k, v);
        }
        Ok(n)
    }
}

/// Adapts the shared table to the class-state recursion of one family.
pub(crate) struct FamilyCache<'a> {
    pub table: &'a MemoTable,
    pub family: Family,
}

impl StateCache<Rational, Rational> for FamilyCache<'_> {
    fn lookup(&self, state: &[(Rational, usize)]) -> Option<Rational> {
        self.table.get(&key_of(self.family, state))
    }

    fn store(&self, state: &[(Rational, usize)], value: &Rational) {
        self.table.insert(key_of(self.family, state), value.clone());
    }
}

fn key_of(family: Family, state: &[(Rational, usize)]) -> CanonicalKey {
    let values = state
        .iter()
        .flat_map(|(v, c)| std::iter::repeat(v.clone()).take(*c))
        .collect();
    CanonicalKey::new(family, values)
}
