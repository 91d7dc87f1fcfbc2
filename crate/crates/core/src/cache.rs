//! On-disk cache of character tables, one JSON file per group table hash.
//!
//! Files are written to a temporary name in the same directory and renamed
//! into place, so concurrent writers never expose a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::{character_table, CharacterTable};
use crate::error::CacheError;
use crate::group::{conjugacy_classes, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CachedTable {
    pub group_hash: String,
    pub degrees: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// Row-major `[irrep][class]`, each entry `[re, im]`.
    pub values: Vec<[f64; 2]>,
}

impl CachedTable {
    pub fn from_table(table: &CharacterTable) -> Self {
        CachedTable {
            group_hash: table.group_hash.clone(),
            degrees: table.degrees.clone(),
            class_sizes: table.classes.sizes.clone(),
            values: table.values.iter().flatten().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Rebuilds the table for `g`, checking that the entry belongs to it.
    pub fn into_table(self, g: &FiniteGroup) -> Result<CharacterTable, CacheError> {
        let hash = g.table_hash();
        if self.group_hash != hash {
            return Err(CacheError::Stale(format!("hash {} does not match {hash}", self.group_hash)));
        }
        let classes = conjugacy_classes(g);
        if classes.sizes != self.class_sizes {
            return Err(CacheError::Stale("class sizes differ".into()));
        }
        let k = classes.count();
        if self.degrees.len() != k || self.values.len() != k * k {
            return Err(CacheError::Stale("table shape differs".into()));
        }
        let values =
            self.values.chunks(k).map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
        let table = CharacterTable { order: g.order(), group_hash: hash, classes, degrees: self.degrees, values };
        table.validate()?;
        Ok(table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    /// `Ok(None)` when no entry exists.
    pub fn load(&self, g: &FiniteGroup) -> Result<Option<CharacterTable>, CacheError> {
        let path = self.path_for(&g.table_hash());
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let cached: CachedTable = serde_json::from_str(&text)?;
        cached.into_table(g).map(Some)
    }

    pub fn store(&self, table: &CharacterTable) -> Result<PathBuf, CacheError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&table.group_hash);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &CachedTable::from_table(table))?;
        tmp.flush()?;
        tmp.persist(&path).map_err(|e| CacheError::Io(e.error))?;
        Ok(path)
    }

    /// Loads the table for `g`, computing and storing it on a miss or when
    /// the stored entry is unreadable. The flag reports a cache hit.
    pub fn get_or_compute(&self, g: &FiniteGroup) -> Result<(CharacterTable, bool), CacheError> {
        match self.load(g) {
            Ok(Some(table)) => return Ok((table, true)),
            Ok(None) | Err(CacheError::Stale(_)) | Err(CacheError::Json(_)) | Err(CacheError::Rep(_)) => {}
            Err(e) => return Err(e),
        }
        let table = character_table(g)?;
        self.store(&table)?;
        Ok((table, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::evaluate;
    use crate::harmonic::johnson_am;

    #[test]
    fn roundtrip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let g = evaluate("S4").unwrap();
        let (fresh, hit) = cache.get_or_compute(&g).unwrap();
        assert!(!hit);
        let (loaded, hit) = cache.get_or_compute(&g).unwrap();
        assert!(hit);
        assert_eq!(fresh, loaded);
        assert_eq!(johnson_am(&fresh), johnson_am(&loaded));
    }

    #[test]
    fn rejects_entry_for_another_group() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let d4 = evaluate("D4").unwrap();
        let q8 = evaluate("Q8").unwrap();
        let path = cache.store(&character_table(&d4).unwrap()).unwrap();
        fs::copy(&path, cache.path_for(&q8.table_hash())).unwrap();
        assert!(matches!(cache.load(&q8), Err(CacheError::Stale(_))));
        let (table, hit) = cache.get_or_compute(&q8).unwrap();
        assert!(!hit);
        assert_eq!(table.group_hash, q8.table_hash());
        assert!(cache.load(&q8).unwrap().is_some());
    }

    #[test]
    fn missing_entry() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path().join("nested"));
        assert!(cache.load(&evaluate("C3").unwrap()).unwrap().is_none());
    }
}
