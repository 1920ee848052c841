//! On-disk cache of per-`k` results, one JSON file per key.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join(format!("{key}-v{}.json", env!("CARGO_PKG_VERSION")))
    }

    /// Returns the cached value for `key`, computing and storing it on a miss.
    /// Unreadable entries are recomputed and overwritten.
    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = Self::path(dir, key);
        if let Ok(bytes) = fs::read(&path) {
            if let Ok(v) = serde_json::from_slice(&bytes) {
                return Ok(v);
            }
        }
        let value = compute()?;
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&value).expect("cache values serialize"))?;
        fs::rename(&tmp, &path)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let a: Vec<u32> = cache.get_or_compute("x", || Ok(vec![1, 2])).unwrap();
        let b: Vec<u32> = cache.get_or_compute("x", || panic!("should hit")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn corrupt_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        fs::write(Cache::path(dir.path(), "y"), b"not json").unwrap();
        let v: u32 = cache.get_or_compute("y", || Ok(7)).unwrap();
        assert_eq!(v, 7);
        let v: u32 = cache.get_or_compute("y", || Ok(8)).unwrap();
        assert_eq!(v, 7);
    }
}
