//! On-disk cache for expensive sequences. Purely an optimization: a miss,
//! a stale entry, or an unwritable directory all fall back to recomputing.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Bumped whenever a payload layout or generator changes meaning.
pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "TMWORDS_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub generator: String,
    pub parameters: String,
    pub length: usize,
}

impl CacheKey {
    pub fn new(generator: &str, parameters: &str, length: usize) -> Self {
        Self {
            generator: generator.into(),
            parameters: parameters.into(),
            length,
        }
    }

    fn file_name(&self) -> String {
        let clean = |s: &str| -> String {
            s.chars()
                .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                .collect()
        };
        format!(
            "{}-{}-{}.json",
            clean(&self.generator),
            clean(&self.parameters),
            self.length
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub format_version: u32,
    pub key: CacheKey,
    pub payload: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheStat {
    pub dir: Option<String>,
    pub entries: usize,
    pub bytes: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
        }
    }

    /// `$TMWORDS_CACHE_DIR`, else `$XDG_CACHE_HOME/tmwords`, else
    /// `$HOME/.cache/tmwords`.
    pub fn from_env() -> Self {
        let var = |name: &str| std::env::var_os(name).filter(|v| !v.is_empty());
        let dir = var(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| var("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("tmwords")))
            .or_else(|| var("HOME").map(|d| PathBuf::from(d).join(".cache").join("tmwords")));
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn get_or_compute<T, E>(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(key.file_name());
        if let Some(hit) = read_entry::<T>(&path, key) {
            return Ok(hit);
        }
        let payload = compute()?;
        let entry = CacheEntry {
            format_version: FORMAT_VERSION,
            key: key.clone(),
            payload,
        };
        let _ = write_entry(dir, &path, &entry);
        Ok(entry.payload)
    }

    fn json_files(&self) -> io::Result<Vec<PathBuf>> {
        let Some(dir) = &self.dir else {
            return Ok(Vec::new());
        };
        let entries = match fs::read_dir(dir) {
            Ok(e) => e,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        let mut out = Vec::new();
        for entry in entries {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn stat(&self) -> io::Result<CacheStat> {
        let files = self.json_files()?;
        let mut bytes = 0;
        for f in &files {
            bytes += fs::metadata(f)?.len();
        }
        Ok(CacheStat {
            dir: self.dir.as_ref().map(|d| d.display().to_string()),
            entries: files.len(),
            bytes,
        })
    }

    /// Removes every entry; returns how many were removed.
    pub fn clear(&self) -> io::Result<usize> {
        let files = self.json_files()?;
        for f in &files {
            fs::remove_file(f)?;
        }
        Ok(files.len())
    }
}

fn read_entry<T: DeserializeOwned>(path: &Path, key: &CacheKey) -> Option<T> {
    let bytes = fs::read(path).ok()?;
    let entry: CacheEntry<T> = serde_json::from_slice(&bytes).ok()?;
    (entry.format_version == FORMAT_VERSION && entry.key == *key).then_some(entry.payload)
}

fn write_entry<T: Serialize>(dir: &Path, path: &Path, entry: &CacheEntry<T>) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(entry).map_err(io::Error::other)?)?;
    fs::rename(&tmp, path)
}
