use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{io_error, CatalogError, Result};

/// On-disk certificate store keyed by descriptor string. Each entry is a
/// small JSON file named by the SHA-256 of the descriptor; writes go
/// through a temporary file and an atomic rename, so concurrent writers
/// never expose partial files.
#[derive(Debug)]
pub struct CertificateCache {
    dir: PathBuf,
    /// Every `spot_check_every`-th entry served from the cache is recomputed.
    spot_check_every: usize,
    hits: AtomicUsize,
    misses: AtomicUsize,
    spot_checks: AtomicUsize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub spot_checks: usize,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    descriptor: String,
    certificate: String,
}

impl CertificateCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_error(&dir))?;
        Ok(CertificateCache {
            dir,
            spot_check_every: 8,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
            spot_checks: AtomicUsize::new(0),
        })
    }

    pub fn with_spot_check_every(mut self, every: usize) -> Self {
        self.spot_check_every = every.max(1);
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, descriptor: &str) -> PathBuf {
        self.dir.join(format!("{}.json", hex::encode(Sha256::digest(descriptor.as_bytes()))))
    }

    pub fn get(&self, descriptor: &str) -> Result<Option<Vec<u8>>> {
        let path = self.path_for(descriptor);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                return Ok(None);
            }
            Err(e) => return Err(io_error(&path)(e)),
        };
        let stored: Stored =
            serde_json::from_str(&text).map_err(|source| CatalogError::Json { path: path.clone(), source })?;
        if stored.descriptor != descriptor {
            return Err(CatalogError::CacheCorrupt(descriptor.to_string()));
        }
        let bytes = hex::decode(&stored.certificate).map_err(|_| CatalogError::CacheCorrupt(descriptor.to_string()))?;
        self.hits.fetch_add(1, Ordering::Relaxed);
        Ok(Some(bytes))
    }

    pub fn put(&self, descriptor: &str, certificate: &[u8]) -> Result<()> {
        let path = self.path_for(descriptor);
        let stored = Stored { descriptor: descriptor.to_string(), certificate: hex::encode(certificate) };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_error(&self.dir))?;
        serde_json::to_writer(&mut tmp, &stored).map_err(|source| CatalogError::Json { path: path.clone(), source })?;
        tmp.flush().map_err(io_error(tmp.path()))?;
        tmp.persist(&path).map_err(|e| io_error(&path)(e.error))?;
        Ok(())
    }

    pub(crate) fn should_spot_check(&self, index: usize) -> bool {
        index % self.spot_check_every == 0
    }

    pub(crate) fn record_spot_check(&self) {
        self.spot_checks.fetch_add(1, Ordering::Relaxed);
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            spot_checks: self.spot_checks.load(Ordering::Relaxed),
        }
    }
}
