//! Content-addressed completion cache on disk.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// One file per `(endpoint, prompt)` pair, named by the SHA-256 of both.
/// Writes go to a temporary file that is renamed into place, so concurrent
/// readers never see a partial entry.
#[derive(Debug, Clone)]
pub struct CompletionCache {
    dir: PathBuf,
}

impl CompletionCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(CompletionCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(endpoint_id: &str, prompt: &str) -> String {
        let mut h = Sha256::new();
        h.update(endpoint_id.as_bytes());
        h.update([0u8]);
        h.update(prompt.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.txt"))
    }

    pub fn get(&self, key: &str) -> io::Result<Option<String>> {
        match fs::read_to_string(self.path(key)) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn put(&self, key: &str, completion: &str) -> io::Result<()> {
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self
            .dir
            .join(format!(".{key}.{}.{n}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(completion.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, self.path(key))
    }
}
