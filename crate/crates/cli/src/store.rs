//! Gröbner bases kept on disk, one JSON file per content hash.

use std::io::Write;
use std::path::PathBuf;

use atf_core::BasisStore;
use tempfile::NamedTempFile;

pub struct DiskStore {
    dir: PathBuf,
}

impl DiskStore {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(DiskStore { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn write(&self, key: &str, basis: &[String]) -> std::io::Result<()> {
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, basis)?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

impl BasisStore for DiskStore {
    fn load(&self, key: &str) -> Option<Vec<String>> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn save(&self, key: &str, basis: &[String]) {
        // a failed write only costs a recomputation later
        if let Err(e) = self.write(key, basis) {
            eprintln!("warning: cache write for {key} failed: {e}");
        }
    }
}
