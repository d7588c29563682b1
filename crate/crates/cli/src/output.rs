//! Output sets that vanish unless committed, and the run manifest.

use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, shown_as: String) -> Result<Self> {
        Ok(FileDigest {
            path: shown_as,
            sha256: sha256_file(path)?,
        })
    }
}

/// What was run, on what, and what came out.
///
/// Holds nothing that depends on scheduling or wall-clock time, so two
/// runs with equal inputs and flags produce equal manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<FileDigest>,
    /// Effective settings after defaults and overrides.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    /// Paths relative to the manifest's directory.
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs: Vec::new(),
            config,
            seed: None,
            mode: None,
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(FileDigest::of(path, path.display().to_string())?);
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(format!("{:x}", h.finalize()))
}

/// Files written into one directory by a single command.
///
/// Dropping an uncommitted set deletes everything it wrote, including
/// directories it created, so a failed run leaves no partial results.
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<PathBuf>,
    created_dirs: Vec<PathBuf>,
    committed: bool,
}

impl OutputSet {
    pub fn new(dir: &Path) -> Result<Self> {
        let mut set = OutputSet {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            created_dirs: Vec::new(),
            committed: false,
        };
        set.ensure_dir(dir)?;
        Ok(set)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn ensure_dir(&mut self, dir: &Path) -> Result<()> {
        let missing: Vec<PathBuf> = dir
            .ancestors()
            .filter(|p| !p.as_os_str().is_empty() && !p.exists())
            .map(Path::to_path_buf)
            .collect();
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        self.created_dirs.extend(missing);
        Ok(())
    }

    /// Open `rel` for writing, creating parent directories as needed.
    pub fn create(&mut self, rel: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(rel);
        if let Some(parent) = path.parent() {
            let parent = parent.to_path_buf();
            self.ensure_dir(&parent)?;
        }
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.files.push(path);
        Ok(BufWriter::new(f))
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let mut w = self.create(rel)?;
        w.write_all(bytes)?;
        w.flush()?;
        Ok(())
    }

    /// Checksums of everything written so far, re-read from disk, in
    /// path order.
    pub fn digests(&self) -> Result<Vec<FileDigest>> {
        let mut out = Vec::with_capacity(self.files.len());
        for p in &self.files {
            let rel = p.strip_prefix(&self.dir).unwrap_or(p);
            let shown = rel.to_string_lossy().replace('\\', "/");
            out.push(FileDigest::of(p, shown)?);
        }
        out.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(out)
    }

    /// Record output checksums in `manifest`, write it as `name`, and keep
    /// the whole set.
    pub fn finish(mut self, mut manifest: RunManifest, name: &str) -> Result<()> {
        manifest.outputs = self.digests()?;
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        self.write(name, json.as_bytes())?;
        // validate: the manifest must read back to what was written
        let back = RunManifest::read(&self.dir.join(name))?;
        anyhow::ensure!(back == manifest, "manifest {} did not round-trip", name);
        self.committed = true;
        Ok(())
    }

    fn discard(&mut self) -> io::Result<()> {
        for f in self.files.drain(..).rev() {
            match fs::remove_file(&f) {
                Err(e) if e.kind() != io::ErrorKind::NotFound => return Err(e),
                _ => {}
            }
        }
        let mut dirs: Vec<PathBuf> = self.created_dirs.drain(..).collect();
        dirs.sort_by_key(|d| std::cmp::Reverse(d.components().count()));
        for d in dirs {
            let _ = fs::remove_dir(&d);
        }
        Ok(())
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if !self.committed {
            if let Err(e) = self.discard() {
                log::error!("could not remove partial outputs in {}: {e}", self.dir.display());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncommitted_outputs_are_removed() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().join("a/b");
        {
            let mut set = OutputSet::new(&dir).unwrap();
            set.write("x.csv", b"1\n").unwrap();
            set.write("sub/y.csv", b"2\n").unwrap();
            assert!(dir.join("sub/y.csv").exists());
        }
        assert!(!tmp.path().join("a").exists());
    }

    #[test]
    fn committed_outputs_stay_and_are_listed() {
        let tmp = tempfile::tempdir().unwrap();
        let mut set = OutputSet::new(tmp.path()).unwrap();
        set.write("b.csv", b"b").unwrap();
        set.write("a.csv", b"a").unwrap();
        set.finish(RunManifest::new("test", serde_json::Value::Null), MANIFEST_NAME)
            .unwrap();
        let m = RunManifest::read(&tmp.path().join(MANIFEST_NAME)).unwrap();
        let names: Vec<_> = m.outputs.iter().map(|d| d.path.as_str()).collect();
        assert_eq!(names, ["a.csv", "b.csv"]);
        assert_eq!(
            m.outputs[0].sha256,
            "ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb"
        );
    }
}
