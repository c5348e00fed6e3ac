use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::Result;

pub const METADATA_FILE: &str = "metadata.json";

/// Hex SHA-256 of the canonical TOML form of a config, ignoring where the
/// output goes.
pub fn config_hash(cfg: &RunConfig) -> String {
    let mut cfg = cfg.clone();
    cfg.output.dir = Default::default();
    Sha256::digest(cfg.to_toml().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Output directory of one command. Files are listed in the metadata sidecar
/// written by [`OutputDir::finish`].
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `name` through `body`, buffered.
    pub fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let mut out = BufWriter::new(File::create(self.path(name))?);
        body(&mut out)?;
        out.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Writes a CSV table from a header and rows of numbers, in full precision.
    pub fn table(&mut self, name: &str, header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
        self.write(name, |out| {
            writeln!(out, "{header}")?;
            for row in rows {
                let line: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
                writeln!(out, "{}", line.join(","))?;
            }
            Ok(())
        })
    }

    /// Registers a file written elsewhere (e.g. streamed during a run).
    pub fn register(&mut self, name: &str) {
        self.files.push(name.to_string());
    }

    pub fn finish(self, command: &str, cfg: &RunConfig, seeds: &[u64], summary: impl Serialize) -> Result<PathBuf> {
        let meta = json!({
            "command": command,
            "code_version": env!("CARGO_PKG_VERSION"),
            "modules": {
                "model": env!("CARGO_PKG_VERSION"),
                "semiclassical": env!("CARGO_PKG_VERSION"),
                "quantum": env!("CARGO_PKG_VERSION"),
                "analysis": env!("CARGO_PKG_VERSION"),
                "cli": env!("CARGO_PKG_VERSION"),
            },
            "config_hash": config_hash(cfg),
            "engine": cfg.engine.as_str(),
            "seed": cfg.seed,
            "seeds": seeds,
            "params": cfg.params,
            "fock_dim": cfg.numerics.fock_dim,
            "dt": cfg.numerics.dt,
            "scheme": cfg.numerics.scheme.as_str(),
            "config": cfg,
            "files": self.files,
            "summary": serde_json::to_value(summary)?,
        });
        let path = self.path(METADATA_FILE);
        let mut out = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut out, &meta)?;
        writeln!(out)?;
        out.flush()?;
        Ok(path)
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

/// Reads a metadata sidecar back.
pub fn read_metadata(dir: &Path) -> Result<Value> {
    Ok(serde_json::from_reader(File::open(dir.join(METADATA_FILE))?)?)
}
