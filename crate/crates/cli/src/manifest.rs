use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// Record written as `manifest.json` next to every command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub duration_secs: f64,
    /// Paths relative to the output directory.
    pub outputs: Vec<String>,
}

/// Collects the files a command writes under one output directory.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        for sub in ["graphs", "tables"] {
            fs::create_dir_all(root.join(sub)).with_context(|| format!("creating {}", root.join(sub).display()))?;
        }
        Ok(OutputDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, rel: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.root.join(rel);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(rel.to_string());
        Ok(())
    }

    pub fn finish(self, command: &str, config: Value, seed: Option<u64>, started: Instant) -> Result<()> {
        let manifest = RunManifest {
            command: command.to_string(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            duration_secs: started.elapsed().as_secs_f64(),
            outputs: self.written,
        };
        let path = self.root.join("manifest.json");
        fs::write(&path, pretty(&serde_json::to_value(&manifest)?))
            .with_context(|| format!("writing {}", path.display()))
    }
}

/// Pretty JSON with a trailing newline, the form every command prints.
pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}
