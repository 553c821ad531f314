//! JSON summaries and CSV files.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope shared by every JSON summary.
#[derive(Serialize)]
pub struct Summary<'a, C: Serialize, R: Serialize> {
    pub version: &'static str,
    pub command: &'a str,
    pub seed: Option<u64>,
    pub config: &'a C,
    pub result: R,
}

impl<'a, C: Serialize, R: Serialize> Summary<'a, C, R> {
    pub fn new(command: &'a str, seed: Option<u64>, config: &'a C, result: R) -> Self {
        Self {
            version: VERSION,
            command,
            seed,
            config,
            result,
        }
    }

    /// Pretty JSON to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_text(path, &text)
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
