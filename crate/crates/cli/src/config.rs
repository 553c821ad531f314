//! Flat `key = value` experiment files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use the long
//! flag names; `-` and `_` are interchangeable. A value given on the command
//! line wins over the file, which wins over the built-in default. Keys that
//! no command consumes are rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

#[derive(Debug, Default)]
pub struct FileConfig {
    entries: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                Self::parse(&text).with_context(|| format!("in config file {}", p.display()))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("line {}: expected key = value, got {line:?}", lineno + 1);
            };
            let key = normalize_key(k);
            if key.is_empty() {
                bail!("line {}: empty key", lineno + 1);
            }
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                bail!("line {}: duplicate key {key}", lineno + 1);
            }
        }
        Ok(Self { entries })
    }

    /// Resolves `key`: the flag if given, else the file value, else `None`.
    /// The file entry is consumed either way.
    pub fn take<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let from_file = self.entries.remove(&normalize_key(key));
        if flag.is_some() {
            return Ok(flag);
        }
        from_file
            .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("config key {key}: invalid value {v:?}: {e}")))
            .transpose()
    }

    /// Like [`Self::take`] for values named by a clap enum.
    pub fn take_enum<T: ValueEnum>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let from_file = self.entries.remove(&normalize_key(key));
        if flag.is_some() {
            return Ok(flag);
        }
        from_file
            .map(|v| T::from_str(&v, false).map_err(|e| anyhow::anyhow!("config key {key}: {e}")))
            .transpose()
    }

    /// Like [`Self::take`] for boolean switches: a set flag wins, otherwise
    /// the file decides, otherwise `false`.
    pub fn take_switch(&mut self, key: &str, flag: bool) -> Result<bool> {
        let file = self.take::<bool>(key, None)?;
        Ok(flag || file.unwrap_or(false))
    }

    /// Fails if any key was not consumed.
    pub fn finish(self) -> Result<()> {
        if let Some(k) = self.entries.keys().next() {
            let all: Vec<&str> = self.entries.keys().map(String::as_str).collect();
            bail!("unknown config key {k:?} (unused keys: {})", all.join(", "));
        }
        Ok(())
    }
}

pub fn positive_usize(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        bail!("{name} must be positive");
    }
    Ok(v)
}

pub fn positive_f64(name: &str, v: f64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("{name} must be a positive finite number, got {v}");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let mut c = FileConfig::parse("# comment\n\ntosses = 12\nstrategy=never-bet\n").unwrap();
        assert_eq!(c.take::<usize>("tosses", None).unwrap(), Some(12));
        assert_eq!(c.take::<String>("strategy", Some("bet-on-last".into())).unwrap().unwrap(), "bet-on-last");
        c.finish().unwrap();
    }

    #[test]
    fn dashes_and_underscores_match() {
        let mut c = FileConfig::parse("dense-cap = 3").unwrap();
        assert_eq!(c.take::<usize>("dense_cap", None).unwrap(), Some(3));
    }

    #[test]
    fn rejects_bad_lines_and_unknown_keys() {
        assert!(FileConfig::parse("tosses").is_err());
        assert!(FileConfig::parse("a=1\na=2").is_err());
        assert!(FileConfig::parse(" = 3").is_err());
        let c = FileConfig::parse("bogus = 1").unwrap();
        assert!(c.finish().is_err());
        let mut c = FileConfig::parse("tosses = ten").unwrap();
        assert!(c.take::<usize>("tosses", None).is_err());
    }

    #[test]
    fn validators() {
        assert!(positive_usize("n", 0).is_err());
        assert!(positive_f64("e", 0.0).is_err());
        assert!(positive_f64("e", f64::INFINITY).is_err());
        assert_eq!(positive_f64("e", 0.5).unwrap(), 0.5);
    }
}
