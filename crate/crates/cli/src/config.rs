use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

/// Output encoding of a document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Settings shared by every command. Command-line flags override the
/// config file, which overrides the defaults below.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub jobs: usize,
    pub format: Format,
    /// witness primes must exceed this
    pub c: u64,
    pub c0: f64,
    pub d0: f64,
    pub closure_cap: usize,
    pub prime_limit: u64,
    pub witness_bound: u64,
    pub trials: usize,
    pub member_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            jobs: 1,
            format: Format::Json,
            c: 3,
            c0: 1.0,
            d0: 0.0,
            closure_cap: 5_000_000,
            prime_limit: 200,
            witness_bound: 2000,
            trials: 20,
            member_budget: 50_000,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::usage(format!("config key {key}: cannot parse {value:?}: {e}")))
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(key: &str, v: T) -> Result<T, CliError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("config key {key} must be positive, got {v}")))
    }
}

impl RunConfig {
    /// Applies `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "seed" => self.seed = parse_value(key, value)?,
            "jobs" => self.jobs = positive(key, parse_value(key, value)?)?,
            "format" => {
                self.format = <Format as clap::ValueEnum>::from_str(value, true)
                    .map_err(|e| CliError::usage(format!("config key format: {e}")))?
            }
            "C" | "c" => self.c = parse_value(key, value)?,
            "c0" => self.c0 = parse_value(key, value)?,
            "d0" => self.d0 = parse_value(key, value)?,
            "closure_cap" => self.closure_cap = positive(key, parse_value(key, value)?)?,
            "prime_limit" => self.prime_limit = positive(key, parse_value(key, value)?)?,
            "witness_bound" => self.witness_bound = positive(key, parse_value(key, value)?)?,
            "trials" => self.trials = positive(key, parse_value(key, value)?)?,
            "member_budget" => self.member_budget = positive(key, parse_value(key, value)?)?,
            _ => return Err(CliError::usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Canonical `key=value` lines, sorted by key.
    pub fn canonical(&self) -> String {
        let entries: BTreeMap<&str, String> = BTreeMap::from([
            ("C", self.c.to_string()),
            ("c0", format!("{:?}", self.c0)),
            ("closure_cap", self.closure_cap.to_string()),
            ("d0", format!("{:?}", self.d0)),
            ("format", self.format.as_str().to_string()),
            ("jobs", self.jobs.to_string()),
            ("member_budget", self.member_budget.to_string()),
            ("prime_limit", self.prime_limit.to_string()),
            ("seed", self.seed.to_string()),
            ("trials", self.trials.to_string()),
            ("witness_bound", self.witness_bound.to_string()),
        ]);
        entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of the canonical form together with the command line that
    /// selected the computation. `jobs` and `format` do not change results,
    /// but they are part of the hash so that distinct invocations are
    /// distinguishable in archived output.
    pub fn hash(&self, command: &[String]) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical().as_bytes());
        for arg in command {
            h.update(arg.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nseed = 9\nC = 5 # trailing\n\nc0=2.5\nformat = csv\n")
            .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.c, 5);
        assert_eq!(cfg.c0, 2.5);
        assert_eq!(cfg.format, Format::Csv);
        assert!(cfg.clone().apply_text("bogus = 1").is_err());
        assert!(cfg.clone().apply_text("trials = 0").is_err());
        assert!(cfg.clone().apply_text("seed 4").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(&["x".into()]), b.hash(&["x".into()]));
        b.seed = 1;
        assert_ne!(a.hash(&["x".into()]), b.hash(&["x".into()]));
        assert_ne!(a.hash(&["x".into()]), a.hash(&["y".into()]));
        assert_eq!(a.hash(&[]).len(), 64);
    }
}
