//! Flat `key = value` config files (TOML syntax, scalars only).
//!
//! Each lookup consumes its key, so whatever is left once a subcommand has
//! read its parameters is unknown to that subcommand and rejected.

use std::collections::BTreeMap;
use std::path::Path;

use toml::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct FileValues {
    source: String,
    entries: BTreeMap<String, Value>,
}

impl FileValues {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> CliResult<Self> {
        let table: toml::Table = toml::from_str(text)
            .map_err(|e| CliError::usage(format!("config {source} is not valid: {e}")))?;
        let mut entries = BTreeMap::new();
        for (key, value) in table {
            if matches!(value, Value::Table(_) | Value::Array(_)) {
                return Err(CliError::usage(format!(
                    "config {source}: key '{key}' must hold a scalar value"
                )));
            }
            let key = key.replace('-', "_");
            if entries.insert(key.clone(), value).is_some() {
                return Err(CliError::usage(format!(
                    "config {source}: duplicate key '{key}'"
                )));
            }
        }
        Ok(Self {
            source: source.to_string(),
            entries,
        })
    }

    fn mistyped(&self, key: &str, want: &str, got: &Value) -> CliError {
        CliError::usage(format!(
            "config {}: key '{key}' must be {want}, got {got}",
            self.source
        ))
    }

    pub fn f64(&mut self, key: &str, flag: Option<f64>) -> CliResult<Option<f64>> {
        let Some(v) = self.entries.remove(key) else {
            return Ok(flag);
        };
        let from_file = match v {
            Value::Float(x) => x,
            Value::Integer(n) => n as f64,
            ref other => return Err(self.mistyped(key, "a number", other)),
        };
        Ok(flag.or(Some(from_file)))
    }

    pub fn int(&mut self, key: &str, flag: Option<i64>) -> CliResult<Option<i64>> {
        let Some(v) = self.entries.remove(key) else {
            return Ok(flag);
        };
        let Value::Integer(n) = v else {
            return Err(self.mistyped(key, "an integer", &v));
        };
        Ok(flag.or(Some(n)))
    }

    pub fn usize(&mut self, key: &str, flag: Option<usize>) -> CliResult<Option<usize>> {
        match self.int(key, flag.map(|n| n as i64))? {
            None => Ok(None),
            Some(n) => usize::try_from(n)
                .map(Some)
                .map_err(|_| CliError::usage(format!("'{key}' must be nonnegative, got {n}"))),
        }
    }

    pub fn string(&mut self, key: &str, flag: Option<String>) -> CliResult<Option<String>> {
        let Some(v) = self.entries.remove(key) else {
            return Ok(flag);
        };
        let Value::String(s) = v else {
            return Err(self.mistyped(key, "a string", &v));
        };
        Ok(flag.or(Some(s)))
    }

    /// A set flag wins; otherwise the file value, otherwise `false`.
    pub fn bool(&mut self, key: &str, flag: bool) -> CliResult<bool> {
        let Some(v) = self.entries.remove(key) else {
            return Ok(flag);
        };
        let Value::Boolean(b) = v else {
            return Err(self.mistyped(key, "a boolean", &v));
        };
        Ok(flag || b)
    }

    pub fn finish(self, command: &str) -> CliResult<()> {
        if self.entries.is_empty() {
            return Ok(());
        }
        let keys: Vec<&str> = self.entries.keys().map(String::as_str).collect();
        Err(CliError::usage(format!(
            "config {}: unknown key(s) for '{command}': {}",
            self.source,
            keys.join(", ")
        )))
    }
}
