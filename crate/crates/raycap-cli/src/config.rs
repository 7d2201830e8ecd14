//! Flat key = value config files and CLI error plumbing.
//!
//! Keys mirror the long flag names without the leading dashes (`rays`,
//! `snr-db`, `setup`, ...). A `command` key (plus `sweep` for sweep
//! subtypes) lets a config file select what runs, so a whole invocation
//! can be reproduced from the file alone. Explicit flags always override
//! file values.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Error carrying the process exit code: 2 for usage/validation problems,
/// 3 for I/O failures.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<raycap::Error> for CliError {
    fn from(e: raycap::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

/// Parsed config file contents. Later lines override earlier ones.
#[derive(Debug, Default)]
pub struct Settings {
    map: HashMap<String, String>,
}

impl Settings {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::usage(format!("--config: cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
            .map_err(|msg| CliError::usage(format!("--config {}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            map.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
        }
        Ok(Self { map })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    /// Typed lookup; a present-but-unparsable value is a usage error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s.parse::<T>().map(Some).map_err(|_| {
                CliError::usage(format!("config key '{key}': cannot parse value '{s}'"))
            }),
        }
    }

    /// Boolean keys accept true/false/1/0/yes/no.
    pub fn get_flag(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(false),
            Some(s) => match s.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(CliError::usage(format!(
                    "config key '{key}': expected a boolean, got '{other}'"
                ))),
            },
        }
    }
}

/// Flag value if given, else the config value under `key`.
pub fn resolve<T: FromStr>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => settings.get(key),
    }
}

pub fn resolve_or<T: FromStr>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    Ok(resolve(flag, settings, key)?.unwrap_or(default))
}

pub fn require<T: FromStr>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
    flag_name: &str,
) -> Result<T, CliError> {
    resolve(flag, settings, key)?
        .ok_or_else(|| CliError::usage(format!("missing required flag {flag_name}")))
}
