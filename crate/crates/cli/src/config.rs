//! Flat `key = value` configuration. Layers are applied in order, so later
//! layers (command-line flags) override earlier ones (config file).

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("config key `{key}`: {message}")]
    Key { key: String, message: String },
    #[error("config line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Other(String),
}

impl ConfigError {
    pub fn key(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Key {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Need {
    Required,
    Default(&'static str),
    Optional,
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub need: Need,
    pub help: &'static str,
}

pub const fn key(name: &'static str, need: Need, help: &'static str) -> KeySpec {
    KeySpec { name, need, help }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Line {
                line: i + 1,
                message: format!("expected key=value, got {line:?}"),
            });
        };
        let k = k.trim();
        if k.is_empty() {
            return Err(ConfigError::Line {
                line: i + 1,
                message: "empty key".into(),
            });
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Every key of one subcommand with a value, after defaults are filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    values: BTreeMap<String, String>,
}

impl Resolved {
    pub fn resolve(specs: &[KeySpec], layers: &[Vec<(String, String)>]) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for layer in layers {
            for (k, v) in layer {
                if !specs.iter().any(|s| s.name == k) {
                    return Err(ConfigError::key(k, "unknown key for this subcommand"));
                }
                values.insert(k.clone(), v.clone());
            }
        }
        for s in specs {
            match s.need {
                Need::Default(d) => {
                    values.entry(s.name.to_string()).or_insert_with(|| d.to_string());
                }
                Need::Required if !values.contains_key(s.name) => {
                    return Err(ConfigError::key(s.name, "required but not set"));
                }
                _ => {}
            }
        }
        Ok(Resolved { values })
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn str(&self, key: &str) -> Result<&str, ConfigError> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| ConfigError::key(key, "required but not set"))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: Display,
    {
        parse_value(key, self.str(key)?)
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: Display,
    {
        self.values.get(key).map(|v| parse_value(key, v)).transpose()
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, ConfigError>
    where
        T::Err: Display,
    {
        let raw = self.str(key)?;
        let items: Vec<T> = raw
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_value(key, t))
            .collect::<Result<_, _>>()?;
        if items.is_empty() {
            return Err(ConfigError::key(key, "empty list"));
        }
        Ok(items)
    }

    pub fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        match self.str(key)? {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            other => Err(ConfigError::key(key, format!("expected true or false, got {other:?}"))),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: Display,
{
    raw.trim()
        .parse()
        .map_err(|e| ConfigError::key(key, format!("cannot parse {raw:?}: {e}")))
}
