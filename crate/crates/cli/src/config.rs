//! Flat `key = value` configuration text with `[section]` headers.
//! Blank lines and lines starting with `#` or `;` are ignored.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::expr;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    /// `section -> key -> entry`.
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
    header_lines: BTreeMap<String, usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
                continue;
            }
            if let Some(rest) = s.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line, "unterminated section header"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(ConfigError::at(line, format!("bad section name `{name}`")));
                }
                if cfg.sections.contains_key(name) {
                    return Err(ConfigError::at(line, format!("duplicate section [{name}]")));
                }
                cfg.sections.insert(name.to_string(), BTreeMap::new());
                cfg.header_lines.insert(name.to_string(), line);
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = s.split_once('=').ok_or_else(|| {
                ConfigError::at(line, format!("expected `key = value`, got `{s}`"))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::at(line, "empty key"));
            }
            let section = current
                .as_ref()
                .ok_or_else(|| ConfigError::at(line, "key outside of any [section]"))?;
            let map = cfg.sections.get_mut(section).expect("section was inserted");
            if map.contains_key(key) {
                return Err(ConfigError::at(line, format!("duplicate key `{key}`")));
            }
            map.insert(
                key.to_string(),
                Entry {
                    value: value.trim().to_string(),
                    line,
                },
            );
        }
        Ok(cfg)
    }

    pub fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section)?.get(key)
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    pub fn section_line(&self, section: &str) -> Option<usize> {
        self.header_lines.get(section).copied()
    }

    pub fn keys(&self, section: &str) -> Vec<(&str, &Entry)> {
        self.sections
            .get(section)
            .map(|m| m.iter().map(|(k, e)| (k.as_str(), e)).collect())
            .unwrap_or_default()
    }

    pub fn sections(&self) -> impl Iterator<Item = &str> {
        self.sections.keys().map(String::as_str)
    }

    /// Every entry as `section.key = value`, sorted.
    pub fn flatten(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (s, m) in &self.sections {
            for (k, e) in m {
                out.insert(format!("{s}.{k}"), e.value.clone());
            }
        }
        out
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&Entry, ConfigError> {
        self.entry(section, key).ok_or_else(|| {
            let msg = format!("missing `{key}` in [{section}]");
            match self.section_line(section) {
                Some(l) => ConfigError::at(l, msg),
                None => ConfigError::general(msg),
            }
        })
    }
}

impl Entry {
    pub fn real(&self) -> Result<f64, ConfigError> {
        expr::eval(&self.value).map_err(|m| ConfigError::at(self.line, m))
    }

    pub fn uint(&self) -> Result<u64, ConfigError> {
        self.value.parse().map_err(|_| {
            ConfigError::at(
                self.line,
                format!("expected a nonnegative integer, got `{}`", self.value),
            )
        })
    }

    /// Whitespace- or comma-separated reals.
    pub fn reals(&self) -> Result<Vec<f64>, ConfigError> {
        self.value
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| expr::eval(s).map_err(|m| ConfigError::at(self.line, m)))
            .collect()
    }

    pub fn uints(&self) -> Result<Vec<usize>, ConfigError> {
        self.value
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|_| {
                    ConfigError::at(self.line, format!("expected an integer, got `{s}`"))
                })
            })
            .collect()
    }

    /// Comma-separated complex numbers, each `re` or `re im`.
    pub fn complexes(&self) -> Result<Vec<Complex64>, ConfigError> {
        parse_complexes(&self.value).map_err(|m| ConfigError::at(self.line, m))
    }

    pub fn words(&self) -> Vec<String> {
        self.value
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    }

    pub fn boolean(&self) -> Result<bool, ConfigError> {
        match self.value.as_str() {
            "true" | "yes" | "on" => Ok(true),
            "false" | "no" | "off" => Ok(false),
            v => Err(ConfigError::at(
                self.line,
                format!("expected true or false, got `{v}`"),
            )),
        }
    }
}

pub fn parse_complexes(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',')
        .map(|part| {
            let nums: Vec<&str> = part.split_whitespace().collect();
            match nums.as_slice() {
                [re] => Ok(Complex64::new(expr::eval(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(expr::eval(re)?, expr::eval(im)?)),
                _ => Err(format!("expected `re` or `re im`, got `{}`", part.trim())),
            }
        })
        .collect()
}
