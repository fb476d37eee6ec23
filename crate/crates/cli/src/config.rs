//! Flat key-value experiment configs with one optional `[section]`
//! level, `#` comments, and a units header.
//!
//! ```text
//! units = natural
//! experiment = stern_gerlach
//! seed = 42
//!
//! [model]
//! delta = 1.0
//! ```

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parsed config: `section.key → (value, line)`; top-level keys use the
/// empty section.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, (String, usize)>,
    /// Keys consumed by the experiment builder; the rest are reported
    /// as unknown.
    raw: String,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| ConfigError {
                    line: line_no,
                    message: "unterminated section header".into(),
                })?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError {
                    line: line_no,
                    message: "empty key".into(),
                });
            }
            let full = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            if entries.contains_key(&full) {
                return Err(ConfigError {
                    line: line_no,
                    message: format!("duplicate key `{full}`"),
                });
            }
            entries.insert(full, (value.trim().to_string(), line_no));
        }
        Ok(Self {
            entries,
            raw: text.to_string(),
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| ConfigError {
                line: *line,
                message: format!("`{key}` expects a number, got `{v}`"),
            }),
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<u64>().map(Some).map_err(|_| ConfigError {
                line: *line,
                message: format!("`{key}` expects an integer, got `{v}`"),
            }),
        }
    }

    pub fn get_list_f64(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| ConfigError {
                        line: *line,
                        message: format!("`{key}` expects numbers, got `{s}`"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    /// Reject keys outside the allowed set, reporting the line number.
    pub fn check_known(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for (key, (_, line)) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(ConfigError {
                    line: *line,
                    message: format!("unknown key `{key}`"),
                });
            }
        }
        Ok(())
    }

    /// FNV-1a hash of the raw text, hex-encoded; embedded in reports so
    /// artifacts are traceable to their exact configuration.
    pub fn content_hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.raw.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        format!("{h:016x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let c = Config::parse("units = natural\n# note\n[model]\ndelta = 1.5 # inline\n").unwrap();
        assert_eq!(c.get("units"), Some("natural"));
        assert_eq!(c.get_f64("model.delta").unwrap(), Some(1.5));
        assert!(c.get("model.missing").is_none());
    }

    #[test]
    fn reports_line_numbers() {
        let err = Config::parse("a = 1\nbroken line\n").unwrap_err();
        assert_eq!(err.line, 2);
        let c = Config::parse("a = x\n").unwrap();
        let err = c.get_f64("a").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let c = Config::parse("a = 1\nb = 2\n").unwrap();
        assert!(c.check_known(&["a"]).is_err());
        assert!(c.check_known(&["a", "b"]).is_ok());
        assert!(Config::parse("a = 1\na = 2\n").is_err());
    }

    #[test]
    fn hash_is_stable() {
        let c1 = Config::parse("a = 1\n").unwrap();
        let c2 = Config::parse("a = 1\n").unwrap();
        assert_eq!(c1.content_hash(), c2.content_hash());
        let c3 = Config::parse("a = 2\n").unwrap();
        assert_ne!(c1.content_hash(), c3.content_hash());
    }

    #[test]
    fn list_values() {
        let c = Config::parse("alpha = 0.9, 0.95,1\n").unwrap();
        assert_eq!(c.get_list_f64("alpha").unwrap(), Some(vec![0.9, 0.95, 1.0]));
    }
}
