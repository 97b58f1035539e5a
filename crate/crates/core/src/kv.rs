//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment that runs to the end of the
//! line, blank lines are ignored. Keys are case-sensitive. A key may appear
//! only once per file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("key `{key}`: cannot parse {value:?} as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self, KvError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(KvError::Syntax {
                    line: line_no,
                    text: raw.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(KvError::Syntax {
                    line: line_no,
                    text: raw.to_string(),
                });
            }
            if entries
                .insert(key.to_string(), (line_no, value.to_string()))
                .is_some()
            {
                return Err(KvError::Duplicate {
                    line: line_no,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, KvError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| KvError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get_raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    /// Parses `key` if present; `Ok(None)` when absent.
    pub fn get<T: FromStr>(&self, key: &str, expected: &'static str) -> Result<Option<T>, KvError> {
        match self.get_raw(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| KvError::BadValue {
                key: key.to_string(),
                value: raw.to_string(),
                expected,
            }),
        }
    }

    /// Overwrites `slot` when `key` is present.
    pub fn set_if_present<T: FromStr>(
        &self,
        key: &str,
        expected: &'static str,
        slot: &mut T,
    ) -> Result<(), KvError> {
        if let Some(v) = self.get(key, expected)? {
            *slot = v;
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Rejects any key not accepted by `is_known`.
    pub fn check_keys(&self, is_known: impl Fn(&str) -> bool) -> Result<(), KvError> {
        match self.keys().find(|k| !is_known(k)) {
            Some(k) => Err(KvError::UnknownKey(k.to_string())),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let kv = KvConfig::parse("# header\n\nwidth = 300 # meters\n  height=200\n").unwrap();
        assert_eq!(kv.get::<f64>("width", "real").unwrap(), Some(300.0));
        assert_eq!(kv.get::<f64>("height", "real").unwrap(), Some(200.0));
        assert_eq!(kv.get::<f64>("depth", "real").unwrap(), None);
    }

    #[test]
    fn rejects_missing_equals() {
        let err = KvConfig::parse("a = 1\nbogus line\n").unwrap_err();
        assert!(matches!(err, KvError::Syntax { line: 2, .. }));
    }

    #[test]
    fn rejects_duplicates() {
        let err = KvConfig::parse("a = 1\na = 2\n").unwrap_err();
        assert!(matches!(err, KvError::Duplicate { line: 2, .. }));
    }

    #[test]
    fn bad_value_names_key() {
        let kv = KvConfig::parse("duration = ten\n").unwrap();
        let err = kv.get::<u64>("duration", "integer").unwrap_err();
        assert!(err.to_string().contains("duration"));
    }

    #[test]
    fn unknown_keys() {
        let kv = KvConfig::parse("a = 1\nb = 2\n").unwrap();
        assert!(kv.check_keys(|k| k == "a" || k == "b").is_ok());
        assert!(matches!(
            kv.check_keys(|k| k == "a"),
            Err(KvError::UnknownKey(k)) if k == "b"
        ));
    }
}
