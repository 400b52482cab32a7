//! `key = value` run files for `stackplan plan`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::CliError;

const KEYS: &[&str] = &[
    "grammar",
    "automaton",
    "tools",
    "oracle",
    "script",
    "fallback",
    "seed",
    "step-cap",
    "style",
    "task",
    "template",
    "endpoint",
    "model",
    "api-key-env",
    "temperature",
    "max-retries",
    "timeout",
    "output",
];

const PATH_KEYS: &[&str] = &["grammar", "automaton", "tools", "output"];

/// Settings read from a run file. Keys use the long flag names, with `_`
/// accepted for `-`; blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunFile {
    values: BTreeMap<String, String>,
}

impl RunFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::Config { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(err(format!("unknown key `{key}`")));
            }
            let value = unquote(value.trim());
            if values.insert(key.clone(), value).is_some() {
                return Err(err(format!("`{key}` given twice")));
            }
        }
        Ok(RunFile { values })
    }

    /// Reads `path`; relative paths inside are taken from the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut file = Self::parse(&crate::read(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for key in PATH_KEYS {
            if let Some(v) = file.values.get_mut(*key) {
                *v = base.join(&*v).to_string_lossy().into_owned();
            }
        }
        Ok(file)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("bad value `{v}` for `{key}` in run file")))
            })
            .transpose()
    }
}

fn unquote(v: &str) -> String {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_values_and_comments() {
        let f = RunFile::parse("# run\noracle = scripted\nscript=9,1,5,1,5\nstep_cap = 40\ntask = \"Caption it.\"\n")
            .unwrap();
        assert_eq!(f.get("oracle"), Some("scripted"));
        assert_eq!(f.get("script"), Some("9,1,5,1,5"));
        assert_eq!(f.parsed::<usize>("step-cap").unwrap(), Some(40));
        assert_eq!(f.get("task"), Some("Caption it."));
        assert_eq!(f.get("seed"), None);
    }

    #[test]
    fn bad_lines() {
        assert!(matches!(
            RunFile::parse("oracle scripted"),
            Err(CliError::Config { line: 1, .. })
        ));
        assert!(matches!(
            RunFile::parse("\ncolour = red"),
            Err(CliError::Config { line: 2, .. })
        ));
        assert!(matches!(
            RunFile::parse("seed=1\nseed=2"),
            Err(CliError::Config { line: 2, .. })
        ));
        let f = RunFile::parse("seed = many").unwrap();
        assert!(f.parsed::<u64>("seed").is_err());
    }
}
