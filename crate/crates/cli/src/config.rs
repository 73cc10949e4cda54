//! `key = value` configuration files. Lines starting with `#` are comments;
//! keys use the long flag names (`train-len`, `_` and `-` are equivalent).
//! Values given on the command line take precedence over the file.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct ConfigFile {
    path: Option<PathBuf>,
    // key -> (line number, raw value)
    entries: BTreeMap<String, (usize, String)>,
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl ConfigFile {
    /// Loads `path` if given; every key must be one of `known`.
    pub fn load(path: Option<&Path>, known: &[&str]) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let mut file = ConfigFile::parse(&text, known)
            .map_err(|msg| CliError::Usage(format!("config {}: {msg}", path.display())))?;
        file.path = Some(path.to_path_buf());
        Ok(file)
    }

    pub fn parse(text: &str, known: &[&str]) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {line_no}: expected 'key = value'"))?;
            let key = normalize_key(key);
            if !known.contains(&key.as_str()) {
                return Err(format!(
                    "line {line_no}: unknown key '{key}' (known: {})",
                    known.join(", ")
                ));
            }
            if let Some((first, _)) = entries.get(&key) {
                return Err(format!("line {line_no}: '{key}' already set on line {first}"));
            }
            entries.insert(key, (line_no, value.trim().to_string()));
        }
        Ok(ConfigFile { path: None, entries })
    }

    /// Parses `key` from the file, if present.
    pub fn get<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some((line, raw)) = self.entries.get(key) else {
            return Ok(None);
        };
        raw.parse().map(Some).map_err(|e| {
            let origin = self.path.as_ref().map_or("config".to_string(), |p| p.display().to_string());
            CliError::Usage(format!("{origin}: line {line}: invalid value for '{key}': {e}"))
        })
    }

    /// Resolves a relative path against the directory holding the file.
    pub fn resolve_path(&self, path: &Path) -> PathBuf {
        match self.path.as_ref().and_then(|p| p.parent()) {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

/// Flag value if given, otherwise the file value.
pub fn pick<T>(flag: Option<T>, file: &ConfigFile, key: &str) -> CliResult<Option<T>>
where
    T: FromStr,
    T::Err: Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

/// Like [`pick`] but the setting must be present somewhere.
pub fn require<T>(flag: Option<T>, file: &ConfigFile, key: &str) -> CliResult<T>
where
    T: FromStr,
    T::Err: Display,
{
    pick(flag, file, key)?.ok_or_else(|| CliError::Usage(format!("missing required setting --{key}")))
}

/// Comma-separated list value.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T> FromStr for List<T>
where
    T: FromStr,
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("'{p}': {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(items))
    }
}

/// Wavelet numbers as a list and/or inclusive ranges: `1-10`, `1,2,4`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidates(pub Vec<u32>);

impl FromStr for Candidates {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let parse = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("'{v}': {e}"));
            match part.split_once('-') {
                Some((lo, hi)) => {
                    let (lo, hi) = (parse(lo)?, parse(hi)?);
                    if lo > hi {
                        return Err(format!("empty range '{part}'"));
                    }
                    out.extend(lo..=hi);
                }
                None => out.push(parse(part)?),
            }
        }
        if out.is_empty() {
            return Err("no wavelet numbers given".into());
        }
        Ok(Candidates(out))
    }
}

impl Display for Candidates {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KNOWN: &[&str] = &["levels", "train-len", "models"];

    #[test]
    fn comments_blank_lines_and_key_spelling() {
        let file = ConfigFile::parse("# header\n\nlevels = 4\ntrain_len=100 \n", KNOWN).unwrap();
        assert_eq!(file.get::<usize>("levels").unwrap(), Some(4));
        assert_eq!(file.get::<usize>("train-len").unwrap(), Some(100));
        assert_eq!(file.get::<usize>("models").unwrap(), None);
    }

    #[test]
    fn errors_cite_line_numbers() {
        let err = ConfigFile::parse("levels = 4\nbogus = 1\n", KNOWN).unwrap_err();
        assert!(err.contains("line 2") && err.contains("bogus"), "{err}");
        let err = ConfigFile::parse("levels = 4\n\nlevels = 5\n", KNOWN).unwrap_err();
        assert!(err.contains("line 3") && err.contains("line 1"), "{err}");
        assert!(ConfigFile::parse("levels\n", KNOWN).unwrap_err().contains("line 1"));
        let file = ConfigFile::parse("\nlevels = four\n", KNOWN).unwrap();
        let err = file.get::<usize>("levels").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("levels = 4\n", KNOWN).unwrap();
        assert_eq!(pick(Some(7usize), &file, "levels").unwrap(), Some(7));
        assert_eq!(pick(None::<usize>, &file, "levels").unwrap(), Some(4));
        assert!(require(None::<usize>, &file, "train-len").is_err());
    }

    #[test]
    fn lists_and_candidate_ranges() {
        assert_eq!("a, b".parse::<List<String>>().unwrap().0, vec!["a", "b"]);
        assert!("".parse::<List<String>>().is_err());
        assert_eq!("1-3,7".parse::<Candidates>().unwrap().0, vec![1, 2, 3, 7]);
        assert_eq!("1-10".parse::<Candidates>().unwrap().0.len(), 10);
        assert!("5-2".parse::<Candidates>().is_err());
        assert!("x".parse::<Candidates>().is_err());
        assert_eq!(Candidates(vec![1, 2]).to_string(), "1,2");
    }
}
