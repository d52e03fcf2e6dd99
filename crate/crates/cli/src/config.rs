//! Flat `key = value` config files and flag/file/default layering.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Keys read from a config file. Later duplicates override earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::BadParams(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::BadParams(format!("config line {}: expected `key = value`, got `{line}`", i + 1)))?;
            let key = k.trim().replace('-', "_");
            if key.is_empty() {
                return Err(CliError::BadParams(format!("config line {}: empty key", i + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Fails on keys outside `known`, so typos do not silently fall back to
    /// defaults.
    pub fn check_keys(&self, known: &[&str]) -> Result<(), CliError> {
        match self.values.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(CliError::BadParams(format!("unknown config key `{k}`; expected one of {}", known.join(", ")))),
            None => Ok(()),
        }
    }
}

/// Flag value if given, else the config-file value, else `default`.
pub fn pick<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str, default: T) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(s) => s.parse().map_err(|e| CliError::BadParams(format!("config key `{key}` = `{s}`: {e}"))),
        None => Ok(default),
    }
}

/// As [`pick`] without a default.
pub fn pick_opt<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|s| s.parse().map_err(|e| CliError::BadParams(format!("config key `{key}` = `{s}`: {e}"))))
        .transpose()
}

/// Boolean switch: set by the flag, or by `true`/`false` in the file.
pub fn pick_switch(flag: bool, file: &ConfigFile, key: &str) -> Result<bool, CliError> {
    if flag {
        return Ok(true);
    }
    pick(None, file, key, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = ConfigFile::parse("# run\nb0 = 2\n\n  t=0.5 \nout-dir = a b\n").unwrap();
        assert_eq!(c.get("b0"), Some("2"));
        assert_eq!(c.get("t"), Some("0.5"));
        assert_eq!(c.get("out_dir"), Some("a b"));
        assert!(ConfigFile::parse("nonsense").is_err());
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let c = ConfigFile::parse("s = 1.5").unwrap();
        assert_eq!(pick(Some(2.0), &c, "s", 0.0).unwrap(), 2.0);
        assert_eq!(pick(None, &c, "s", 0.0).unwrap(), 1.5);
        assert_eq!(pick(None, &c, "t", 0.25).unwrap(), 0.25);
        assert!(pick::<f64>(None, &ConfigFile::parse("s = x").unwrap(), "s", 0.0).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let c = ConfigFile::parse("bo = 1").unwrap();
        assert!(c.check_keys(&["b0"]).is_err());
    }
}
