//! `key = value` run configuration files and tolerance overrides.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", no + 1))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| format!("config key `{key}`: cannot parse `{v}`")),
        }
    }
}

/// Named numeric tolerances with defaults; overridable by `--tol name=value`
/// or `tol.name = value` in a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    values: BTreeMap<&'static str, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            values: BTreeMap::from([("fidelity", 1e-10), ("witness", 1e-6), ("rsp_fidelity", 1e-9)]),
        }
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.values[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        let Some(slot) = self.values.get_mut(name) else {
            let known: Vec<_> = self.values.keys().copied().collect();
            return Err(format!("unknown tolerance `{name}` (known: {})", known.join(", ")));
        };
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!("tolerance `{name}` must be nonnegative"));
        }
        *slot = value;
        Ok(())
    }

    pub fn apply_override(&mut self, spec: &str) -> Result<(), String> {
        let (k, v) = spec.split_once('=').ok_or_else(|| format!("expected name=value, got `{spec}`"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("tolerance `{k}`: `{v}` is not a number"))?;
        self.set(k.trim(), v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let c = FileConfig::parse("seed = 7\n# note\npretty=true  # inline\n\ntol.fidelity = 1e-8\n").unwrap();
        assert_eq!(c.get::<u64>("seed").unwrap(), Some(7));
        assert_eq!(c.get::<bool>("pretty").unwrap(), Some(true));
        assert!(c.get::<u64>("pretty").is_err());
        assert!(FileConfig::parse("nonsense").is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.apply_override("witness=1e-3").unwrap();
        assert_eq!(t.get("witness"), 1e-3);
        assert!(t.apply_override("bogus=1").is_err());
        assert!(t.apply_override("witness=-1").is_err());
    }
}
