//! Flat `key = value` config files and grid specifications.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const CONFIG_KEYS: [&str; 12] = [
    "theta", "eta", "hbar", "mass", "mu", "gamma", "a", "abs_tol", "rel_tol", "max_terms", "jobs",
    "format",
];

/// Parsed config file. Blank lines and `#` comments are ignored; keys may use
/// `-` or `_`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key=value, got '{raw}'", no + 1))
            })?;
            let key = k.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "config line {}: unknown key '{}' (allowed: {})",
                    no + 1,
                    k.trim(),
                    CONFIG_KEYS.join(", ")
                )));
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::InvalidParameter(format!("config line {}: duplicate key '{key}'", no + 1)));
            }
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidParameter(format!("config key {key}: cannot parse '{v}'"))),
        }
    }
}

/// `start:stop:Nlin`, `start:stop:Nlog`, or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidParameter(format!("grid '{spec}': {why}"));
    let s = spec.trim();
    if let Some((range, count)) = s.rsplit_once(':') {
        let (lo, hi) = range.split_once(':').ok_or_else(|| bad("expected start:stop:count"))?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad("bad start"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("bad stop"))?;
        let count = count.trim();
        let (n, log) = if let Some(n) = count.strip_suffix("log") {
            (n, true)
        } else {
            (count.strip_suffix("lin").unwrap_or(count), false)
        };
        let n: usize = n.parse().map_err(|_| bad("bad point count"))?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad("need a finite range and at least one point"));
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        if log {
            if !(lo > 0.0 && hi > 0.0) {
                return Err(bad("log grids need positive ends"));
            }
            return Ok(crate::thermo::log_grid(lo, hi, n));
        }
        let h = (hi - lo) / (n - 1) as f64;
        return Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + h * i as f64 }).collect());
    }
    let vals = parse_list(s)?;
    if vals.is_empty() {
        return Err(bad("empty"));
    }
    Ok(vals)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse number '{p}'")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidParameter(format!("non-finite value '{p}'")))
            }
        })
        .collect()
}
