use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Experiment {
    MeyersSweep,
    Counterexample,
    HolderConvergence,
    RateTheta,
    ResolventSweep,
    KernelBounds,
    Embeddings,
    Geometry,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::MeyersSweep,
        Experiment::Counterexample,
        Experiment::HolderConvergence,
        Experiment::RateTheta,
        Experiment::ResolventSweep,
        Experiment::KernelBounds,
        Experiment::Embeddings,
        Experiment::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::MeyersSweep => "meyers_sweep",
            Experiment::Counterexample => "counterexample",
            Experiment::HolderConvergence => "holder_convergence",
            Experiment::RateTheta => "rate_theta",
            Experiment::ResolventSweep => "resolvent_sweep",
            Experiment::KernelBounds => "kernel_bounds",
            Experiment::Embeddings => "embeddings",
            Experiment::Geometry => "geometry",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Flat `key = value` configuration. Every key must be consumed by the
/// experiment; leftovers are reported by [`Config::finish`].
#[derive(Debug)]
pub struct Config {
    pub experiment: Experiment,
    values: BTreeMap<String, String>,
    base_dir: PathBuf,
    used: RefCell<BTreeSet<String>>,
}

impl Clone for Config {
    fn clone(&self) -> Self {
        Config {
            experiment: self.experiment,
            values: self.values.clone(),
            base_dir: self.base_dir.clone(),
            used: RefCell::new(BTreeSet::new()),
        }
    }
}

impl Config {
    /// Parses config text; relative output paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Config, LabError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::Config(format!("line {}: expected 'key = value', got '{raw}'", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(LabError::Config(format!("line {}: empty key", i + 1)));
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(LabError::Config(format!("line {}: duplicate key '{k}'", i + 1)));
            }
        }
        let experiment = values
            .remove("experiment")
            .ok_or_else(|| LabError::Config("missing 'experiment'".into()))?
            .parse()?;
        Ok(Config {
            experiment,
            values,
            base_dir: base_dir.to_path_buf(),
            used: RefCell::new(BTreeSet::new()),
        })
    }

    pub fn load(path: &Path) -> Result<Config, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Io(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Config::parse(&text, &base)
    }

    /// Builds a config from pairs (no file).
    pub fn from_pairs(experiment: Experiment, pairs: &[(&str, &str)]) -> Config {
        Config {
            experiment,
            values: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            base_dir: PathBuf::from("."),
            used: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    fn parse_value<T: FromStr>(key: &str, s: &str) -> Result<T, LabError> {
        s.parse()
            .map_err(|_| LabError::Config(format!("key '{key}': cannot parse '{s}'")))
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, LabError> {
        match self.raw(key) {
            Some(s) => Config::parse_value(key, s),
            None => Ok(default),
        }
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, LabError> {
        self.raw(key).map(|s| Config::parse_value(key, s)).transpose()
    }

    /// Comma and/or whitespace separated list.
    pub fn list<T: FromStr>(&self, key: &str, default: &[T]) -> Result<Vec<T>, LabError>
    where
        T: Clone,
    {
        match self.raw(key) {
            Some(s) => {
                let items: Vec<T> = s
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| Config::parse_value(key, t))
                    .collect::<Result<_, _>>()?;
                if items.is_empty() {
                    return Err(LabError::Config(format!("key '{key}': empty list")));
                }
                Ok(items)
            }
            None => Ok(default.to_vec()),
        }
    }

    /// Whitespace separated words of a spec value such as `checkerboard 1 4 4`.
    pub fn words(&self, key: &str, default: &str) -> Vec<String> {
        self.raw(key)
            .unwrap_or(default)
            .split_whitespace()
            .map(str::to_string)
            .collect()
    }

    pub fn output_path(&self) -> Option<PathBuf> {
        self.raw("output").map(|p| {
            let p = PathBuf::from(p);
            if p.is_absolute() {
                p
            } else {
                self.base_dir.join(p)
            }
        })
    }

    /// Errors on keys that no part of the experiment read (`output` is
    /// consumed by the caller).
    pub fn finish(&self) -> Result<(), LabError> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| k.as_str() != "output" && !used.contains(k.as_str()))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(LabError::Config(format!(
                "keys not used by {}: {}",
                self.experiment,
                unknown.join(", ")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = Config::parse(
            "# sweep\nexperiment = meyers_sweep\np = 2.2, 2.4\nlevels = 3 4 5\nseed=7 # trailing\n",
            Path::new("/tmp"),
        )
        .unwrap();
        assert_eq!(c.experiment, Experiment::MeyersSweep);
        assert_eq!(c.list::<f64>("p", &[]).unwrap(), vec![2.2, 2.4]);
        assert_eq!(c.list::<u32>("levels", &[]).unwrap(), vec![3, 4, 5]);
        assert_eq!(c.get::<u64>("seed", 0).unwrap(), 7);
        assert!(c.finish().is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Config::parse("p = 2\n", Path::new(".")).is_err());
        assert!(Config::parse("experiment = nope\n", Path::new(".")).is_err());
        assert!(Config::parse("experiment = geometry\nlevels\n", Path::new(".")).is_err());
        assert!(Config::parse("experiment = geometry\na = 1\na = 2\n", Path::new(".")).is_err());
        let c = Config::parse("experiment = geometry\ntypo = 1\n", Path::new(".")).unwrap();
        assert!(c.finish().is_err());
        let c = Config::parse("experiment = geometry\np = x\n", Path::new(".")).unwrap();
        assert!(c.get::<f64>("p", 1.0).is_err());
    }
}
