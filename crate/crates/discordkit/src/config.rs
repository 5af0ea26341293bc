use crate::error::Error;
use crate::runner::Algorithm;
use crate::synth::SyntheticSpec;
use std::fs;
use std::path::{Path, PathBuf};

/// A benchmark input: either a series file or a generated synthetic.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSpec {
    File(PathBuf),
    Synthetic(SyntheticSpec),
}

impl DatasetSpec {
    /// Identifier carried into reports: the file stem, or the synthetic's
    /// self-describing id.
    pub fn id(&self) -> String {
        match self {
            DatasetSpec::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            DatasetSpec::Synthetic(s) => s.id(),
        }
    }
}

/// Parsed benchmark description: which inputs, which algorithms, one
/// common parameter block, and how many seeded repetitions per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub datasets: Vec<DatasetSpec>,
    pub algorithms: Vec<Algorithm>,
    pub s: usize,
    pub p: usize,
    pub a: usize,
    pub k: usize,
    pub runs: usize,
    pub base_seed: u64,
    /// When set, every other algorithm's cell reports D/T-speedups
    /// against this one's cell on the same dataset.
    pub baseline: Option<Algorithm>,
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.datasets.is_empty() {
            return Err(Error::invalid("benchmark config lists no datasets"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("benchmark config lists no algorithms"));
        }
        if self.runs < 1 {
            return Err(Error::invalid("runs must be >= 1"));
        }
        if let Some(b) = self.baseline {
            if !self.algorithms.contains(&b) {
                return Err(Error::invalid(format!(
                    "baseline {b} is not in the algorithm list"
                )));
            }
        }
        Ok(())
    }
}

/// Reads the flat key=value format:
///
/// ```text
/// # benchmark description; '#' starts a comment
/// dataset   = data/ecg.txt                  # repeatable
/// synthetic = length=20000 e=0.5 seed=7     # repeatable
/// algos     = hotsax,hst
/// s = 120
/// p = 4
/// a = 4
/// k = 1          # optional, default 1
/// runs = 10      # optional, default 1
/// base_seed = 0  # optional, default 0
/// baseline = hotsax   # optional; enables speedup columns
/// ```
pub fn parse_config(path: &Path) -> Result<BenchmarkConfig, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(path, &text)
}

fn parse_config_text(path: &Path, text: &str) -> Result<BenchmarkConfig, Error> {
    let err = |line: usize, msg: String| Error::Config {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut datasets = Vec::new();
    let mut algorithms: Option<Vec<Algorithm>> = None;
    let mut scalars: std::collections::HashMap<&str, (usize, String)> =
        std::collections::HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected key = value".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(err(line_no, format!("key {key:?} has no value")));
        }
        match key {
            "dataset" => datasets.push(DatasetSpec::File(PathBuf::from(value))),
            "synthetic" => datasets.push(DatasetSpec::Synthetic(parse_synthetic(
                value,
                |msg| err(line_no, msg),
            )?)),
            "algos" => {
                if algorithms.is_some() {
                    return Err(err(line_no, "duplicate key \"algos\"".into()));
                }
                let mut list = Vec::new();
                for name in value.split(',') {
                    let name = name.trim();
                    let algo = name
                        .parse::<Algorithm>()
                        .map_err(|_| err(line_no, format!("unknown algorithm {name:?}")))?;
                    if list.contains(&algo) {
                        return Err(err(line_no, format!("algorithm {name} listed twice")));
                    }
                    list.push(algo);
                }
                algorithms = Some(list);
            }
            "s" | "p" | "a" | "k" | "runs" | "base_seed" | "baseline" => {
                if scalars.insert(key, (line_no, value.to_string())).is_some() {
                    return Err(err(line_no, format!("duplicate key {key:?}")));
                }
            }
            other => return Err(err(line_no, format!("unknown key {other:?}"))),
        }
    }

    let int = |key: &str, default: Option<u64>| -> Result<u64, Error> {
        match scalars.get(key) {
            Some((line, v)) => v
                .parse::<u64>()
                .map_err(|_| err(*line, format!("{key} must be a non-negative integer, got {v:?}"))),
            None => default.ok_or_else(|| err(0, format!("missing required key {key:?}"))),
        }
    };

    let s = int("s", None)? as usize;
    let p = int("p", None)? as usize;
    let a = int("a", None)? as usize;
    let k = int("k", Some(1))? as usize;
    let runs = int("runs", Some(1))? as usize;
    let base_seed = int("base_seed", Some(0))?;
    let baseline = match scalars.get("baseline") {
        None => None,
        Some((line, v)) => Some(
            v.parse::<Algorithm>()
                .map_err(|_| err(*line, format!("unknown algorithm {v:?}")))?,
        ),
    };

    let config = BenchmarkConfig {
        datasets,
        algorithms: algorithms.unwrap_or_default(),
        s,
        p,
        a,
        k,
        runs,
        base_seed,
        baseline,
    };
    config.validate()?;
    Ok(config)
}

fn parse_synthetic(
    value: &str,
    err: impl Fn(String) -> Error,
) -> Result<SyntheticSpec, Error> {
    let mut length = None;
    let mut e = None;
    let mut seed = 0u64;
    for token in value.split_whitespace() {
        let (key, v) = token
            .split_once('=')
            .ok_or_else(|| err(format!("synthetic field {token:?} is not key=value")))?;
        match key {
            "length" => {
                length = Some(v.parse::<usize>().map_err(|_| {
                    err(format!("synthetic length must be an integer, got {v:?}"))
                })?)
            }
            "e" | "noise" => {
                e = Some(v.parse::<f64>().map_err(|_| {
                    err(format!("synthetic noise must be a number, got {v:?}"))
                })?)
            }
            "seed" => {
                seed = v.parse::<u64>().map_err(|_| {
                    err(format!("synthetic seed must be an integer, got {v:?}"))
                })?
            }
            other => return Err(err(format!("unknown synthetic field {other:?}"))),
        }
    }
    let spec = SyntheticSpec {
        length: length.ok_or_else(|| err("synthetic needs length=<n>".into()))?,
        e: e.ok_or_else(|| err("synthetic needs e=<amplitude>".into()))?,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}
