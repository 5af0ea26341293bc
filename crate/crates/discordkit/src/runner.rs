use crate::config::{BenchmarkConfig, DatasetSpec};
use crate::error::Error;
use crate::io::load_series;
use crate::metrics::{self, TSpeedup};
use crate::report::SearchReport;
use crate::synth::gen_sine_noise;
use discordkit_core::{
    brute_force_discords, build_index, compute_stats, hotsax_discords, hst_discords, seeded_rng,
    CallCounter, DiscordResult, SearchParams, TimeSeries,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::str::FromStr;
use std::time::Instant;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Brute,
    #[value(name = "hotsax")]
    HotSax,
    Hst,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::HotSax => "hotsax",
            Algorithm::Hst => "hst",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "brute" => Ok(Algorithm::Brute),
            "hotsax" => Ok(Algorithm::HotSax),
            "hst" => Ok(Algorithm::Hst),
            _ => Err(()),
        }
    }
}

/// Runs one search. The timed region covers everything the search needs
/// beyond the raw points: window statistics, SAX index construction, and
/// the search itself. Dataset loading stays outside.
pub fn run_search(
    ts: &TimeSeries,
    params: &SearchParams,
    algo: Algorithm,
) -> Result<(DiscordResult, f64), Error> {
    params.validate(ts)?;
    let start = Instant::now();
    let stats = compute_stats(ts, params.s)?;
    let mut counter = CallCounter::new();
    let result = match algo {
        Algorithm::Brute => brute_force_discords(ts, &stats, params, &mut counter),
        Algorithm::HotSax => {
            let index = build_index(ts, &stats, params)?;
            let mut rng = seeded_rng(params.seed);
            hotsax_discords(ts, &stats, &index, params, &mut counter, &mut rng)
        }
        Algorithm::Hst => {
            let index = build_index(ts, &stats, params)?;
            let mut rng = seeded_rng(params.seed);
            hst_discords(ts, &stats, &index, params, &mut counter, &mut rng)
        }
    };
    let wall = start.elapsed().as_secs_f64();
    Ok((result, wall))
}

/// One (dataset, algorithm) benchmark cell: per-run reports plus the
/// aggregates the tables are built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub s: usize,
    pub p: usize,
    pub a: usize,
    pub k: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub num_sequences: usize,
    pub mean_calls: f64,
    pub mean_wall_time_s: f64,
    /// Cost per sequence computed from the mean call count.
    pub cps: f64,
    /// Call-count speedup relative to the baseline cell, when configured.
    pub d_speedup: Option<f64>,
    pub t_speedup: Option<TSpeedup>,
    pub runs_detail: Vec<SearchReport>,
}

fn same_discords(a: &SearchReport, b: &SearchReport) -> bool {
    a.truncated == b.truncated
        && a.discords.len() == b.discords.len()
        && a.discords
            .iter()
            .zip(&b.discords)
            .all(|(x, y)| x.position == y.position && x.nnd.to_bits() == y.nnd.to_bits())
}

fn run_cell(
    id: &str,
    ts: &TimeSeries,
    algo: Algorithm,
    config: &BenchmarkConfig,
) -> Result<BenchCell, Error> {
    let n = ts.num_sequences(config.s)?;
    let mut runs_detail = Vec::with_capacity(config.runs);
    for r in 0..config.runs {
        let params = SearchParams {
            s: config.s,
            p: config.p,
            a: config.a,
            k: config.k,
            seed: config.base_seed + r as u64,
        };
        let (result, wall) = run_search(ts, &params, algo)?;
        runs_detail.push(SearchReport::from_result(
            algo.name(),
            id,
            &params,
            n,
            &result,
            wall,
        )?);
    }

    // Every seed must land on the same discords; anything else means an
    // "exact" search wasn't.
    for r in &runs_detail[1..] {
        if !same_discords(&runs_detail[0], r) {
            return Err(Error::Correctness(format!(
                "{algo} on {id}: seed {} disagrees with seed {} on the discords",
                r.seed, runs_detail[0].seed
            )));
        }
    }

    let inv = 1.0 / config.runs as f64;
    let mean_calls = runs_detail.iter().map(|r| r.distance_calls as f64).sum::<f64>() * inv;
    let mean_wall = runs_detail.iter().map(|r| r.wall_time_s).sum::<f64>() * inv;
    let k_found = runs_detail[0].discords.len();
    Ok(BenchCell {
        dataset: id.to_string(),
        algorithm: algo,
        s: config.s,
        p: config.p,
        a: config.a,
        k: config.k,
        runs: config.runs,
        base_seed: config.base_seed,
        num_sequences: n,
        mean_calls,
        mean_wall_time_s: mean_wall,
        cps: metrics::cps(mean_calls, n, k_found)?,
        d_speedup: None,
        t_speedup: None,
        runs_detail,
    })
}

/// Runs every (dataset, algorithm) cell of the config, `runs` seeded
/// repetitions each. Cells run in parallel unless `serial_timing` is set;
/// set it whenever the wall-clock numbers are meant to be compared.
pub fn run_benchmark(
    config: &BenchmarkConfig,
    serial_timing: bool,
) -> Result<Vec<BenchCell>, Error> {
    config.validate()?;
    let inputs: Vec<(String, TimeSeries)> = config
        .datasets
        .iter()
        .map(|d| {
            let ts = match d {
                DatasetSpec::File(p) => load_series(p)?,
                DatasetSpec::Synthetic(s) => gen_sine_noise(s)?,
            };
            Ok((d.id(), ts))
        })
        .collect::<Result<_, Error>>()?;

    let jobs: Vec<(usize, Algorithm)> = inputs
        .iter()
        .enumerate()
        .flat_map(|(di, _)| config.algorithms.iter().map(move |&a| (di, a)))
        .collect();

    let mut cells: Vec<BenchCell> = if serial_timing {
        jobs.iter()
            .map(|&(di, a)| run_cell(&inputs[di].0, &inputs[di].1, a, config))
            .collect::<Result<_, _>>()?
    } else {
        jobs.par_iter()
            .map(|&(di, a)| run_cell(&inputs[di].0, &inputs[di].1, a, config))
            .collect::<Result<_, _>>()?
    };

    // All algorithms here are exact, so cells on the same dataset must
    // agree with each other, not just run-to-run.
    let mut reference: HashMap<&str, &BenchCell> = HashMap::new();
    for cell in &cells {
        match reference.get(cell.dataset.as_str()) {
            None => {
                reference.insert(&cell.dataset, cell);
            }
            Some(first) => {
                if !same_discords(&first.runs_detail[0], &cell.runs_detail[0]) {
                    return Err(Error::Correctness(format!(
                        "{} and {} disagree on the discords of {}",
                        first.algorithm, cell.algorithm, cell.dataset
                    )));
                }
            }
        }
    }

    if let Some(baseline) = config.baseline {
        let base: HashMap<String, (f64, f64)> = cells
            .iter()
            .filter(|c| c.algorithm == baseline)
            .map(|c| (c.dataset.clone(), (c.mean_calls, c.mean_wall_time_s)))
            .collect();
        for cell in &mut cells {
            if cell.algorithm == baseline {
                continue;
            }
            if let Some(&(calls, wall)) = base.get(&cell.dataset) {
                cell.d_speedup = Some(metrics::d_speedup(calls, cell.mean_calls)?);
                cell.t_speedup = Some(metrics::t_speedup(wall, cell.mean_wall_time_s)?);
            }
        }
    }
    Ok(cells)
}
