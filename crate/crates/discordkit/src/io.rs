use crate::error::Error;
use crate::report::{sig6, SearchReport};
use crate::runner::BenchCell;
use discordkit_core::TimeSeries;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Output format for reports and benchmark tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Parses a series file: ASCII reals separated by newlines or other
/// whitespace. Parse failures name the offending line and token.
pub fn load_series(path: &Path) -> Result<TimeSeries, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                token: token.to_string(),
            })?;
            // "inf"/"nan" parse as floats but are not data; reject in place.
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    token: token.to_string(),
                });
            }
            points.push(v);
        }
    }
    if points.len() < 2 {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    Ok(TimeSeries::new(points)?)
}

/// One point per line, shortest round-trip formatting, so reloading the
/// file reproduces every value bit-exactly.
pub fn write_series(path: &Path, ts: &TimeSeries) -> Result<(), Error> {
    let mut text = String::with_capacity(ts.len() * 20);
    for v in ts.points() {
        text.push_str(&format!("{v:?}\n"));
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    match path {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(p) => {
            let f = fs::File::create(p).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(Box::new(f))
        }
    }
}

fn sink_error(path: Option<&Path>, source: std::io::Error) -> Error {
    Error::Io {
        path: path.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("<stdout>")),
        source,
    }
}

pub const REPORT_CSV_HEADER: &str = "algorithm,dataset,s,p,a,k,seed,num_sequences,rank,\
position,nnd,calls_for_discord,distance_calls,wall_time_s,cps,truncated";

/// JSON carries the full report list verbatim; CSV flattens to one row per
/// discord with distances at 6 significant digits.
pub fn write_reports(
    reports: &[SearchReport],
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), Error> {
    let mut out = open_sink(path)?;
    let res = match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, reports)
                .map_err(std::io::Error::other)
                .and_then(|_| writeln!(out))
        }
        OutputFormat::Csv => write_reports_csv(&mut out, reports),
    };
    res.map_err(|e| sink_error(path, e))
}

fn write_reports_csv(out: &mut dyn Write, reports: &[SearchReport]) -> std::io::Result<()> {
    writeln!(out, "{REPORT_CSV_HEADER}")?;
    for r in reports {
        for (rank, d) in r.discords.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.algorithm,
                r.dataset,
                r.s,
                r.p,
                r.a,
                r.k,
                r.seed,
                r.num_sequences,
                rank + 1,
                d.position,
                sig6(d.nnd),
                r.calls_per_discord[rank],
                r.distance_calls,
                sig6(r.wall_time_s),
                sig6(r.cps),
                r.truncated,
            )?;
        }
    }
    Ok(())
}

pub const BENCH_CSV_HEADER: &str = "dataset,algorithm,s,p,a,k,runs,base_seed,num_sequences,\
mean_calls,mean_wall_time_s,cps,d_speedup,t_speedup,t_speedup_low_confidence";

/// Benchmark cells: JSON verbatim, CSV one row per (dataset, algorithm).
pub fn write_cells(
    cells: &[BenchCell],
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), Error> {
    let mut out = open_sink(path)?;
    let res = match format {
        OutputFormat::Json => serde_json::to_writer_pretty(&mut out, cells)
            .map_err(std::io::Error::other)
            .and_then(|_| writeln!(out)),
        OutputFormat::Csv => write_cells_csv(&mut out, cells),
    };
    res.map_err(|e| sink_error(path, e))
}

fn write_cells_csv(out: &mut dyn Write, cells: &[BenchCell]) -> std::io::Result<()> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.dataset,
            c.algorithm,
            c.s,
            c.p,
            c.a,
            c.k,
            c.runs,
            c.base_seed,
            c.num_sequences,
            sig6(c.mean_calls),
            sig6(c.mean_wall_time_s),
            sig6(c.cps),
            c.d_speedup.map(sig6).unwrap_or_default(),
            c.t_speedup.map(|t| sig6(t.ratio)).unwrap_or_default(),
            c.t_speedup.map(|t| t.low_confidence.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}
