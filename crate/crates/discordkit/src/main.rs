use clap::{Parser, Subcommand};
use discordkit::{
    gen_sine_noise, load_series, parse_config, run_benchmark, run_search, write_cells,
    write_reports, write_series, Algorithm, Error, OutputFormat, SearchReport, SyntheticSpec,
};
use discordkit_core::{compute_stats, exact_nnd_profile, SearchParams};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "discordkit", version, about = "Exact time-series discord discovery and benchmarking")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find the top-k discords of a series file.
    Search {
        /// Input series: ASCII reals separated by whitespace/newlines.
        #[arg(short = 'i', long = "input", value_name = "FILE")]
        input: PathBuf,
        /// Sequence (window) length s.
        #[arg(short = 'w', long = "window", value_name = "S")]
        window: usize,
        /// Number of PAA segments P; must divide s.
        #[arg(short = 'p', long = "segments", value_name = "P")]
        segments: usize,
        /// SAX alphabet size.
        #[arg(short = 'a', long = "alphabet", value_name = "A")]
        alphabet: usize,
        /// How many discords to report.
        #[arg(short = 'n', long = "discords", value_name = "K")]
        discords: usize,
        #[arg(long = "algo", value_enum)]
        algo: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report destination; stdout when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Generate a rescaled-sine-plus-noise synthetic series.
    Gen {
        #[arg(long)]
        length: usize,
        /// Noise amplitude E.
        #[arg(long)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Run every (dataset, algorithm) cell of a benchmark config.
    Bench {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Override the config's runs-per-cell.
        #[arg(long, value_name = "R")]
        runs: Option<usize>,
        /// Run cells one at a time so wall-clock numbers are comparable.
        #[arg(long = "serial-timing")]
        serial_timing: bool,
        /// Table destination; stdout when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Dump the exact nearest-neighbor-distance profile (O(N^2) work).
    Profile {
        #[arg(short = 'i', long = "input", value_name = "FILE")]
        input: PathBuf,
        #[arg(short = 'w', long = "window", value_name = "S")]
        window: usize,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; anything else is a usage
            // problem and reports as a parameter error.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Search {
            input,
            window,
            segments,
            alphabet,
            discords,
            algo,
            seed,
            out,
            format,
        } => {
            let ts = load_series(&input)?;
            let params = SearchParams {
                s: window,
                p: segments,
                a: alphabet,
                k: discords,
                seed,
            };
            let n = {
                params.validate(&ts)?;
                ts.num_sequences(params.s)?
            };
            let dataset = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| input.display().to_string());
            let (result, wall) = run_search(&ts, &params, algo)?;
            let report = SearchReport::from_result(algo.name(), &dataset, &params, n, &result, wall)?;
            write_reports(&[report], format, out.as_deref())
        }
        Cmd::Gen { length, noise, seed, out } => {
            let spec = SyntheticSpec { length, e: noise, seed };
            let ts = gen_sine_noise(&spec)?;
            write_series(&out, &ts)
        }
        Cmd::Bench { config, runs, serial_timing, out, format } => {
            let mut cfg = parse_config(&config)?;
            if let Some(r) = runs {
                cfg.runs = r;
            }
            let cells = run_benchmark(&cfg, serial_timing)?;
            write_cells(&cells, format, out.as_deref())
        }
        Cmd::Profile { input, window } => {
            let ts = load_series(&input)?;
            let stats = compute_stats(&ts, window)?;
            let profile = exact_nnd_profile(&ts, &stats);
            let mut text = String::from("index,nnd,ngh\n");
            for i in 0..profile.nnd.len() {
                let ngh = profile.ngh[i].map(|g| g.to_string()).unwrap_or_default();
                text.push_str(&format!("{},{:?},{}\n", i, profile.nnd[i], ngh));
            }
            print!("{text}");
            Ok(())
        }
    }
}
