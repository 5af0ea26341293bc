//! Benchmark harness around the discord-search library: synthetic
//! generators, dataset IO, cost metrics (cps, D/T-speedup), a seeded
//! multi-run experiment runner, and the report formats the CLI emits.

pub mod config;
pub mod error;
pub mod io;
pub mod metrics;
pub mod report;
pub mod runner;
pub mod synth;

pub use config::{parse_config, BenchmarkConfig, DatasetSpec};
pub use error::Error;
pub use io::{load_series, write_cells, write_reports, write_series, OutputFormat};
pub use metrics::{cps, d_speedup, t_speedup, TSpeedup};
pub use report::{ReportDiscord, SearchReport};
pub use runner::{run_benchmark, run_search, Algorithm, BenchCell};
pub use synth::{gen_random_walk, gen_sine_noise, SyntheticSpec};
