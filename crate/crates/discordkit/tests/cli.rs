//! End-to-end checks of the binary: flag surface, file formats, and the
//! documented exit codes (0 ok, 1 parameters, 2 IO/parse, 3 correctness).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_discordkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_search_profile_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.txt");
    let series_str = series.to_str().unwrap();

    let gen = run(&["gen", "--length", "900", "--noise", "0.5", "--seed", "7", "--out", series_str]);
    assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));
    assert_eq!(fs::read_to_string(&series).unwrap().lines().count(), 900);

    // Same spec, same bytes.
    let series2 = dir.path().join("series2.txt");
    let gen2 = run(&["gen", "--length", "900", "--noise", "0.5", "--seed", "7", "--out", series2.to_str().unwrap()]);
    assert!(gen2.status.success());
    assert_eq!(fs::read(&series).unwrap(), fs::read(&series2).unwrap());

    let report_path = dir.path().join("report.json");
    let search = run(&[
        "search", "-i", series_str, "-w", "32", "-p", "4", "-a", "4", "-n", "2",
        "--algo", "hst", "--seed", "3", "--out", report_path.to_str().unwrap(),
        "--format", "json",
    ]);
    assert!(search.status.success(), "{}", String::from_utf8_lossy(&search.stderr));
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let report = &reports.as_array().unwrap()[0];
    assert_eq!(report["algorithm"], "hst");
    assert_eq!(report["dataset"], "series");
    assert_eq!(report["discords"].as_array().unwrap().len(), 2);
    assert!(report["cps"].as_f64().unwrap() > 0.0);

    // Brute force from the CLI finds the same positions.
    let brute = run(&[
        "search", "-i", series_str, "-w", "32", "-p", "4", "-a", "4", "-n", "2",
        "--algo", "brute", "--seed", "9",
    ]);
    assert!(brute.status.success());
    let brute_json: serde_json::Value = serde_json::from_str(&stdout(&brute)).unwrap();
    assert_eq!(
        brute_json[0]["discords"][0]["position"],
        report["discords"][0]["position"]
    );
    assert_eq!(
        brute_json[0]["discords"][1]["position"],
        report["discords"][1]["position"]
    );

    // CSV mode: header plus one row per discord.
    let csv = run(&[
        "search", "-i", series_str, "-w", "32", "-p", "4", "-a", "4", "-n", "2",
        "--algo", "hotsax", "--format", "csv",
    ]);
    assert!(csv.status.success());
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("algorithm,dataset,"));
    assert_eq!(lines.count(), 2);

    // Profile dump: header plus one row per sequence.
    let profile = run(&["profile", "-i", series_str, "-w", "64"]);
    assert!(profile.status.success());
    let text = stdout(&profile);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "index,nnd,ngh");
    assert_eq!(lines.count(), 900 - 64 + 1);
}

#[test]
fn bench_subcommand_runs_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.cfg");
    fs::write(
        &cfg,
        "# tiny smoke benchmark\n\
         synthetic = length=600 e=0.4 seed=5\n\
         algos = hotsax,hst\n\
         baseline = hotsax\n\
         s = 24\np = 4\na = 3\nk = 1\nruns = 3\nbase_seed = 2\n",
    )
    .unwrap();

    let json = run(&["bench", "--config", cfg.to_str().unwrap(), "--serial-timing"]);
    assert!(json.status.success(), "{}", String::from_utf8_lossy(&json.stderr));
    let cells: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let cells = cells.as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!(cells[0]["algorithm"], "hotsax");
    assert_eq!(cells[1]["algorithm"], "hst");
    assert_eq!(cells[1]["runs_detail"].as_array().unwrap().len(), 3);
    assert!(cells[1]["d_speedup"].as_f64().is_some());

    // --runs overrides the config.
    let csv = run(&[
        "bench", "--config", cfg.to_str().unwrap(), "--runs", "1", "--format", "csv",
    ]);
    assert!(csv.status.success());
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("dataset,algorithm,"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("ok.txt");
    fs::write(&series, "1.0\n2.0\n3.0\n4.0\n1.5\n2.5\n0.5\n3.5\n1.1\n2.2\n").unwrap();
    let series_str = series.to_str().unwrap();

    // Parameter error: P does not divide s.
    let bad_p = run(&["search", "-i", series_str, "-w", "4", "-p", "3", "-a", "3",
        "-n", "1", "--algo", "hst"]);
    assert_eq!(bad_p.status.code(), Some(1), "{}", String::from_utf8_lossy(&bad_p.stderr));

    // Parameter error: negative noise amplitude.
    let bad_e = run(&["gen", "--length", "50", "--noise", "-1", "--seed", "0",
        "--out", dir.path().join("x.txt").to_str().unwrap()]);
    assert_eq!(bad_e.status.code(), Some(1));

    // Usage error: unknown flag.
    let usage = run(&["search", "--wat"]);
    assert_eq!(usage.status.code(), Some(1));

    // IO error: missing input file.
    let missing = run(&["search", "-i", "/nonexistent.txt", "-w", "4", "-p", "2",
        "-a", "3", "-n", "1", "--algo", "brute"]);
    assert_eq!(missing.status.code(), Some(2));

    // Parse error: junk token, named line.
    let junk = dir.path().join("junk.txt");
    fs::write(&junk, "1.0\nnope\n").unwrap();
    let parse = run(&["profile", "-i", junk.to_str().unwrap(), "-w", "2"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains(":2:"));

    // Config syntax error.
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "dataset = a.txt\nalgos = hst\ns = 32\np = 4\na = 3\nbogus_key = 1\n").unwrap();
    let bad_cfg = run(&["bench", "--config", cfg.to_str().unwrap()]);
    assert_eq!(bad_cfg.status.code(), Some(2));

    // Help is a success.
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("search"));

    // Success path sanity.
    assert!(Path::new(series_str).exists());
    let ok = run(&["search", "-i", series_str, "-w", "4", "-p", "2", "-a", "3",
        "-n", "1", "--algo", "brute"]);
    assert_eq!(ok.status.code(), Some(0));
}
