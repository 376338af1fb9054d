//! End-to-end tests of the `ddm` binary: subcommands, file formats and exit
//! codes (0 success, 1 config error, 2 runtime error, 3 budget exceeded).

use std::path::Path;
use std::process::{Command, Output};

use ddm_cli::csv;

fn ddm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn gen_writes_workload_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    let out = ddm(&[
        "gen", "--n", "200", "--alpha", "1", "--seed", "9",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (subs, upds) = ddm_core::io::load_extents(&path).unwrap();
    assert_eq!((subs.len(), upds.len()), (100, 100));
    let meta = ddm_core::io::load_metadata(&path).unwrap();
    assert_eq!(meta.config.total_extents, 200);
    assert_eq!(meta.config.seed, 9);
    assert_eq!(meta.extent_length, meta.config.extent_length());
}

#[test]
fn match_reports_the_same_count_for_generated_and_loaded_workloads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    assert_eq!(
        code(&ddm(&["gen", "--n", "400", "--alpha", "10", "--seed", "3", "--out", path.to_str().unwrap()])),
        0
    );

    let from_file = ddm(&["match", "--algo", "bf", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&from_file), 0);
    let generated = ddm(&[
        "match", "--algo", "sbm-par", "--threads", "2",
        "--n", "400", "--alpha", "10", "--seed", "3",
    ]);
    assert_eq!(code(&generated), 0);

    let k_of = |out: &Output| -> u64 {
        stdout(out)
            .lines()
            .find_map(|l| l.strip_prefix("K=").map(|k| k.parse().unwrap()))
            .expect("K line")
    };
    assert_eq!(k_of(&from_file), k_of(&generated));
    assert!(stdout(&from_file).lines().any(|l| l.starts_with("wct_seconds=")));
}

#[test]
fn bench_then_scaling_produces_the_documented_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let records_path = dir.path().join("results.csv");
    let scaling_path = dir.path().join("scaling.csv");
    let out = ddm(&[
        "bench",
        "--algo", "sbm,sbm-par",
        "--n", "2000",
        "--alpha", "1",
        "--threads", "1,2",
        "--reps", "2",
        "--seed", "5",
        "--out", records_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&records_path).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with(csv::RECORD_HEADER), "header: {header}");
    let records = csv::read_records(text.as_bytes()).unwrap();
    // sbm at P=1 only, sbm-par at P in {1,2}, 2 reps each.
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| r.matches == records[0].matches));

    let agg_text = std::fs::read_to_string(Path::new(&format!(
        "{}.agg.csv",
        records_path.display()
    )))
    .unwrap();
    assert!(agg_text.starts_with(csv::AGGREGATE_HEADER));
    assert_eq!(agg_text.lines().count(), 1 + 3);

    let out = ddm(&[
        "scaling",
        "--in", records_path.to_str().unwrap(),
        "--out", scaling_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let scaling_text = std::fs::read_to_string(&scaling_path).unwrap();
    assert!(scaling_text.starts_with(csv::SCALING_HEADER));
    // P=1 rows have speedup exactly 1.
    for line in scaling_text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[4] == "1" {
            assert_eq!(fields[5], "1", "line: {line}");
        }
    }
}

#[test]
fn unknown_algorithm_is_a_config_error() {
    let out = ddm(&["match", "--algo", "quadtree", "--n", "100", "--alpha", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn invalid_workload_parameters_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    // Odd N.
    let out = ddm(&["gen", "--n", "11", "--alpha", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    // Extent longer than the routing space.
    let out = ddm(&["gen", "--n", "10", "--alpha", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unreadable_input_is_a_runtime_error() {
    let out = ddm(&["scaling", "--in", "/nonexistent/records.csv"]);
    assert_eq!(code(&out), 2);
    let out = ddm(&["match", "--algo", "bf", "--in", "/nonexistent/w.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn exceeding_the_time_budget_exits_with_code_three() {
    let out = ddm(&[
        "match", "--algo", "bf", "--n", "2000", "--alpha", "1",
        "--time-budget-secs", "0",
    ]);
    assert_eq!(code(&out), 3);
    // The result is still printed before the budget verdict.
    assert!(stdout(&out).lines().any(|l| l.starts_with("K=")));
}

#[test]
fn bad_flags_are_config_errors_and_help_succeeds() {
    assert_eq!(code(&ddm(&["bench", "--nope"])), 1);
    assert_eq!(code(&ddm(&["--help"])), 0);
    assert_eq!(code(&ddm(&["match", "--algo", "bf"])), 1); // missing --n/--alpha/--in
}

// A fresh subprocess per suite keeps even cumulative high-water marks
// meaningful: brute force runs before the sweep matcher, so the sweep's
// extra allocations (endpoint list, active sets) must push the peak higher.
#[test]
fn peak_rss_column_orders_brute_force_below_sbm() {
    if !ddm_cli::rss::supported() {
        eprintln!("peak-RSS probe unsupported here; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let records_path = dir.path().join("rss.csv");
    let out = ddm(&[
        "bench",
        "--algo", "bf,sbm",
        "--n", "100000",
        "--alpha", "1",
        "--threads", "1",
        "--reps", "2",
        "--seed", "2",
        "--out", records_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&records_path).unwrap();
    assert!(text.lines().next().unwrap().ends_with(csv::RSS_COLUMN));
    let records = csv::read_records(text.as_bytes()).unwrap();
    let mean_peak = |algo: ddm_core::Algorithm| -> f64 {
        let peaks: Vec<u64> = records
            .iter()
            .filter(|r| r.algorithm == algo)
            .map(|r| r.peak_rss_bytes.expect("column present"))
            .collect();
        peaks.iter().sum::<u64>() as f64 / peaks.len() as f64
    };
    let bf = mean_peak(ddm_core::Algorithm::BruteForce);
    let sbm = mean_peak(ddm_core::Algorithm::SbmSeq);
    assert!(sbm > bf, "expected SBM peak ({sbm} B) above brute force ({bf} B)");
}

#[test]
fn peak_rss_grows_with_n_for_sbm() {
    if !ddm_cli::rss::supported() {
        eprintln!("peak-RSS probe unsupported here; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let records_path = dir.path().join("rss_n.csv");
    let out = ddm(&[
        "bench",
        "--algo", "sbm",
        "--n", "100000,1000000,10000000",
        "--alpha", "100",
        "--threads", "1",
        "--reps", "1",
        "--seed", "2",
        "--out", records_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&records_path).unwrap();
    let records = csv::read_records(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 3);
    let peaks: Vec<u64> = records
        .iter()
        .map(|r| r.peak_rss_bytes.expect("column present"))
        .collect();
    assert!(
        peaks.windows(2).all(|w| w[0] < w[1]),
        "peaks not monotone over N: {peaks:?}"
    );
}
