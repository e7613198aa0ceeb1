use std::process::Command as Process;

use elab_core::report::{read_csv, read_json, ApproximationRow, OracleRow, RowsDocument, SweepRow, TrajectoryRow};
use elab_core::{ConvergenceReport, PrecisionDecimal};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = elab_cli::main_with(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    assert!(err.is_empty(), "unexpected diagnostics: {err}");
    out
}

#[test]
fn approx_table_shows_three_digits() {
    let out = ok(&["approx", "--n", "10", "--format", "table"]);
    let lines: Vec<&str> = out.lines().collect();
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    let row: Vec<&str> = lines[1].split_whitespace().collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert!(col("value").starts_with("2.5937424601"));
    assert_eq!(col("sig3"), "2.59");
}

#[test]
fn approx_large_n_digits() {
    let out = ok(&["approx", "--n", "100000000", "--format", "csv"]);
    let rows: Vec<ApproximationRow> = read_csv(out.as_bytes()).unwrap();
    assert!(rows[0].value.to_string().starts_with("2.71828"));
    assert_eq!(rows[0].value.to_string(), "2.7182818148676362177");
}

#[test]
fn oracle_digits() {
    let out = ok(&["oracle", "--digits", "6"]);
    assert!(out.lines().nth(1).unwrap().ends_with("2.71828"));
    let csv = ok(&["oracle", "--digits", "6", "--format", "csv"]);
    assert_eq!(csv, "digits,value\n6,2.71828\n");
}

#[test]
fn march_csv_has_one_row_per_point() {
    let out = ok(&["march", "--n", "10", "--format", "csv"]);
    let rows: Vec<TrajectoryRow> = read_csv(out.as_bytes()).unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10].ratio.to_string(), "2.5937424601");
    assert_eq!(rows[9].ratio.to_string(), "2.357947691");
    assert!(out.starts_with("k,x,value,ratio\n"));
}

#[test]
fn reports_round_trip_through_their_text() {
    let out = ok(&["limit", "--schedule", "list:3,10,77", "--format", "csv"]);
    let rows: Vec<ApproximationRow> = read_csv(out.as_bytes()).unwrap();
    assert_eq!(rows.len(), 3);
    let mut again = Vec::new();
    elab_core::report::write_csv(&rows, &mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), out);

    let json = ok(&["limit", "--schedule", "list:3,10,77", "--format", "json"]);
    let doc: RowsDocument<ApproximationRow> = read_json(json.as_bytes()).unwrap();
    assert_eq!(doc.rows, rows);

    let json = ok(&["march", "--n", "7", "--format", "json"]);
    let doc: RowsDocument<TrajectoryRow> = read_json(json.as_bytes()).unwrap();
    let csv: Vec<TrajectoryRow> = read_csv(ok(&["march", "--n", "7", "--format", "csv"]).as_bytes()).unwrap();
    assert_eq!(doc.rows, csv);

    let json = ok(&["oracle", "--digits", "30", "--format", "json"]);
    let doc: RowsDocument<OracleRow> = read_json(json.as_bytes()).unwrap();
    assert_eq!(doc.rows[0].value, "2.71828182845904523536028747135");

    let json = ok(&["sweep", "--schedule", "doubling:1..6", "--format", "json"]);
    let report: ConvergenceReport = read_json(json.as_bytes()).unwrap();
    assert_eq!(report.rows.len(), 6);
    assert_eq!(report.sweep.len(), 6);
    assert!(report.extrapolated.is_some());
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["rows", "estimated_order", "scaled_error_limit", "extrapolated", "sweep"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }

    let csv = ok(&["sweep", "--format", "csv"]);
    let sweep: Vec<SweepRow> = read_csv(csv.as_bytes()).unwrap();
    assert_eq!(sweep.len(), 14);
    assert_eq!(sweep[7].dx, "1e-8".parse::<PrecisionDecimal>().unwrap());
}

#[test]
fn float_modes_from_the_command_line() {
    for mode in ["float-pow", "float-multiply-loop", "float-log-exp"] {
        let out = ok(&["approx", "--n", "1", "--mode", mode, "--format", "csv"]);
        let rows: Vec<ApproximationRow> = read_csv(out.as_bytes()).unwrap();
        assert_eq!(rows[0].value.to_string(), "2");
        assert_eq!(rows[0].mode, mode);
    }
    let (code, out, err) = run(&["approx", "--n", "2000000000", "--mode", "float-multiply-loop"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("iteration cap"), "{err}");
}

#[test]
fn output_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["limit", "--schedule", "pow10:1..6", "--format", "csv"],
        vec!["sweep", "--format", "json"],
        vec!["march", "--n", "12", "--format", "table"],
    ] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        let mut with_a = args.clone();
        with_a.extend(["--output", a.to_str().unwrap()]);
        let mut with_b = args.clone();
        with_b.extend(["--output", b.to_str().unwrap()]);
        assert_eq!(ok(&with_a), "");
        assert_eq!(ok(&with_b), "");
        let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert!(!ba.is_empty());
        assert_eq!(ba, bb, "{args:?}");
    }
}

#[test]
fn invalid_flags_never_exit_zero() {
    for args in [
        vec!["approx", "--n", "0"],
        vec!["approx", "--n", "x"],
        vec!["approx", "--n", "10", "--precision", "26"],
        vec!["approx", "--n", "10", "--unknown"],
        vec!["limit", "--schedule", "bogus"],
        vec!["oracle"],
        vec!["oracle", "--digits", "0"],
        vec![],
    ] {
        let (code, out, err) = run(&args);
        assert_ne!(code, 0, "{args:?}");
        assert!(out.is_empty(), "{args:?} wrote a report");
        assert!(err.starts_with("error:"), "{args:?}: {err}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_elab");
    let status = |args: &[&str]| Process::new(bin).args(args).output().unwrap();

    let good = status(&["approx", "--n", "10"]);
    assert_eq!(good.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&good.stdout).contains("2.59"));

    let usage = status(&["approx", "--n", "0"]);
    assert_eq!(usage.status.code(), Some(1));
    assert!(usage.stdout.is_empty());
    assert!(String::from_utf8_lossy(&usage.stderr).contains("n must be ≥ 1"));

    let io = status(&["oracle", "--digits", "6", "--output", "/nonexistent-dir/e.txt"]);
    assert_eq!(io.status.code(), Some(2));

    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
