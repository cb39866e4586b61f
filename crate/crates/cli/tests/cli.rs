//! End-to-end tests driving the compiled binary, covering the exit-code
//! contract and the output formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_barenblatt"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .output()
        .expect("failed to spawn the binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout was not utf-8")
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!(
        "barenblatt-cli-test-{}-{}",
        std::process::id(),
        name
    ));
    p
}

#[test]
fn solve_emits_csv_profile_and_is_deterministic() {
    let args = [
        "solve", "--alpha", "0.5", "--m", "1", "--z0", "1.0", "--steps", "1024",
    ];
    let first = run(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&first.stderr)
    );
    let text = stdout_of(&first);
    let rows = data_rows(&text);
    // header + 1025 node rows
    assert_eq!(
        rows.len(),
        1026,
        "expected header plus 1025 rows, got {}",
        rows.len()
    );
    assert!(rows[0].starts_with("z,"), "unexpected header {:?}", rows[0]);
    assert!(
        text.lines().any(|l| l.starts_with("# alpha")),
        "missing metadata comments"
    );

    let second = run(&args);
    assert_eq!(
        first.stdout, second.stdout,
        "same invocation produced different bytes"
    );
}

#[test]
fn invalid_parameters_exit_with_one() {
    let out = run(&["solve", "--alpha", "1.5", "--m", "1", "--z0", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        !String::from_utf8_lossy(&out.stderr).is_empty(),
        "expected a diagnostic on stderr"
    );

    let out = run(&["mass-match", "--alpha", "0.5", "--m", "1", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_with_one_and_help_with_zero() {
    let out = run(&["solve", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("mass-match"));
}

#[test]
fn mass_match_reports_support_and_writes_file() {
    let out = run(&["mass-match", "--alpha", "0.5", "--m", "1", "--steps", "256"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    assert!(
        text.contains("z0_star"),
        "missing z0_star in output:\n{}",
        text
    );

    let path = temp_path("massmatch.csv");
    let out = run(&[
        "mass-match",
        "--alpha",
        "0.5",
        "--m",
        "1",
        "--steps",
        "256",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // summary still lands on stdout, table goes to the file
    assert!(stdout_of(&out).contains("z0_star"));
    let written = std::fs::read_to_string(&path).expect("output file missing");
    assert_eq!(data_rows(&written).len(), 258, "header plus 257 node rows");
    std::fs::remove_file(&path).ok();
}

#[test]
fn order_single_cell_produces_one_row() {
    let out = run(&[
        "order",
        "--alpha",
        "0.5",
        "--m",
        "1",
        "--base-steps",
        "64",
        "--z0",
        "1.65",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2, "expected header plus one row:\n{}", text);
    assert_eq!(rows[0], "alpha,m,base_steps,z0,diff_coarse,diff_fine,p");
    let fields: Vec<f64> = rows[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields.len(), 7);
    assert!(
        fields[4] > 0.0 && fields[5] > 0.0,
        "differences must be positive"
    );
    assert!(fields[6].is_finite(), "order estimate must be finite");
}

#[test]
fn order_grid_covers_twenty_five_cells() {
    let out = run(&["order", "--grid", "--base-steps", "64"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows_owned = stdout_of(&out);
    let rows = data_rows(&rows_owned);
    assert_eq!(
        rows.len(),
        26,
        "expected header plus 25 rows, got {}",
        rows.len()
    );
    for row in &rows[1..] {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert!(
            fields.iter().all(|v| v.is_finite()),
            "non-finite field in {:?}",
            row
        );
        assert!(
            fields[4] > 0.0 && fields[5] > 0.0,
            "degenerate diffs in {:?}",
            row
        );
    }
}

#[test]
fn classical_compare_matches_closed_form() {
    let out = run(&["classical-compare", "--m", "1", "--steps", "256"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], "m,z0_numerical,z0_classical,max_abs_error");
    let fields: Vec<f64> = rows[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert!(
        fields[3] < 5e-2,
        "coarse-grid classical comparison error too large: {}",
        fields[3]
    );
}

#[test]
fn reconstruct_emits_rows_per_time_and_json_parses() {
    let out = run(&[
        "reconstruct",
        "--alpha",
        "0.5",
        "--m",
        "1",
        "--z0",
        "1.65",
        "--steps",
        "128",
        "--times",
        "0.5,1,2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    let rows = data_rows(&text);
    // header plus 3 times x 257 reflected nodes
    assert_eq!(rows.len(), 1 + 3 * 257, "got {} rows", rows.len());

    let out = run(&[
        "reconstruct",
        "--alpha",
        "0.5",
        "--m",
        "1",
        "--z0",
        "1.65",
        "--steps",
        "128",
        "--times",
        "0.5,1,2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("reconstruct --format json must parse");
    let xs = value["x"].as_array().expect("x array");
    assert_eq!(xs.len(), 3 * 257);
}

#[test]
fn unwritable_output_path_exits_with_three() {
    let out = run(&[
        "solve",
        "--alpha",
        "0.5",
        "--m",
        "1",
        "--z0",
        "1.0",
        "--steps",
        "64",
        "--out",
        "/nonexistent-dir-xyz/file.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}
