//! End-to-end tests of the command-line surface: exit statuses, CSV
//! shape, determinism, and the documented relationships between the
//! field routes. Each test drives the compiled binary the way a shell
//! user would.

use std::path::PathBuf;
use std::process::{Command, Output};

fn photondiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photondiff")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    path.to_str().expect("utf-8 path").to_owned()
}

fn expect_ok(args: &[&str]) -> String {
    let out = photondiff(args);
    assert!(
        out.status.success(),
        "expected exit 0 for {:?}, got {:?}\nstderr: {}",
        args,
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 csv")
}

fn expect_status(args: &[&str], code: i32) -> String {
    let out = photondiff(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "expected exit {code} for {args:?}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stderr).expect("utf-8 diagnostics")
}

/// Data rows of a CSV dump, header dropped, cells split on commas.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|line| line.split(',').map(str::to_owned).collect()).collect()
}

fn header(csv: &str) -> &str {
    csv.lines().next().expect("header line")
}

fn parse(cell: &str) -> f64 {
    cell.parse().unwrap_or_else(|_| panic!("numeric cell, got {cell:?}"))
}

/// Largest value in a column, skipping masked (empty) cells.
fn column_max(csv: &str, idx: usize) -> f64 {
    rows(csv)
        .iter()
        .filter(|r| !r[idx].is_empty())
        .map(|r| parse(&r[idx]))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "compare",
        "--config",
        &config("moderate-impedance-five-terms.toml"),
        "--a",
        "born",
        "--b",
        "exact",
    ];
    let first = expect_ok(&args);
    let second = expect_ok(&args);
    assert_eq!(first, second);

    let args = ["converge", "--beta", "0.002"];
    assert_eq!(expect_ok(&args), expect_ok(&args));
}

#[test]
fn neumann_column_matches_the_zeroth_partial_sum() {
    let neumann = expect_ok(&["evaluate", "--which", "neumann"]);
    let zeroth = expect_ok(&["evaluate", "--which", "born", "--nmax", "0"]);
    assert_eq!(header(&neumann), "t,neumann");
    assert_eq!(header(&zeroth), "t,born");
    let a = rows(&neumann);
    let b = rows(&zeroth);
    assert_eq!(a.len(), 96);
    assert_eq!(a.len(), b.len());
    for (ra, rb) in a.iter().zip(&b) {
        assert_eq!(ra[0], rb[0]);
        let (ua, ub) = (parse(&ra[1]), parse(&rb[1]));
        assert!((ua - ub).abs() <= 1e-13 * ua.abs(), "{ua} vs {ub}");
    }
}

#[test]
fn grid_flag_overrides_the_config() {
    let csv = expect_ok(&["evaluate", "--which", "exact", "--grid", "100:400:4"]);
    let t: Vec<f64> = rows(&csv).iter().map(|r| parse(&r[0])).collect();
    assert_eq!(t, vec![100.0, 200.0, 300.0, 400.0]);
}

#[test]
fn validation_errors_exit_one_and_name_the_field() {
    let err = expect_status(&["evaluate", "--which", "exact", "--tol", "2"], 1);
    assert!(err.contains("tolerance"), "stderr: {err}");

    let err = expect_status(&["converge", "--x3=-5"], 1);
    assert!(err.contains("x3"), "stderr: {err}");

    // Malformed usage is a validation failure too; exit 2 stays
    // reserved for unconverged scans.
    expect_status(&["converge", "--x3", "-5"], 1);
    let err = expect_status(&["evaluate", "--which", "exact", "--grid", "oops"], 1);
    assert!(err.contains("START:END:COUNT"), "stderr: {err}");

    let dir = tempfile::tempdir().expect("tempdir");
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "gamma = 0.06\nmisspelled = 1\n").expect("write config");
    let err =
        expect_status(&["evaluate", "--which", "exact", "--config", bad.to_str().unwrap()], 1);
    assert!(err.contains("misspelled"), "stderr: {err}");

    // Half-space subcommands refuse a slab geometry outright.
    let slab = dir.path().join("slab.toml");
    std::fs::write(&slab, "[geometry]\nkind = \"slab\"\nL = 40.0\n").expect("write config");
    let err = expect_status(&["kernel", "--config", slab.to_str().unwrap()], 1);
    assert!(err.contains("geometry.kind"), "stderr: {err}");
}

#[test]
fn zero_impedance_rejects_the_extrapolated_boundary() {
    let err = expect_status(&["evaluate", "--which", "ebc", "--beta", "0"], 1);
    assert!(err.contains("beta"), "stderr: {err}");
}

#[test]
fn slab_subcommand_needs_a_width() {
    let err = expect_status(&["slab", "--x3", "5"], 1);
    assert!(err.contains("geometry.L"), "stderr: {err}");
}

#[test]
fn slab_dump_carries_image_diagnostics() {
    let csv = expect_ok(&["slab", "--L", "50", "--M", "40", "--x3", "5", "--grid", "200:1000:3"]);
    assert_eq!(header(&csv), "t,kernel,imagesUsed,truncationError");
    let data = rows(&csv);
    assert_eq!(data.len(), 3);
    for r in &data {
        assert!(parse(&r[1]) > 0.0);
        let _pairs: u32 = r[2].parse().expect("image count");
        assert!(parse(&r[3]) >= 0.0);
    }
}

#[test]
fn convergence_scan_reports_the_settling_order() {
    let csv = expect_ok(&["converge", "--beta", "0.002"]);
    assert_eq!(header(&csv), "n,maxRatio,maxIncrement,convergedFlag");
    let data = rows(&csv);
    // The scan stops reporting once the streak rule is satisfied at the
    // configured tolerance; weak impedance settles within a few orders.
    assert_eq!(data.len(), 8);
    assert_eq!(data[0][0], "0");
    assert_eq!(data[0][1], "");
    assert_eq!(data[0][3], "false");
    assert_eq!(data[7][0], "7");
    assert_eq!(data[7][3], "true");
    assert!(data.iter().take(7).all(|r| r[3] == "false"));
    // Increments below the zeroth are strictly positive and eventually
    // fall under the tolerance.
    assert!(parse(&data[1][2]) > 1.0);
    assert!(parse(&data[7][2]) < 0.01);
}

#[test]
fn truncated_scan_exits_two_but_still_writes_the_csv() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("scan.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_photondiff"))
        .args(["converge", "--beta", "0.015", "--nmax", "20", "--out", out.to_str().unwrap()])
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(2));
    let csv = std::fs::read_to_string(&out).expect("scan written despite exit 2");
    let data = rows(&csv);
    assert_eq!(data.len(), 21);
    assert!(data.iter().all(|r| r[3] == "false"));
}

#[test]
fn zero_impedance_scan_is_complete_at_order_zero() {
    let csv = expect_ok(&["converge", "--beta", "0"]);
    let data = rows(&csv);
    assert_eq!(data.len(), 1);
    assert_eq!(data[0], vec!["0", "", "1.0000000000000000e0", "true"]);
}

#[test]
fn comparing_a_route_with_itself_gives_zero_error() {
    let csv = expect_ok(&["compare", "--a", "exact", "--b", "exact"]);
    assert_eq!(header(&csv), "t,exact,exact,relErr");
    let data = rows(&csv);
    assert_eq!(data.len(), 96);
    let kept: Vec<&Vec<String>> = data.iter().filter(|r| !r[3].is_empty()).collect();
    assert!(!kept.is_empty());
    for r in kept {
        assert_eq!(parse(&r[3]), 0.0);
    }
}

#[test]
fn seventy_terms_track_the_closed_form_within_a_percent() {
    let csv = expect_ok(&[
        "compare",
        "--config",
        &config("strong-impedance-seventy-terms.toml"),
        "--a",
        "born",
        "--b",
        "exact",
    ]);
    let max = column_max(&csv, 3);
    assert!(max <= 1e-2, "masked relErr {max:.3e}");
}

#[test]
fn ebc_error_shrinks_as_impedance_grows() {
    let base = config("baseline.toml");
    let weak =
        expect_ok(&["compare", "--config", &base, "--a", "ebc", "--b", "exact", "--beta", "0.002"]);
    let strong =
        expect_ok(&["compare", "--config", &base, "--a", "ebc", "--b", "exact", "--beta", "0.015"]);
    let (weak_max, strong_max) = (column_max(&weak, 3), column_max(&strong, 3));
    assert!(
        weak_max > strong_max,
        "expected the extrapolated boundary to improve with impedance: \
         {weak_max:.3e} vs {strong_max:.3e}"
    );
}

#[test]
fn figure_datasets_regenerate_in_under_a_minute() {
    let start = std::time::Instant::now();
    let dir = tempfile::tempdir().expect("tempdir");
    let jobs: [(&str, Vec<String>); 7] = [
        ("weak5.csv", vec![config("weak-impedance-five-terms.toml")]),
        ("moderate5.csv", vec![config("moderate-impedance-five-terms.toml")]),
        ("strong5.csv", vec![config("strong-impedance-five-terms.toml")]),
        ("strong70.csv", vec![config("strong-impedance-seventy-terms.toml")]),
        ("ebc-weak.csv", vec![config("baseline.toml"), "0.002".into()]),
        ("ebc-moderate.csv", vec![config("baseline.toml"), "0.005".into()]),
        ("ebc-strong.csv", vec![config("baseline.toml"), "0.015".into()]),
    ];
    for (name, job) in &jobs {
        let out = dir.path().join(name);
        let mut args = vec![
            "compare".to_owned(),
            "--config".to_owned(),
            job[0].clone(),
            "--out".to_owned(),
            out.to_str().unwrap().to_owned(),
        ];
        if let Some(beta) = job.get(1) {
            args.extend(["--a".into(), "ebc".into(), "--b".into(), "exact".into()]);
            args.extend(["--beta".into(), beta.clone()]);
        } else {
            args.extend(["--a".into(), "born".into(), "--b".into(), "exact".into()]);
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let csv = photondiff(&refs);
        assert!(csv.status.success(), "{name} failed");
        let text = std::fs::read_to_string(&out).expect("dataset written");
        assert_eq!(rows(&text).len(), 96, "{name} row count");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "regeneration took {elapsed:?}");
}
