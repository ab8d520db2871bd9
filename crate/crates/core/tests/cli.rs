use std::fs;
use std::path::Path;

use disturbance::cli::run_from;
use disturbance::curves;
use disturbance::quantum::{Instrument, Povm};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("disturbance").chain(args.iter().copied());
    let code = run_from(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Header and rows of a CSV; every row must match the header width.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect::<Vec<_>>();
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect::<Vec<_>>())
        .collect();
    for r in &rows {
        assert_eq!(r.len(), header.len(), "ragged row {r:?}");
    }
    (header, rows)
}

fn col(rows: &[Vec<String>], header: &[String], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn curve_rows_per_block() {
    let r = run(&["curve", "--pair", "tv-diamond", "--m", "2,3,5", "--points", "101"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (header, rows) = parse_csv(&r.stdout);
    assert_eq!(header, ["Delta", "delta", "m", "measure_pair"]);
    assert_eq!(rows.len(), 303);
    let ms = col(&rows, &header, "m");
    assert_eq!(ms[0], 2.0);
    assert_eq!(ms[302], 5.0);
}

#[test]
fn curve_fidelity_endpoints() {
    let r = run(&["curve", "--pair", "tv-fidelity", "--d", "2", "--points", "2"]);
    assert_eq!(r.code, 0);
    let (header, rows) = parse_csv(&r.stdout);
    assert_eq!(col(&rows, &header, "Delta"), [1.0, 0.5]);
    assert_eq!(col(&rows, &header, "delta"), [0.5, 0.0]);
}

#[test]
fn curve_usage_errors() {
    assert_eq!(run(&["curve", "--pair", "tv-diamond", "--points", "0"]).code, 2);
    assert_eq!(run(&["curve", "--pair", "tv-nothing"]).code, 2);
    assert_eq!(run(&["curve", "--pair", "tv-trace", "--stop", "1.5"]).code, 2);
    assert_eq!(run(&["curve", "--pair", "tv-trace", "--d", "1"]).code, 2);
    assert_eq!(run(&["curve"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn family_sweep_quarter_error_row() {
    let r = run(&["family-sweep", "--d", "2", "--delta", "0.25"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = parse_csv(&r.stdout);
    let f = col(&rows, &h, "f")[0];
    let trace = col(&rows, &h, "Delta_tv")[0];
    let dia = col(&rows, &h, "Delta_diamond")[0];
    assert!((f - 0.9330127).abs() < 1e-6);
    assert!((dia - 0.1339746).abs() < 1e-6);
    assert!((dia - 2.0 * trace).abs() < 1e-6);
    assert!((dia - 2.0 * (1.0 - f)).abs() < 1e-6);
    assert!((col(&rows, &h, "delta_tv")[0] - 0.25).abs() < 1e-12);
}

#[test]
fn family_sweep_zero_error_is_maximally_disturbing() {
    let r = run(&["family-sweep", "--d", "2", "--delta", "0"]);
    assert_eq!(r.code, 0);
    let (h, rows) = parse_csv(&r.stdout);
    assert!((col(&rows, &h, "f")[0] - 0.5).abs() < 1e-6);
    assert!((col(&rows, &h, "Delta_diamond")[0] - 1.0).abs() < 1e-6);
}

#[test]
fn family_sweep_rejects_bad_input() {
    assert_eq!(run(&["family-sweep", "--d", "2", "--delta", "0.6"]).code, 2);
    assert_eq!(run(&["family-sweep", "--d", "2", "--delta=-0.1"]).code, 2);
    assert_eq!(run(&["family-sweep", "--d", "1"]).code, 2);
    assert_eq!(run(&["family-sweep", "--points", "0"]).code, 2);
}

#[test]
fn family_sweep_qutrit_lies_on_curves() {
    let r = run(&["family-sweep", "--d", "3", "--points", "11"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = parse_csv(&r.stdout);
    assert_eq!(rows.len(), 11);
    let tv = col(&rows, &h, "delta_tv");
    let f = col(&rows, &h, "f");
    let avg = col(&rows, &h, "avg_f");
    let trace = col(&rows, &h, "Delta_tv");
    let dia = col(&rows, &h, "Delta_diamond");
    for i in 0..11 {
        assert!((curves::curve_tv_fidelity(3, f[i]) - tv[i]).abs() < 2e-4);
        assert!((curves::curve_tv_avg_fidelity(3, avg[i]) - tv[i]).abs() < 2e-4);
        assert!((curves::curve_tv_trace(3, trace[i]) - tv[i]).abs() < 2e-4);
        assert!((curves::curve_tv_diamond(3, dia[i]) - tv[i]).abs() < 2e-4);
    }
}

#[test]
fn seeded_runs_are_identical() {
    let args = ["family-sweep", "--d", "3", "--delta", "0.1,0.4", "--restarts", "20", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn sdp_basis_matches_closed_form() {
    let r = run(&["sdp-tradeoff", "--povm", "basis", "--d", "2", "--points", "11"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = parse_csv(&r.stdout);
    assert_eq!(h, ["lambda", "nu", "delta_linf", "relative_gap", "iterations"]);
    assert_eq!(rows.len(), 11);
    for (l, nu) in col(&rows, &h, "lambda").into_iter().zip(col(&rows, &h, "nu")) {
        assert!((nu - curves::diamond_from_tv(2, l)).abs() < 1e-5, "λ={l}: ν={nu}");
    }
}

#[test]
fn sdp_dumps_and_heuristic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    let prob = dir.path().join("prob");
    let heur = dir.path().join("heuristic.csv");
    let r = run(&[
        "sdp-tradeoff",
        "--povm",
        "sic2",
        "--points",
        "3",
        "--dump-instruments",
        inst.to_str().unwrap(),
        "--dump-problem",
        prob.to_str().unwrap(),
        "--heuristic-out",
        heur.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = parse_csv(&r.stdout);
    let nu0 = col(&rows, &h, "nu")[0];
    assert!(nu0 > 0.5, "ν(0) = {nu0}");

    for i in 0..3 {
        let text = fs::read_to_string(inst.join(format!("instrument_{i:03}.json"))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let back: Instrument = serde_json::from_value(v["instrument"].clone()).unwrap();
        assert_eq!(back.outcomes(), 4);
        assert!(v["lambda"].is_number() && v["nu"].is_number());
        let sdpa = fs::read_to_string(prob.join(format!("problem_{i:03}.dat-s"))).unwrap();
        assert!(sdpa.starts_with('"'));
        assert!(!sdpa.contains("-0e0"));
    }

    let (hh, hrows) = parse_csv(&fs::read_to_string(&heur).unwrap());
    assert_eq!(hh, ["t", "lambda", "nu_heuristic", "nu_sdp"]);
    for r in &hrows {
        let nu_h: f64 = r[2].parse().unwrap();
        let nu_s: f64 = r[3].parse().unwrap();
        assert!(nu_s <= nu_h + 1e-7, "{r:?}");
    }
    assert!(r.stderr.contains("heuristic family"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn sdp_rejects_invalid_povm_files() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "g.json", "not json");
    let r = run(&["sdp-tradeoff", "--povm", &garbage]);
    assert_eq!(r.code, 2);
    assert!(!r.stderr.is_empty());

    // well-formed JSON, but the effects sum to 2·1
    let bad = r#"{"dim":2,"outcomes":2,"effects":[
        [[[1,0],[0,0]],[[0,0],[1,0]]],
        [[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
    let bad = write(dir.path(), "bad.json", bad);
    let r = run(&["sdp-tradeoff", "--povm", &bad]);
    assert!(r.stderr.contains("identity") || r.stderr.contains("sum"), "{}", r.stderr);
    assert_eq!(run(&["sdp-tradeoff", "--povm", &bad]).code, 2);
    assert_eq!(run(&["sdp-tradeoff", "--povm", "/nonexistent/povm.json"]).code, 2);
    assert_eq!(run(&["sdp-tradeoff", "--povm", "degenerate", "--d", "3"]).code, 2);
    assert_eq!(run(&["sdp-tradeoff", "--povm", "basis", "--lambda", "1.5"]).code, 2);
}

#[test]
fn sdp_accepts_a_povm_file() {
    let dir = tempfile::tempdir().unwrap();
    let sic = run(&["sic", "--d", "2"]);
    let path = write(dir.path(), "sic.json", &sic.stdout);
    let r = run(&["sdp-tradeoff", "--povm", &path, "--lambda", "0.25"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = parse_csv(&r.stdout);
    assert!(col(&rows, &h, "nu")[0].abs() < 1e-6);
}

#[test]
fn sic_json_round_trips() {
    for (d, m) in [(2usize, 4usize), (3, 9)] {
        let r = run(&["sic", "--d", &d.to_string()]);
        assert_eq!(r.code, 0);
        let p: Povm = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!((p.dim(), p.outcomes()), (d, m));
        let again = serde_json::to_string_pretty(&p).unwrap() + "\n";
        assert_eq!(again, r.stdout);
    }
    assert_eq!(run(&["sic", "--d", "4"]).code, 2);
}

#[test]
fn verify_reports_json() {
    let r = run(&["verify", "corz"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["suite"], "corz");
    assert_eq!(v["passed"], true);
    assert!(v["properties"].as_array().unwrap().len() >= 4);

    for suite in ["curves", "sdp"] {
        assert_eq!(run(&["verify", suite, "--samples", "4"]).code, 0, "{suite}");
    }
    let r = run(&["verify", "twirl", "--samples", "4", "--restarts", "50"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(run(&["verify", "fuchs-van-de-graaf", "--samples", "4"]).code, 0);
    assert_eq!(run(&["verify", "twirl", "--samples", "0"]).code, 2);
    assert_eq!(run(&["verify", "nothing"]).code, 2);
}

#[test]
fn out_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let plot = dir.path().join("c.gp");
    let r = run(&[
        "curve",
        "--pair",
        "tv-diamond",
        "--m",
        "2,3",
        "--points",
        "5",
        "--out",
        csv.to_str().unwrap(),
        "--emit-plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let (_, rows) = parse_csv(&fs::read_to_string(&csv).unwrap());
    assert_eq!(rows.len(), 10);
    let script = fs::read_to_string(&plot).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(script.contains("m=3"));

    assert_eq!(run(&["curve", "--pair", "tv-trace", "--emit-plot", "x.gp"]).code, 2);
    let sic = dir.path().join("s.json");
    let args = ["sic", "--d", "2", "--out", sic.to_str().unwrap(), "--emit-plot", "x.gp"];
    assert_eq!(run(&args).code, 2);
}

#[test]
fn tolerance_is_validated() {
    assert_eq!(run(&["--tol", "0", "sdp-tradeoff", "--povm", "basis"]).code, 2);
    let r = run(&["--tol", "1e-6", "sdp-tradeoff", "--povm", "basis", "--lambda", "0.25"]);
    assert_eq!(r.code, 0);
}
