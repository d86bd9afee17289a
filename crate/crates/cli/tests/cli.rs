//! End-to-end checks of the binary: exit codes, report files, config
//! override, and rerun determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn meanfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meanfix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn corpus_lists_operators() {
    let out = meanfix(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in [
        "example",
        "identity",
        "scale:<c>",
        "planar-halving",
        "shift",
    ] {
        assert!(text.contains(name), "missing {name} in corpus listing");
    }
}

#[test]
fn certify_passes_on_example_map() {
    let out = meanfix(&[
        "certify",
        "--op",
        "example",
        "--alpha",
        "0.5,0.5",
        "--p",
        "2",
        "--samples",
        "5000",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("violation = false"));
}

#[test]
fn certify_detects_violation_with_witness() {
    let out = meanfix(&[
        "certify",
        "--op",
        "scale:2",
        "--alpha",
        "0.5,0.5",
        "--p",
        "1",
        "--samples",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("violation = true"));
    assert!(text.contains("witness x ="));
    assert!(text.contains("witness y ="));
}

#[test]
fn usage_errors_exit_one() {
    // unknown flag
    let out = meanfix(&["certify", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown operator
    let out = meanfix(&["certify", "--op", "nope", "--alpha", "1.0", "--p", "1"]);
    assert_eq!(out.status.code(), Some(1));
    // invalid multi-index
    let out = meanfix(&[
        "certify", "--op", "identity", "--alpha", "0.5,0.6", "--p", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // duality map undefined at p = 1
    let out = meanfix(&["probe", "duality", "--p", "1", "--x", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    // iterate with a non-fixed reference
    let out = meanfix(&["iterate", "--op", "example", "--start", "e3", "--ref", "e2"]);
    assert_eq!(out.status.code(), Some(1));
    // help exits 0
    let out = meanfix(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn iterate_writes_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("trace.json");
    let csv = dir.path().join("trace.csv");
    let plot = dir.path().join("trace.dat");
    let out = meanfix(&[
        "iterate",
        "--op",
        "example",
        "--start",
        "e3",
        "--n",
        "50",
        "--ref",
        "zero",
        "--functionals",
        "1,2",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("q = 0"));
    assert!(text.contains("clusters = 1"));
    assert!(text.contains("demiclosed = true"));

    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed["summary"]["q"], 0.0);
    assert_eq!(parsed["summary"]["cluster_count"], 1);
    assert_eq!(parsed["summary"]["demiclosed"], true);

    let csv_text = fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("n,residual,distance,f1,f2\n"));
    assert_eq!(csv_text.lines().count(), 52); // header + 51 iterates

    let plot_text = fs::read_to_string(&plot).unwrap();
    assert!(plot_text.starts_with("# n distance\n"));
    assert!(plot_text.lines().any(|l| l == "0 1"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.ini");
    fs::write(
        &cfg,
        "op = identity\nalpha = 0.5,0.5\np = 2\nsamples = 200\nseed = 3\n",
    )
    .unwrap();
    // config alone: identity passes
    let out = meanfix(&["certify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("op=identity"));
    // flag overrides the operator, rest comes from the file
    let out = meanfix(&[
        "certify",
        "--config",
        cfg.to_str().unwrap(),
        "--op",
        "scale:2",
        "--p",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("op=scale:2"));
    assert!(stdout(&out).contains("samples=200"));
    // broken config: exit 1
    fs::write(&cfg, "nonsense = 1\n").unwrap();
    let out = meanfix(&["certify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn probe_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("opial.json");
    let out = meanfix(&[
        "probe",
        "opial",
        "--p",
        "2",
        "--v",
        "e1",
        "--n",
        "64",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let margin = parsed["margin"].as_f64().unwrap();
    assert!((margin - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-10);

    let csv = dir.path().join("modulus.csv");
    let out = meanfix(&[
        "probe",
        "modulus",
        "--p",
        "2",
        "--eps",
        "0.5,1",
        "--samples",
        "2000",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("eps,delta\n"));
    assert_eq!(text.lines().count(), 3);

    let out = meanfix(&["probe", "duality", "--p", "3", "--x", "1,-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Jx = 1,-4"));

    let out = meanfix(&["probe", "duality", "--p", "3", "--weak"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn center_grid_and_explicit() {
    let csv_dir = tempfile::tempdir().unwrap();
    let csv = csv_dir.path().join("phi.csv");
    let out = meanfix(&[
        "probe",
        "center",
        "--op",
        "planar-halving",
        "--start",
        "1,1",
        "--grid",
        "-2:2:0.01",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("y0 = (1,0)"));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("c,phi\n"));
    assert_eq!(text.lines().count(), 402);

    let out = meanfix(&[
        "probe", "center", "--op", "example", "--start", "e3", "--fixed", "zero",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("r0 = 0"));

    // candidate off the fixed-point set: config error
    let out = meanfix(&[
        "probe", "center", "--op", "example", "--start", "e3", "--fixed", "e2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn rerun_byte_identical(args: &[&str], json: &Path) {
    let out1 = meanfix(args);
    assert_eq!(out1.status.code(), Some(0), "{args:?}");
    let bytes1 = fs::read(json).unwrap();
    fs::remove_file(json).unwrap();
    let out2 = meanfix(args);
    assert_eq!(out2.status.code(), Some(0));
    let bytes2 = fs::read(json).unwrap();
    assert_eq!(bytes1, bytes2, "rerun changed JSON for {args:?}");
    assert_eq!(out1.stdout, out2.stdout);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let json_str = json.to_str().unwrap();
    rerun_byte_identical(
        &[
            "certify",
            "--op",
            "example",
            "--alpha",
            "0.5,0.5",
            "--p",
            "2",
            "--samples",
            "3000",
            "--seed",
            "11",
            "--json",
            json_str,
        ],
        &json,
    );
    rerun_byte_identical(
        &[
            "iterate",
            "--op",
            "planar-halving",
            "--start",
            "1,1",
            "--n",
            "80",
            "--ref",
            "1,0",
            "--json",
            json_str,
        ],
        &json,
    );
    rerun_byte_identical(
        &[
            "probe",
            "modulus",
            "--p",
            "2",
            "--eps",
            "1",
            "--samples",
            "2000",
            "--seed",
            "5",
            "--json",
            json_str,
        ],
        &json,
    );
}
