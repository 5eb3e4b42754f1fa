//! End-to-end runs of the `dirbreak` binary against pinned outputs.
//!
//! Set `DIRBREAK_UPDATE_GOLDEN=1` to rewrite the files under `tests/golden`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirbreak"))
        .args(args)
        .current_dir(dir())
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let got = stdout(args);
    let path = dir().join("golden").join(name);
    if std::env::var_os("DIRBREAK_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "output of {args:?} differs from {name}");
}

#[test]
fn pinned_outputs() {
    golden(
        "mean.json",
        &["mean", "--input", "data/three_points_deg.csv", "--degrees"],
    );
    golden(
        "mean_sphere.txt",
        &["mean", "--input", "data/sphere.csv", "--format", "text"],
    );
    golden(
        "bounds_uniform.json",
        &["bounds", "--dist", "uniform", "--metric", "kuiper"],
    );
    golden(
        "bounds_vm.csv",
        &["bounds", "--dist", "vm:mu=0,kappa=2", "--format", "csv"],
    );
    golden(
        "breakdown_pointmass.json",
        &["breakdown", "--dist", "pointmass:theta=0", "--metric", "tv"],
    );
    golden(
        "breakdown_vm_kuiper.json",
        &[
            "breakdown",
            "--dist",
            "vm:mu=90,kappa=2",
            "--degrees",
            "--metric",
            "kuiper",
        ],
    );
    golden(
        "symmetrize.txt",
        &[
            "symmetrize",
            "--dist",
            "vm:mu=30,kappa=2",
            "--degrees",
            "--k",
            "3",
            "--format",
            "text",
        ],
    );
    golden(
        "fsbp.json",
        &["fsbp", "--input", "data/three_points_deg.csv", "--degrees"],
    );
    golden(
        "fsbp_sampled.json",
        &["fsbp", "--dist", "vm:kappa=1", "--sample", "25"],
    );
    golden("sweep.csv", &["sweep"]);
}

#[test]
fn documented_examples() {
    let v = json(&["mean", "--input", "data/three_points_deg.csv", "--degrees"]);
    let r = &v["result"];
    assert_eq!(r["defined"], true);
    assert!((r["direction"].as_f64().unwrap() - 10.0).abs() < 1e-7);
    // mean resultant of {0°, 10°, 20°} is (1 + 2cos 10°)/3
    let want = (1.0 + 2.0 * 10f64.to_radians().cos()) / 3.0;
    assert!((r["resultant_length"].as_f64().unwrap() - want).abs() < 1e-6);

    let v = json(&["bounds", "--dist", "uniform", "--metric", "kuiper"]);
    assert_eq!(v["result"]["bound_uniform"], 0.0);
    assert_eq!(v["result"]["bound_symmetrized"], 0.0);
    assert_eq!(v["result"]["bound_group"], 0.5);

    let v = json(&["breakdown", "--dist", "pointmass:theta=0", "--metric", "tv"]);
    let b = v["result"]["bias_breakdown"].as_f64().unwrap();
    assert!((b - 0.5).abs() <= 5e-4 + 1e-12, "{b}");
    for key in ["command", "config", "result"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn sweep_flip_threshold_is_increasing() {
    let csv = stdout(&["sweep", "--kappas", "0.05,0.1,0.5,1,2,5,10,50"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("kappa,flip_threshold,kuiper_to_uniform,tv_symmetrized_bound")
    );
    let flips: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(flips.len(), 8);
    assert!(flips.windows(2).all(|w| w[0] < w[1]), "{flips:?}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["breakdown", "--dist", "uniform"]), Some(3));
    assert_eq!(
        code(&["breakdown", "--input", "data/antipodal_pairs.csv"]),
        Some(3)
    );
    assert_eq!(code(&["mean", "--input", "data/malformed.csv"]), Some(2));
    assert_eq!(code(&["mean", "--input", "data/missing.csv"]), Some(2));
    assert_eq!(code(&["mean"]), Some(2));
    assert_eq!(code(&["mean", "--dist", "vm:kappa=-1"]), Some(2));
    assert_eq!(
        code(&["mean", "--dist", "uniform", "--input", "data/sphere.csv"]),
        Some(2)
    );
    assert_eq!(
        code(&["bounds", "--dist", "uniform:sphere", "--k", "3"]),
        Some(2)
    );
    assert_eq!(code(&["bounds", "--dist", "uniform", "--k", "1"]), Some(2));
    assert_eq!(code(&["fsbp", "--dist", "vm:kappa=1"]), Some(2));
    assert_eq!(
        code(&["mean", "--seed", "zz", "--dist", "uniform"]),
        Some(2)
    );
    assert_eq!(code(&["mean", "--dist", "uniform"]), Some(0));
}

#[test]
fn undefined_mean_is_reported_not_failed() {
    let v = json(&["mean", "--input", "data/antipodal_pairs.csv"]);
    assert_eq!(v["result"]["defined"], false);
    assert!(v["result"]["direction"].is_null());
    let v = json(&["fsbp", "--input", "data/antipodal_pairs.csv"]);
    assert_eq!(v["result"]["replaced"], 0);
}

#[test]
fn seeded_sampling_is_reproducible() {
    let a = stdout(&[
        "mean",
        "--dist",
        "vm:kappa=3",
        "--sample",
        "50",
        "--seed",
        "0x1234",
    ]);
    let b = stdout(&[
        "mean",
        "--dist",
        "vm:kappa=3",
        "--sample",
        "50",
        "--seed",
        "0x1234",
    ]);
    let c = stdout(&[
        "mean",
        "--dist",
        "vm:kappa=3",
        "--sample",
        "50",
        "--seed",
        "0x1235",
    ]);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn files_written_elsewhere_are_read() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("radians.csv");
    std::fs::write(&path, "0.5\n0.7\n").unwrap();
    let v = json(&["mean", "--input", path.to_str().unwrap()]);
    assert!((v["result"]["direction"].as_f64().unwrap() - 0.6).abs() < 1e-8);
}
