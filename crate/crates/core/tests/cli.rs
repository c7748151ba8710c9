use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hardy_unitary::colligation::{bcl_colligation, Colligation};
use hardy_unitary::families::rng;
use hardy_unitary::io::{ColligationJson, SymbolJson};
use hardy_unitary::linalg::{c, diag, identity};
use hardy_unitary::symbol::MatrixSymbol;
use serde_json::Value;

fn cli(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy-unitary")).args(args).current_dir(dir).output().unwrap()
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) {
    fs::write(dir.join(name), serde_json::to_vec(value).unwrap()).unwrap();
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn decompose_constant_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let sym = MatrixSymbol::constant(identity(2) * c(0.0, 1.0));
    write_json(dir.path(), "sym.json", &SymbolJson::from(&sym));
    let out = cli(&["decompose", "--input", "sym.json", "--out", "report.json", "--window", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["report"]["subspace"]["dim"], 8);
    assert_eq!(report["config"]["window"], 4);
}

#[test]
fn decompose_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let goor = MatrixSymbol::scalar([(-1, c(0.5, 0.0)), (1, c(0.5, 0.0))]);
    write_json(dir.path(), "goor.json", &SymbolJson::from(&goor));
    let out = cli(&["decompose", "--input", "goor.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["report"]["subspace"]["dim"], 0);
}

#[test]
fn decompose_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    assert_eq!(cli(&["decompose", "--input", "broken.json"], dir.path()).status.code(), Some(1));
    assert_eq!(cli(&["decompose", "--input", "missing.json"], dir.path()).status.code(), Some(1));

    let sym = MatrixSymbol::scalar([(3, c(1.0, 0.0))]);
    write_json(dir.path(), "z3.json", &SymbolJson::from(&sym));
    assert_eq!(cli(&["decompose", "--input", "z3.json", "--grid", "4"], dir.path()).status.code(), Some(2));
    assert_eq!(cli(&["decompose", "--input", "z3.json", "--tol", "-1"], dir.path()).status.code(), Some(2));
    assert_eq!(cli(&["decompose", "--input", "z3.json", "--window", "0"], dir.path()).status.code(), Some(2));

    let big = MatrixSymbol::scalar([(1, c(2.0, 0.0))]);
    write_json(dir.path(), "big.json", &SymbolJson::from(&big));
    assert_eq!(cli(&["decompose", "--input", "big.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn transfer_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bcl = bcl_colligation(&identity(2), &diag(&[1.0, 0.0]), 1e-12).unwrap();
    write_json(dir.path(), "bcl.json", &ColligationJson::from(&bcl));
    let out = cli(&["transfer", "--input", "bcl.json", "--out", "t.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_json(&dir.path().join("t.json"));
    assert!(t["validation"]["valid"].as_bool().unwrap());
    assert!(t["transfer"]["max_defect1"].as_f64().unwrap() <= 1e-10);

    // With no internal space the transfer function is the constant A.
    let plain = Colligation::random(&mut rng(3, 0), 3, 0);
    write_json(dir.path(), "plain.json", &ColligationJson::from(&plain));
    let out = cli(&["transfer", "--input", "plain.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let t: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(t["transfer"]["max_defect1"].as_f64().unwrap() <= 1e-12);
    assert!(t["transfer"]["max_defect2"].as_f64().unwrap() <= 1e-12);

    let mut json = serde_json::to_value(ColligationJson::from(&bcl)).unwrap();
    json["A"]["re"][0][0] = Value::from(0.5);
    fs::write(dir.path().join("bad.json"), json.to_string()).unwrap();
    assert_eq!(cli(&["transfer", "--input", "bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn scenario_runs_and_indexes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["scenario", "--scenario", "goor", "--out", "res"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let index = read_json(&dir.path().join("res/index.json"));
    assert_eq!(index["overall"], true);
    let results = index["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for r in results {
        let file = dir.path().join("res").join(r["file"].as_str().unwrap());
        assert_eq!(read_json(&file)["scenario_id"], "goor");
    }
    assert_eq!(cli(&["scenario", "--scenario", "nonexistent"], dir.path()).status.code(), Some(2));
}

#[test]
fn scenario_all_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let first = cli(&["scenario", "--out", "res", "--seed", "3"], dir.path());
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stdout));
    let snapshot = fs::read(dir.path().join("res/index.json")).unwrap();
    let second = cli(&["scenario", "--out", "res", "--seed", "3"], dir.path());
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(snapshot, fs::read(dir.path().join("res/index.json")).unwrap());
}
