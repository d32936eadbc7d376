use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use triphoton::states::three_photon;
use triphoton::StateVector;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_triphoton"));
    cmd.env_remove("TRIPHOTON_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sweep_33x3.csv")
}

#[test]
fn sweep_reproduces_golden_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let res = run(&["sweep", "--theta-points", "33", "--phis", "0,0.5pi,pi", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 100);
    assert!(!text.contains('\r'));
    assert_eq!(text, std::fs::read_to_string(fixture()).unwrap());
}

#[test]
fn sweep_usage_and_runtime_errors() {
    assert_eq!(run(&["sweep", "--phis", ""]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--phis", "0,oops"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--theta-points", "0"]).status.code(), Some(2));
    let res = run(&["sweep", "--out", "/nonexistent-dir/sweep.csv"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("cannot write"));
}

#[test]
fn angles_accept_pi_suffix() {
    let a = run(&["sweep", "--theta-points", "5", "--phis", "0.5pi"]);
    let b = run(&["sweep", "--theta-points", "5", "--phis", &std::f64::consts::FRAC_PI_2.to_string()]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "theta_points = 3\nphis = pi\n").unwrap();
    let res = run(&["--config", cfg.to_str().unwrap(), "sweep"]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(stdout(&res).lines().count(), 4);
    let res = run(&["--config", cfg.to_str().unwrap(), "sweep", "--theta-points", "5"]);
    assert_eq!(stdout(&res).lines().count(), 6);

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "sweep"]).status.code(), Some(2));
}

#[test]
fn symmetry_table_cells() {
    let res = run(&["symmetry-table"]);
    assert_eq!(res.status.code(), Some(0));
    let cells: Value = serde_json::from_str(&stdout(&res)).unwrap();
    let cells = cells.as_array().unwrap();
    assert_eq!(cells.len(), 18);
    let class = |state: &str, pair: &str, dof: &str| -> String {
        cells
            .iter()
            .find(|c| c["state"] == state && c["pair"] == pair && c["dof"] == dof)
            .map(|c| c["class"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(class("sym", "same_mode_a", "internal"), "symmetric");
    assert_eq!(class("mix", "second_a_with_b", "internal"), "antisymmetric");
    assert_eq!(class("mix", "first_a_with_b", "external"), "vanishes");
    assert_eq!(class("sym", "first_a_with_b", "external"), "neither");
}

#[test]
fn validate_passes_with_fixture() {
    let res = run(&["validate", "--fixture", fixture().to_str().unwrap()]);
    let text = stdout(&res);
    assert_eq!(res.status.code(), Some(0), "{text}");
    assert!(text.contains("6/6 checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_rejects_main_text_sign() {
    let res = run(&["validate", "--inject-main-text-sign"]);
    assert_eq!(res.status.code(), Some(1));
    let text = stdout(&res);
    let line = text.lines().find(|l| l.contains("grid agreement")).unwrap();
    assert!(line.starts_with("FAIL"));
    assert!(line.contains("phi=3.1416"));
}

#[test]
fn validate_detects_corrupted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    let text = std::fs::read_to_string(fixture()).unwrap().replacen("0.333333333333", "0.333333333334", 1);
    std::fs::write(&bad, text).unwrap();
    let res = run(&["validate", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stdout(&res).contains("FAIL golden fixture"));
}

#[test]
fn montecarlo_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<(PathBuf, PathBuf)> =
        (0..2).map(|i| (dir.path().join(format!("r{i}.json")), dir.path().join(format!("r{i}.csv")))).collect();
    for (json, csv) in &paths {
        let res = run(&[
            "montecarlo", "--theta", "0.25pi", "--phi", "0", "--shots", "20000", "--seed", "17",
            "--json", json.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
        ]);
        assert_eq!(res.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&paths[0].0).unwrap(), std::fs::read(&paths[1].0).unwrap());
    assert_eq!(std::fs::read(&paths[0].1).unwrap(), std::fs::read(&paths[1].1).unwrap());

    let record: Value = serde_json::from_slice(&std::fs::read(&paths[0].0).unwrap()).unwrap();
    assert_eq!(record["shots"], 20000);
    assert_eq!(record["seed"], 17);
    assert_eq!(record["k"], 4);
    assert!(record["counts"]["3,0"].as_u64().unwrap() > 0);
    let csv = std::fs::read_to_string(&paths[0].1).unwrap();
    assert!(csv.starts_with("na,nb,raw,corrected,error\n"));
}

#[test]
fn montecarlo_seed_sources() {
    let args = ["montecarlo", "--theta", "0.3", "--phi", "pi", "--shots", "5000"];
    let flag = bin().args(args).args(["--seed", "9"]).output().unwrap();
    let env = bin().args(args).env("TRIPHOTON_SEED", "9").output().unwrap();
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(stdout(&flag), stdout(&env));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("seed.conf");
    std::fs::write(&cfg, "seed = 9\n").unwrap();
    let from_cfg = bin().args(["--config", cfg.to_str().unwrap()]).args(args).output().unwrap();
    assert_eq!(stdout(&flag), stdout(&from_cfg));

    let other = bin().args(args).args(["--seed", "10"]).output().unwrap();
    assert_ne!(stdout(&flag), stdout(&other));
    // the mixed-symmetry point never bunches
    assert!(!stdout(&flag).contains("\"3,0\""));
}

#[test]
fn hom_endpoints() {
    let res = run(&["hom", "--overlap", "0.954", "--delays", "0,10"]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(stdout(&res), "tau,coincidence\n0,0.023\n10,0.5\n");
    let res = run(&["hom", "--overlap", "1", "--from", "-2", "--to", "2", "--points", "5"]);
    assert_eq!(stdout(&res).lines().count(), 6);
    assert_eq!(run(&["hom", "--overlap", "1.5"]).status.code(), Some(2));
}

#[test]
fn prepare_reports_three_eighths() {
    let res = run(&["prepare", "--phi", "0.5pi"]);
    assert_eq!(res.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(v["success_probability"], 0.375);
    let state = StateVector::from_json(&v["state"].to_string()).unwrap();
    assert!(state.fidelity(&three_photon(std::f64::consts::FRAC_PI_2)).unwrap() > 1.0 - 1e-10);
}

#[test]
fn export_state_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mix.json");
    let res = run(&["export-state", "mix", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(r#"{"photons":3,"terms":[{"occ":"#));
    let s = StateVector::from_json(&text).unwrap();
    assert!(s.max_amplitude_difference(&triphoton::states::mix_state()) < 1e-11);
    assert_eq!(run(&["export-state", "nonsense"]).status.code(), Some(2));
}
