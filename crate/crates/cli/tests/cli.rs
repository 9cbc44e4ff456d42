use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use photonlab_cli::dump::load_field;
use serde_json::Value;

fn photonlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_photonlab"));
    cmd.args(args).env_remove("PHOTONLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path
}

/// Run a config; returns (exit code, parsed report.json).
fn run(dir: &Path, json: &str, extra: &[&str]) -> (i32, Value) {
    let cfg = write_config(dir, "config.json", json);
    let out = dir.join("out");
    let mut args = vec![
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = photonlab(&args, &[]);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    // stdout carries the same report
    assert_eq!(serde_json::from_slice::<Value>(&o.stdout).unwrap(), report);
    (o.status.code().unwrap(), report)
}

fn metric(report: &Value, name: &str) -> f64 {
    report["metrics"][name]
        .as_f64()
        .unwrap_or_else(|| panic!("no metric {name}"))
}

fn shipped(name: &str) -> String {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    fs::read_to_string(root.join(format!("{name}.json"))).unwrap()
}

#[test]
fn biprism_one_photon_never_coincides() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run(dir.path(), &shipped("biprism"), &[]);
    assert_eq!(code, 0);
    assert!(metric(&r, "coincidence_probability") < 1e-14);
    assert!((metric(&r, "singles_sum") - 1.0).abs() < 1e-14);
    assert!(r["pass"].as_bool().unwrap());
}

#[test]
fn hegerfeldt_real_fields_stay_causal_psi_leaks() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run(dir.path(), &shipped("hegerfeldt"), &[]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["config"]["grid"]["n"], 4096);
    assert!(metric(&r, "leakage_real") < 1e-8);
    assert!(metric(&r, "leakage_posfreq") > 1e-3);
    // dumps load back and match the declared grid
    let artifacts = r["artifacts"].as_array().unwrap();
    assert!(!artifacts.is_empty());
    for name in artifacts {
        let snap = load_field(&dir.path().join("out").join(name.as_str().unwrap())).unwrap();
        assert_eq!(snap.grid.n, 4096);
    }
}

#[test]
fn fock_check_echoes_defect_and_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run(
        dir.path(),
        r#"{"experiment": "fock-check", "params": {"n_max": 3}}"#,
        &[],
    );
    assert_eq!(code, 0);
    let diag: Vec<f64> = r["details"]["commutator_defect_diagonal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(diag, [1.0, 1.0, 1.0, -3.0]);
    // defaults are declared in the echo, and every gated metric appears once
    let tolerances = r["config"]["tolerances"].as_object().unwrap();
    assert_eq!(tolerances["ladder_error"], 1e-14);
    for check in r["checks"].as_array().unwrap() {
        assert!(r["metrics"]
            .get(check["metric"].as_str().unwrap())
            .is_some());
    }
}

#[test]
fn metrics_are_printed_with_17_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &shipped("biprism"), &[]);
    let text = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    let line = text
        .lines()
        .find(|l| l.contains("\"coherent_coincidence_expected\""))
        .unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{number}");
}

#[test]
fn runs_are_deterministic_and_seeded() {
    let json = r#"{"experiment": "omega-check", "grid": {"dim": 3, "n": 10, "box_length": 1.0}, "seed": 11}"#;
    let metrics = |extra: &[&str]| {
        let dir = tempfile::tempdir().unwrap();
        let (code, r) = run(dir.path(), json, extra);
        assert_eq!(code, 0);
        (r["metrics"].clone(), r["config"]["seed"].clone())
    };
    let (a, seed_a) = metrics(&[]);
    let (b, _) = metrics(&[]);
    assert_eq!(a, b);
    assert_eq!(seed_a, 11);
    let (c, seed_c) = metrics(&["--seed", "12"]);
    assert_eq!(seed_c, 12);
    assert_ne!(a, c);
}

#[test]
fn evolve_dumps_round_trip_into_psi() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"experiment": "evolve", "grid": {"dim": 3, "n": 8, "box_length": 6.283185307179586},
                   "time": {"dt": 0.1, "steps": 10}, "seed": 1}"#;
    let (code, r) = run(dir.path(), json, &[]);
    assert_eq!(code, 0, "{r:#}");
    let out = dir.path().join("out");
    let a = load_field(&out.join("a_0001.field")).unwrap();
    let d = load_field(&out.join("d_0001.field")).unwrap();
    let psi = load_field(&out.join("psi_0001.field")).unwrap();
    let grid = std::sync::Arc::new(photonlab::KGrid::new(a.grid, Default::default()).unwrap());
    let rebuilt = photonlab::spectral::build_psi(&grid, &a, &d).unwrap();
    assert_eq!(rebuilt.complex().unwrap(), psi.complex().unwrap());
}

#[test]
fn tolerance_violation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"experiment": "biprism", "tolerances": {"coherent_coincidence_error": 0}}"#;
    let (code, r) = run(dir.path(), json, &[]);
    assert_eq!(code, 1);
    assert_eq!(r["pass"], false);
}

#[test]
fn blow_up_is_recorded_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"experiment": "evolve", "grid": {"dim": 3, "n": 6, "box_length": 6.283185307179586},
        "source": {"kind": "direct", "terms": [{"spatial": {"kind": "cosine", "mode": [1, 0, 0], "polarization": [0, 1, 0]},
                                                "temporal": {"kind": "constant", "value": 1.7976931348623157e308}}]},
        "time": {"dt": 1000.0, "steps": 3}, "params": {"amplitude": 0}}"#;
    let (code, r) = run(dir.path(), json, &[]);
    assert_eq!(code, 1);
    assert!(r["error"].as_str().unwrap().contains("non-finite"));
}

#[test]
fn validate_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(
        dir.path(),
        "good.json",
        r#"{"experiment": "kernel", "grid": {"dim": 1, "n": 64, "box_length": 1}}"#,
    );
    let o = photonlab(&["validate", "--config", good.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("commutator_offcone_rel < 1e-8"));

    let cases = [
        (
            r#"{"experiment": "kernel", "grid": {"dim": 1, "n": 64, "box_lenght": 1}}"#,
            "box_lenght",
        ),
        (
            r#"{"experiment": "evolve", "grid": {"dim": 3, "n": 8, "box_length": 1}}"#,
            "`time`",
        ),
        (
            r#"{"experiment": "hegerfeldt", "time": {"dt": 0.001, "steps": 4}}"#,
            "time.dt",
        ),
        (
            r#"{"experiment": "biprism", "tolerances": {"energy": 1}}"#,
            "tolerances.energy",
        ),
        (
            r#"{"experiment": "coherent", "grid": {"dim": 3, "n": 8, "box_length": 1}, "time": {"dt": 0.1, "steps": 2},
                "source": {"kind": "direct", "terms": [{"spatial": {"kind": "cosine", "mode": [1, 0, 0], "polarization": [1, 0, 0]},
                                                        "temporal": {"kind": "constant", "value": 1}}]}}"#,
            "`source`",
        ),
    ];
    for (json, field) in cases {
        let bad = write_config(dir.path(), "bad.json", json);
        for sub in ["validate", "run"] {
            let o = photonlab(&[sub, "--config", bad.to_str().unwrap()], &[]);
            assert_eq!(o.status.code(), Some(2), "{sub} {json}");
            let err = String::from_utf8_lossy(&o.stderr);
            assert!(err.contains(field), "{sub}: expected {field} in {err}");
        }
    }

    let o = photonlab(&["validate", "--config", "/definitely/not/here.json"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = photonlab(&["frobnicate"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = photonlab(&["run"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "k.json",
        r#"{"experiment": "kernel", "grid": {"dim": 1, "n": 128, "box_length": 1}}"#,
    );
    let out = dir.path().join("out");
    let args = [
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(
        photonlab(&args, &[("PHOTONLAB_THREADS", "2")])
            .status
            .code(),
        Some(0)
    );
    let o = photonlab(&args, &[("PHOTONLAB_THREADS", "zero")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PHOTONLAB_THREADS"));
}

#[test]
fn shipped_configs_validate() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        let o = photonlab(&["validate", "--config", path.to_str().unwrap()], &[]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}: {}",
            path.display(),
            String::from_utf8_lossy(&o.stderr)
        );
        n += 1;
    }
    assert_eq!(n, 8);
}

#[test]
fn config_echo_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (_, first) = run(dir.path(), &shipped("kernel"), &[]);
    let again = tempfile::tempdir().unwrap();
    let (code, second) = run(again.path(), &first["config"].to_string(), &[]);
    assert_eq!(code, 0);
    assert_eq!(first["metrics"], second["metrics"]);
    assert_eq!(
        first["config"]["tolerances"],
        second["config"]["tolerances"]
    );
}
