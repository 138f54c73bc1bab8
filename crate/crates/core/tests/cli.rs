use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlattice"))
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read_state(path: &Path) -> Vec<[f64; 2]> {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn missing_key_exits_2_and_names_it() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(&d, "c.json", r#"{"prepare": {"c0": [1, 0], "c1": [0, 0]}}"#);
    let o = run("prepare", &cfg, &d.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ramp"));

    let cfg = write_config(&d, "e.json", "{}");
    let o = run("embed", &cfg, &d.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`embed`"));
}

#[test]
fn unknown_key_and_bad_values_exit_2() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(&d, "c.json", r#"{"aqec": {"n_traj": 2, "kapa": 0.1}}"#);
    let o = run("aqec", &cfg, &d.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kapa"));
    let cfg = write_config(&d, "h.json", r#"{"hilbert": {"dim": 1, "lambda": 0.25}}"#);
    assert_eq!(run("wigner", &cfg, &d.path().join("out"), &[]).status.code(), Some(2));
    let o = run("wigner", &d.path().join("absent.json"), &d.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cutoff_guard_exits_3() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(&d, "c.json", r#"{"hilbert": {"dim": 12, "lambda": 0.25}, "wigner": {"states": ["cat_zero"]}}"#);
    assert_eq!(run("wigner", &cfg, &d.path().join("out"), &[]).status.code(), Some(3));
}

#[test]
fn zero_drive_keeps_initial_state() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(
        &d,
        "c.json",
        r#"{"prepare": {"c0": [0.5, 0], "c1": [0.8660254037844386, 0], "ramp": {"periods": 30, "beta_f": 0.0},
            "wigner_grid": {"nx": 21, "np": 21}}}"#,
    );
    let out = d.path().join("out");
    let o = run("prepare", &cfg, &out, &["--snapshots", "0,30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let psi = read_state(&out.join("final_state.json"));
    let overlap = (psi[0][0].powi(2) + psi[0][1].powi(2)).sqrt();
    assert!(overlap >= 1.0 - 1e-9, "{overlap}");
    for f in ["chart_amplitude.csv", "chart_phase.csv", "chart.json", "trajectory.csv", "wigner_step0.csv", "wigner_step30.json", "summary.json", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn manifest_rerun_is_byte_identical() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(
        &d,
        "c.json",
        r#"{"chart": {"n_k": 10, "n_t": 10, "k_max": 8}, "embed": {"ramp": {"periods": 20}, "pairs": [[[0.6, 0], [0.8, 0]]]}}"#,
    );
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    assert!(run("embed", &cfg, &a, &[]).status.success());
    assert!(run("embed", &a.join("manifest.json"), &b, &[]).status.success());
    for f in ["summary.json", "trajectory_word0.csv", "trajectory_superposition0.csv", "final_state_word1.json", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn aqec_is_deterministic_for_a_fixed_seed() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(
        &d,
        "c.json",
        r#"{"hilbert": {"dim": 40, "lambda": 0.25}, "aqec": {"n_traj": 6, "measurements": 3, "kappa": 0.01}}"#,
    );
    let (a, b, c) = (d.path().join("a"), d.path().join("b"), d.path().join("c"));
    assert!(run("aqec", &cfg, &a, &["--seed", "11"]).status.success());
    assert!(run("aqec", &cfg, &b, &["--seed", "11"]).status.success());
    for f in ["aqec_ensemble.csv", "aqec_pre_measurement.csv", "aqec_trajectories.csv", "summary.json", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["aqec"]["seed"], 11);
    assert_eq!(manifest["command"], "aqec");
    assert!(run("aqec", &cfg, &c, &["--seed", "12"]).status.success());
    let traj = |p: &Path| std::fs::read(p.join("aqec_trajectories.csv")).unwrap();
    assert_ne!(traj(&a), traj(&c));
    let rows = std::fs::read_to_string(a.join("aqec_ensemble.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 4);
}

#[test]
fn decompose_counts_every_gate() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(
        &d,
        "c.json",
        r#"{"decompose": {"target": {"kind": "embed_binomial"}, "gap": 1.4, "periods": 2000}}"#,
    );
    let out = d.path().join("out");
    assert!(run("decompose", &cfg, &out, &[]).status.success());
    let seq: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("gate_sequence.json")).unwrap()).unwrap();
    assert_eq!(seq["records"].as_array().unwrap().len(), 2000 * 21 * 21);
    assert_eq!(seq["periods"].as_array().unwrap().len(), 2000);

    let ramp = write_config(
        &d,
        "r.json",
        r#"{"chart": {"n_k": 4, "n_t": 6, "k_max": 8}, "decompose": {"target": {"kind": "single_state", "c0": [1, 0], "c1": [0, 0]},
            "gap": 1.3, "ramp": {"periods": 12}}}"#,
    );
    let out = d.path().join("ramp");
    assert!(run("decompose", &ramp, &out, &[]).status.success());
    let seq: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("gate_sequence.json")).unwrap()).unwrap();
    assert_eq!(seq["records"].as_array().unwrap().len(), 12 * 5 * 7);
    assert_eq!(seq["periods"][0]["beta"], 0.0);
}

#[test]
fn wigner_reads_saved_states() {
    let d = TempDir::new().unwrap();
    let state = d.path().join("s.json");
    std::fs::write(&state, "[[0, 0], [0, 0], [1, 0]]").unwrap();
    let cfg = write_config(
        &d,
        "c.json",
        &format!(
            r#"{{"wigner": {{"states": ["vacuum"], "state_files": [{:?}], "grid": {{"nx": 11, "np": 11}}, "q": false}}}}"#,
            state
        ),
    );
    let out = d.path().join("out");
    let o = run("wigner", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("wigner_vacuum.csv").exists() && out.join("wigner_file0.json").exists());
    assert!(!out.join("q_vacuum.csv").exists());
    let csv = std::fs::read_to_string(out.join("wigner_file0.csv")).unwrap();
    // |2⟩ has W(0) = +2/π
    let centre: f64 = csv.lines().nth(6).unwrap().split(',').nth(6).unwrap().parse().unwrap();
    assert!((centre - 2.0 / std::f64::consts::PI).abs() < 1e-12, "{centre}");
}
