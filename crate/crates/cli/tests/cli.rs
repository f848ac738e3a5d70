use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_rsl");

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn run_honours_the_output_dir_variable() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "thermal.json",
        r#"{"scenario": "thermal", "gamma": 1, "omega": 1, "beta": 0.5,
            "initial_state": "plus-y", "tau_list": [0.5, 1], "grid_points": 200}"#,
    );
    let out = tmp.path().join("env-out");
    let output = Command::new(BIN)
        .args(["run", "--config"])
        .arg(&cfg)
        .env("RSL_OUTPUT_DIR", &out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(String::from_utf8_lossy(&output.stdout).contains("2 rows"));
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("tau,dM,dS,T_M,T_tilde,T_qsl,T_g,T_d,x_M,x_tilde,epsilon,grid_points\n"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("results.json")).unwrap()).unwrap();
    assert_eq!(json["reports"].as_array().map(Vec::len), Some(2));
    let svg = std::fs::read_to_string(out.join("bounds.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn bad_config_reports_and_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "bad.json", r#"{"scenario": "dephasing", "gamma": 1, "tau_list": [1], "colour": 3}"#);
    let output = Command::new(BIN).args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("colour"));

    let missing = Command::new(BIN).args(["run", "--config"]).arg(tmp.path().join("nope.json")).output().unwrap();
    assert_ne!(missing.status.code(), Some(0));
}

#[test]
fn shipped_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let tmp = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let out = tmp.path().join(&name);
        let output = Command::new(BIN)
            .args(["run", "--config"])
            .arg(&path)
            .env("RSL_OUTPUT_DIR", &out)
            .output()
            .unwrap();
        assert!(output.status.success(), "{name}: {}", String::from_utf8_lossy(&output.stderr));
        assert!(out.join("results.csv").exists(), "{name}");
    }
}
