use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_edgelab"));
    c.env_remove("EDGELAB_WORKERS").env_remove("SOURCE_DATE_EPOCH");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("edgelab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("lab.toml");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn missing_config_exits_2() {
    let out = bin().args(["eqmeasure", "--config", "/nonexistent/lab.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_key_exits_2() {
    let d = scratch("unknown");
    let cfg = write_config(&d, "potential = [0.0, 0.0, 2.0]\ncolour = 3\n");
    let out = bin().args(["eqmeasure", "-c"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
}

#[test]
fn unwritable_output_exits_3() {
    let d = scratch("unwritable");
    let cfg = write_config(&d, "potential = [0.0, 0.0, 2.0]\n");
    let blocker = d.join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = bin()
        .args(["eqmeasure", "-c"])
        .arg(&cfg)
        .arg("-o")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn eqmeasure_csv_is_deterministic() {
    let d = scratch("determinism");
    let cfg = write_config(&d, "potential = [0.0, 0.0, 2.0]\n");
    let run = |workers: &str, name: &str| {
        let dir = d.join(name);
        let st = bin()
            .args(["eqmeasure", "-c"])
            .arg(&cfg)
            .arg("-o")
            .arg(&dir)
            .args(["--workers", workers])
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
        std::fs::read_to_string(dir.join("eqmeasure.csv")).unwrap()
    };
    let a = run("1", "a");
    let b = run("3", "b");
    assert_eq!(a, b);
    assert!(a.starts_with("study,quantity,params,value,aux,verdict,note,timestamp,config_hash\n"));
    assert!(a.contains("eqmeasure,c_v,,2.0"));
}

#[test]
fn json_output_and_default_path() {
    let d = scratch("json");
    let cfg = write_config(
        &d,
        &format!("potential = [0.0, 0.0, 2.0]\n[output]\ndir = {:?}\n", d.join("res").to_str().unwrap()),
    );
    let st = bin().args(["eqmeasure", "-c"]).arg(&cfg).args(["--format", "json"]).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let text = std::fs::read_to_string(d.join("res").join("eqmeasure.json")).unwrap();
    let v: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert!(v.iter().all(|r| r["verdict"] != "error"));
}

#[test]
fn failed_point_exits_4() {
    // No one-cut equilibrium for this double well.
    let d = scratch("error");
    let cfg = write_config(&d, "potential = [0.0, 0.0, -4.0, 0.0, 1.0]\n");
    let out = bin().args(["eqmeasure", "-c"]).arg(&cfg).arg("-o").arg(d.join("out")).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}
