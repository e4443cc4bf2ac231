use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lapfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lapfem")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, format!("{body}\n[grid]\nnx_half = 16\nny = 16\n")).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn every_command_succeeds_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "nu = 0.01\n");
    for cmd in ["solve", "sweep", "decompose", "limit", "oracle1d", "plasma-gen", "verify"] {
        let out = dir.path().join(cmd);
        let o = lapfem(&[cmd, "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["command"], cmd);
    }
}

#[test]
fn sweep_table_has_one_row_per_nu() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "");
    let out = dir.path().join("s");
    assert_eq!(code(&lapfem(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"])), 0);
    let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "nu,l2,xgrad,sqrtnu_grad,g_hm12,g_h12,jump_res,cauchy");
    assert_eq!(lines.len(), 7);
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "");
    let read = |name: &str| {
        let out = dir.path().join(name);
        assert_eq!(code(&lapfem(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"])), 0);
        fs::read(out.join("sweep.csv")).unwrap()
    };
    assert_eq!(read("a"), read("b"));
}

#[test]
fn zero_source_gives_zero_limit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "[rhs]\npreset = \"zero\"\n");
    let out = dir.path().join("z");
    let o = lapfem(&["limit", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["g_l2"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e");
    let out = out.to_str().unwrap();
    let bad = config(dir.path(), "branch = 3\n");
    assert_eq!(code(&lapfem(&["limit", "--config", &bad, "--out", out])), 2);
    assert_eq!(code(&lapfem(&["plot"])), 2);
    assert_eq!(code(&lapfem(&["solve", "--config", "/nonexistent/run.toml", "--out", out])), 2);
    // solve without any nu
    let no_nu = config(dir.path(), "");
    assert_eq!(code(&lapfem(&["solve", "--config", &no_nu, "--out", out])), 2);
    assert_eq!(code(&lapfem(&["solve", "--config", &no_nu, "--out", out, "--nu", "0"])), 2);
}

#[test]
fn negative_nu_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "");
    let out = dir.path().join("n");
    let o = lapfem(&["solve", "--config", &cfg, "--out", out.to_str().unwrap(), "--nu", "-0.05"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
