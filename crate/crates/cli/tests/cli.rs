use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const HERMITE: &str = "family = \"hermite\"\nmax_total_degree = 3\n[parameters]\nc1 = \"1\"\nc2 = \"-1\"\n";

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn mopkit(args: &[&str], config: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mopkit"));
    cmd.arg(args[0]).arg("--config").arg(config).args(&args[1..]);
    match threads {
        Some(t) => cmd.env("MOPKIT_THREADS", t),
        None => cmd.env_remove("MOPKIT_THREADS"),
    };
    cmd.output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compute_hermite_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h.toml", HERMITE);
    let out = mopkit(&["compute"], &cfg, None);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["indices"].as_array().unwrap();
    let row21 = rows.iter().find(|r| r["index"] == "(2,1)").unwrap();
    assert_eq!(row21["a"], serde_json::json!(["1/1", "1/2"]));
    assert_eq!(row21["b"][1], "-1/2");
}

#[test]
fn compute_csv_projection() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h.toml", HERMITE);
    let csv = dir.path().join("table.csv");
    let out = mopkit(&["compute", "--out", csv.to_str().unwrap()], &cfg, None);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("index,direction,a,b\n"));
    assert!(text.contains("\"(2,1)\",1,1/1,"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("family = \"laguerre1\"\nmax_total_degree = 2\n[parameters]\nalpha1 = \"3/2\"\nalpha2 = \"1/2\"\n", "integer"),
        ("family = \"cubic\"\nmax_total_degree = 2\n[parameters]\nc1 = \"1\"\nc2 = \"2\"\n", "precision_digits"),
        ("family = \"hermite\"\nmax_total_degree = 2\n[parameters]\nc1 = \"0.5\"\nc2 = \"1\"\n", "rational"),
        ("family = \"hermite\"\nmax_total_degree = 2\ncolour = 1\n[parameters]\nc1 = \"1\"\nc2 = \"2\"\n", "colour"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.toml"), text);
        let out = mopkit(&["compute"], &cfg, None);
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", stderr(&out));
        assert!(stderr(&out).contains(needle), "case {i}: {}", stderr(&out));
    }
    let cfg = write(dir.path(), "h.toml", HERMITE);
    let out = mopkit(&["verify"], &cfg, Some("0"));
    assert_eq!(out.status.code(), Some(2));
    let out = mopkit(&["verify", "--suite", "s1s2"], &cfg, None);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn numeric_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "family = \"cubic\"\nmax_total_degree = 2\nprecision_digits = 30\n[parameters]\nc1 = \"1000000\"\nc2 = \"2\"\n",
    );
    let out = mopkit(&["verify", "--suite", "recurrence"], &cfg, None);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h.toml", HERMITE);
    let one = mopkit(&["verify"], &cfg, Some("1"));
    let many = mopkit(&["verify"], &cfg, Some("4"));
    let again = mopkit(&["verify"], &cfg, None);
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn cubic_recurrence_and_compat_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "family = \"cubic\"\nmax_total_degree = 4\nprecision_digits = 60\nsuites = [\"recurrence\", \"compat\"]\n[parameters]\nc1 = \"1\"\nc2 = \"2\"\n",
    );
    let out = mopkit(&["verify"], &cfg, None);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for suite in v["suites"].as_array().unwrap() {
        for r in suite["records"].as_array().unwrap() {
            assert_eq!(r["status"], "pass");
            assert!(r["residual"].as_f64().unwrap() <= 1e-40);
        }
    }
}

#[test]
fn perturbed_compat_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h.toml", HERMITE);
    let out = mopkit(&["verify", "--suite", "compat", "--perturb", "b", "1e-3"], &cfg, None);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["perturbation"], "b relative 1e-3");
    assert!(v["summary"]["fail"].as_u64().unwrap() > 0);
}
