use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polgoi"));
    c.args(args).env_remove("POLGOI_CONFIG");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polgoi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn check_prints_the_conclusion() {
    let o = run(&["check", &data("box_pi1.mllp")], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("⊢ [↑X, ↓X⊥, ↑X, ↓X⊥], ↓X⊥, ↑X"), "{}", stdout(&o));
}

#[test]
fn bad_inputs_exit_with_two() {
    let empty = scratch("empty.mllp", "# only a comment\n");
    let broken = scratch("broken.mllp", "(ax X");
    let illegal = scratch("illegal.mllp", "(cut (ax X^) (ax Y^))");
    for p in [&empty, &broken, &illegal] {
        let o = run(&["check", p.to_str().unwrap()], &[]);
        assert_eq!(o.status.code(), Some(2), "{}", p.display());
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["check", "/nonexistent/proof.mllp"], &[]).status.code(), Some(2));
    assert_eq!(run(&["--n-alpha", "99", "exec", &data("eta_axiom.mllp")], &[]).status.code(), Some(2));
}

#[test]
fn exec_json_is_parseable() {
    let o = run(&["--json", "exec", &data("eta_axiom.mllp")], &[]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lower"]["entries"], serde_json::json!([["0", "1"], ["1", "0"]]));
    assert_eq!(v["upper"]["entries"][0][3], "p");
}

#[test]
fn normalize_trace_shows_box_extrusions() {
    let o = run(&["normalize", "--trace", &data("box_pi1.mllp")], &[]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("BoxExtrusion").count(), 2, "{out}");
    assert!(out.contains("normal form after 6 steps: (dn (up (ax X^) 1) 0)"));
}

#[test]
fn small_invariance_run_passes() {
    let o = run(&["--max-size", "6", "verify", "invariance"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("816 proofs checked, 0 failed"), "{}", stdout(&o));
}

#[test]
fn config_file_from_environment() {
    let cfg = scratch("run.cfg", "# defaults\nmax_size = 4\noutput = json\n");
    let o = run(&["verify", "converse"], &[("POLGOI_CONFIG", cfg.to_str().unwrap())]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true);
    }
    let bad = scratch("bad.cfg", "max_size = lots\n");
    let o = run(&["verify", "converse"], &[("POLGOI_CONFIG", bad.to_str().unwrap())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:1:"));
}

#[test]
fn intrel_demo_runs() {
    let o = run(&["intrel-demo"], &[]);
    assert!(o.status.success(), "{}", stdout(&o));
}
