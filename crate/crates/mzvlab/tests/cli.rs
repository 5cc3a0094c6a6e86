//! End-to-end checks of the installed binary: output shapes, exit codes,
//! shorthand handling, JSON determinism, cache round-trips.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzvlab"))
        .args(args)
        .env_remove("MZVLAB_PREC")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], prec: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzvlab"))
        .args(args)
        .env("MZVLAB_PREC", prec)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_token(o: &Output) -> String {
    let s = stdout(o);
    let rest = s.strip_prefix("value=").expect("value= prefix");
    rest.split_whitespace().next().unwrap().to_string()
}

#[test]
fn eval_scalar_shape() {
    let o = run(&["eval", "zeta", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("value=1.64493406684822643647"), "{s}");
    assert!(s.contains(" err="), "{s}");
    assert!(s.ends_with('\n'));
}

#[test]
fn eval_tpoly_shape() {
    let o = run(&["eval", "zeta-t", "1,2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("tpoly=["), "{s}");
    assert!(s.trim_end().ends_with(']'), "{s}");
    assert_eq!(s.matches(", ").count(), 1, "depth-2 index gives 2 coefficients: {s}");
}

#[test]
fn ones_shorthand_expands() {
    let a = run(&["eval", "zeta", "{1}^2,3"]);
    let b = run(&["eval", "zeta", "1,1,3"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn t_flag_evaluates_polynomial() {
    let a = run(&["eval", "zeta-t", "2", "--t", "0"]);
    let b = run(&["eval", "zeta", "2"]);
    assert!(a.status.success());
    assert_eq!(value_token(&a), value_token(&b));
}

#[test]
fn usage_and_domain_exits() {
    for args in [
        vec!["eval", "bogus", "2"],
        vec!["eval", "zeta", "0,2"],
        vec!["eval", "zeta", "1"],
        vec!["eval", "zeta", "2", "--t", "0.5"],
        vec!["verify", "--suite", "bogus"],
        vec!["verify", "--suite", "remark", "--prec", "10"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "args {args:?}");
        assert!(!String::from_utf8(o.stderr.clone()).unwrap().is_empty(), "args {args:?}");
    }
}

#[test]
fn failing_suite_exits_one() {
    // tolerance far below the attainable error at 20 digits trips the
    // vacuity guard, so every row fails
    let o = run(&[
        "verify", "--suite", "remark", "--pmax", "0", "--prec", "20", "--tol", "1e-60",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"all_pass\":false"));
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "--suite", "remark", "--pmax", "2", "--prec", "30"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    let c = run(&threaded);
    assert_eq!(a.stdout, c.stdout, "report must not depend on the thread count");

    let s = stdout(&a);
    assert!(s.starts_with("{\"suite\":\"remark\",\"prec_digits\":30,\"results\":["), "{s}");
    assert!(s.ends_with("\"all_pass\":true}\n"), "{s}");
}

#[test]
fn json_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&[
        "verify", "--suite", "remark", "--pmax", "1", "--prec", "20",
        "--json", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let file = std::fs::read(&path).unwrap();
    assert_eq!(file, o.stdout);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mzv.cache");
    let args = |p: &Path| {
        vec![
            "eval".to_string(),
            "zeta".to_string(),
            "1,2".to_string(),
            "--cache".to_string(),
            p.to_str().unwrap().to_string(),
        ]
    };
    let argv = args(&path);
    let argv: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
    let cold = run(&argv);
    assert!(cold.status.success());
    assert!(path.exists(), "cache file written");
    let warm = run(&argv);
    assert_eq!(cold.stdout, warm.stdout);

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("index=")), "{text}");
}

#[test]
fn env_precision_and_flag_override() {
    let short = run_env(&["eval", "zeta", "2"], "20");
    let long = run_env(&["eval", "zeta", "2", "--prec", "30"], "20");
    assert!(short.status.success() && long.status.success());
    let (vs, vl) = (value_token(&short), value_token(&long));
    assert!(vl.len() > vs.len(), "flag must override the env var: {vs} vs {vl}");
    assert!(vl.starts_with(&vs[..vs.len() - 1]), "{vs} vs {vl}");

    let bad = run_env(&["eval", "zeta", "2"], "10");
    assert_eq!(bad.status.code(), Some(2));
}
