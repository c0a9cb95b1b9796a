use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_llc-entropy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn example(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir
        .path()
        .join(format!("{name}-{}.json", args.join("_").replace("--", "")));
    let mut all = vec!["example", name, "--out", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = run(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn compute_json(spec: &Path, extra: &[&str]) -> (i32, serde_json::Value) {
    let mut args = vec!["compute", spec.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (code(&out), v)
}

fn tower_gf16(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("gf16.json");
    std::fs::write(&path, r#"{"p": 2, "tower": [[1, 1, 1], [[0, 1], [1, 0], [1, 0]]]}"#).unwrap();
    path
}

#[test]
fn compute_bernoulli_and_identity() {
    let dir = TempDir::new().unwrap();
    let b = example(&dir, "bernoulli", &["--degree", "2"]);
    let (c, v) = compute_json(&b, &[]);
    assert_eq!(c, 0);
    assert_eq!(v["value"], 1);
    assert_eq!(v["h_top"]["ent"], 1);
    assert_eq!(v["h_top"]["field_order"], 4);

    let id = example(&dir, "identity", &["--discrete", "2"]);
    let (c, v) = compute_json(&id, &[]);
    assert_eq!(c, 0);
    assert_eq!(v["value"], 0);
}

#[test]
fn malformed_specs_exit_1() {
    let dir = TempDir::new().unwrap();
    let b = example(&dir, "bernoulli", &[]);
    let text = std::fs::read_to_string(&b).unwrap();
    let cut = dir.path().join("cut.json");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(compute_json(&cut, &[]).0, 1);
    assert_eq!(compute_json(&dir.path().join("missing.json"), &[]).0, 1);
    let bad_field = dir.path().join("bad.json");
    std::fs::write(&bad_field, r#"{"field": {"p": 6}, "stencil": {"1": 1}}"#).unwrap();
    assert_eq!(compute_json(&bad_field, &[]).0, 1);
}

#[test]
fn short_chain_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let b3 = example(&dir, "bernoulli", &["--dim", "3"]);
    let (c, v) = compute_json(&b3, &["--max-m", "1"]);
    assert_eq!(c, 2);
    assert_eq!(v["value"], serde_json::Value::Null);
    assert_eq!(v["lower_bound"], 1);
    let (c, v) = compute_json(&b3, &[]);
    assert_eq!(c, 0);
    assert_eq!(v["value"], 3);
}

#[test]
fn pinned_window_below_the_bound_exits_1() {
    let dir = TempDir::new().unwrap();
    let b = example(&dir, "bernoulli", &[]);
    assert_eq!(compute_json(&b, &["--window", "5"]).0, 1);
    assert_eq!(compute_json(&b, &["--window", "200"]).0, 0);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let l = tower_gf16(&dir);
    let l = l.to_str().unwrap();
    let b = example(&dir, "bernoulli", &["--degree", "2"]);
    let out = run(&["verify", b.to_str().unwrap(), "--tower", l]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        (v["ent_f"].as_u64(), v["ent_k"].as_u64(), v["ent_l"].as_u64()),
        (Some(2), Some(1), Some(1))
    );
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["tower"][0], serde_json::json!({"p": 2, "tower": []}));

    let id = example(&dir, "identity", &["--degree", "2"]);
    assert_eq!(code(&run(&["verify", id.to_str().unwrap(), "--tower", l])), 0);

    let b3 = example(&dir, "bernoulli", &["--degree", "2", "--dim", "3"]);
    assert_eq!(
        code(&run(&["verify", b3.to_str().unwrap(), "--tower", l, "--max-m", "1"])),
        2
    );

    let gf8 = dir.path().join("gf8.json");
    std::fs::write(&gf8, r#"{"p": 2, "tower": [[1, 1, 0, 1]]}"#).unwrap();
    assert_eq!(
        code(&run(&["verify", b.to_str().unwrap(), "--tower", gf8.to_str().unwrap()])),
        1
    );
    assert_eq!(
        code(&run(&["verify", b.to_str().unwrap(), "--tower", l, "--f-level", "2"])),
        1
    );
}

#[test]
fn verify_random_flow() {
    let dir = TempDir::new().unwrap();
    let l = tower_gf16(&dir);
    let r = example(&dir, "random", &["--degree", "2", "--seed", "17"]);
    let out = run(&[
        "verify",
        r.to_str().unwrap(),
        "--tower",
        l.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("flow,m,n,codim_f,codim_k,codim_l,res_commutes,ind_commutes\n"));
    assert!(!csv.contains("false"));
}

#[test]
fn examples_and_unknown_names() {
    let dir = TempDir::new().unwrap();
    for (n, expect) in [("1", 1), ("2", 2), ("3", 3)] {
        let e = example(&dir, "entropy-n", &["--n", n]);
        assert_eq!(compute_json(&e, &[]).1["value"], expect);
    }
    let ds = example(&dir, "direct-sum", &["--dim", "1", "--dim2", "2"]);
    assert_eq!(compute_json(&ds, &[]).1["value"], 3);
    assert_eq!(code(&run(&["example", "torus"])), 1);
    assert_eq!(code(&run(&["example", "bernoulli", "--field", "4"])), 1);
}

#[test]
fn oracle_exit_codes() {
    let dir = TempDir::new().unwrap();
    let b = example(&dir, "bernoulli", &[]);
    let out = run(&["oracle", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mismatches"], 0);
    assert!(v["compared"].as_u64().unwrap() >= 20);

    let id = example(&dir, "identity", &[]);
    assert_eq!(code(&run(&["oracle", id.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["oracle", b.to_str().unwrap(), "--window", "20"])), 1);
    let b4 = example(&dir, "bernoulli", &["--degree", "2"]);
    assert_eq!(code(&run(&["oracle", b4.to_str().unwrap()])), 1);
}

#[test]
fn reports_are_deterministic_and_csv_uses_lf() {
    let dir = TempDir::new().unwrap();
    let r = example(&dir, "random", &["--degree", "2", "--seed", "3"]);
    let r2 = example(&dir, "random", &["--degree", "2", "--seed", "3", "--block", "1"]);
    assert_eq!(std::fs::read(&r).unwrap(), std::fs::read(&r2).unwrap());
    let spec = r.to_str().unwrap();
    let a = run(&["compute", spec, "--format", "csv"]);
    let b = run(&["compute", spec, "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    assert!(csv.starts_with("flow,field,m,n,codim,window\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 1 + 9 * 64);

    let out = dir.path().join("report.json");
    assert_eq!(code(&run(&["compute", spec, "--out", out.to_str().unwrap()])), 0);
    let j1 = std::fs::read(&out).unwrap();
    assert_eq!(j1, run(&["compute", spec]).stdout);
}
