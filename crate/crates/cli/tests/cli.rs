use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const E1: &str = r#"{"kind":"quadruple","k":1,"l":1,"backend":"exact",
    "X":[["0","0"]],"Y":[["0","0"]],"F":[["1","0"]],"G":[["1","0"]]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-pencil"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn re(v: &Value) -> f64 {
    v[0].as_f64().expect("float entry")
}

#[test]
fn gen_matches_golden_file() {
    let out = run(&["gen", "--seed", "1", "-k", "1", "-l", "1"]);
    assert!(out.status.success());
    let golden =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/gen_seed1_k1_l1.json"))
            .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), golden.trim_end());
}

#[test]
fn gen_is_deterministic_and_writes_files() {
    let args = ["gen", "--seed", "5", "--backend", "float", "-k", "2", "-l", "3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    let c = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(c.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let doc = json(&run(&["gen", "--seed", "2", "--backend", "float"]));
    let text = doc["X"][0][0].to_string();
    let mantissa = text.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{text}");
}

#[test]
fn gen_honours_rank_constraints() {
    let doc = json(&run(&[
        "gen", "--seed", "3", "-k", "2", "-l", "3", "--rank-f", "0", "--rank-g", "1",
    ]));
    // row-major entries
    let f = doc["F"].as_array().unwrap();
    assert_eq!(f.len(), 6);
    assert!(f.iter().all(|z| z == &serde_json::json!(["0", "0"])));
    let out = run(&["gen", "-k", "2", "-l", "2", "--rank-f", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inspect_first_example() {
    let out = run(&["inspect", "--json", E1]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["curve"]["det"]["text"], "zeta*eta - 1");
    assert_eq!(doc["hilbert"], serde_json::json!({"x": 1, "y": 1, "constant": 0}));
    assert_eq!(doc["boundary"]["eta=inf"]["slopes"], serde_json::json!([[["1", "0"]]]));
    assert_eq!(doc["flags"]["bipure"], true);
    assert_eq!(doc["pass"], true);
}

#[test]
fn zero_g_is_flagged_not_bipure() {
    let doc = json(&run(&[
        "inspect",
        "--json",
        &E1.replace(r#""G":[["1","0"]]"#, r#""G":[["0","0"]]"#),
    ]));
    assert_eq!(doc["flags"]["bipure"], false);
    assert_eq!(doc["curve"]["det"]["text"], "zeta*eta");
}

#[test]
fn inspect_reads_files_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e1.json");
    std::fs::write(&path, E1).unwrap();
    let from_file = run(&["inspect", path.to_str().unwrap()]);

    let mut child = bin()
        .args(["inspect", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    std::io::Write::write_all(child.stdin.as_mut().unwrap(), E1.as_bytes()).unwrap();
    let from_stdin = child.wait_with_output().unwrap();
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_stdin.stdout);
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    for args in [
        vec!["inspect", "--json", "{\"kind\":"],
        vec!["inspect", "/nonexistent/instance.json"],
        vec![
            "inspect",
            "--json",
            r#"{"kind":"quadruple","k":2,"l":1,"backend":"exact","X":[["0","0"]],"Y":[["0","0"]],"F":[["1","0"]],"G":[["1","0"]]}"#,
        ],
        vec!["verify", "no-such-suite"],
        vec!["gen", "--no-such-flag"],
        vec!["verify", "isospectral", "--backend", "exact", "--trials", "1"],
        vec!["flow", "--json", E1, "--dt", "-1"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn verify_passes_and_reports() {
    let out = run(&["verify", "acyclicity", "--trials", "5", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["passed"], 5);
    assert_eq!(doc["failures"], serde_json::json!([]));
}

#[test]
fn verify_failures_exit_with_one_and_reproduce() {
    let out = run(&["verify", "isospectral", "--trials", "2", "--tol-drift", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let cmd = doc["failures"][0]["reproduce"].as_str().unwrap().to_string();
    assert!(cmd.contains("--tol-drift 1e-30"), "{cmd}");
    let args: Vec<&str> = cmd.split_whitespace().skip(1).collect();
    assert_eq!(run(&args).status.code(), Some(1));
}

#[test]
fn verify_output_does_not_depend_on_thread_count() {
    let args = ["verify", "hilbert", "--trials", "6", "--seed", "4"];
    let one = bin().args(args).env("SPECTRAL_PENCIL_THREADS", "1").output().unwrap();
    let three = bin().args(args).env("SPECTRAL_PENCIL_THREADS", "3").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    let bad = bin()
        .args(args)
        .env("SPECTRAL_PENCIL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn flow_follows_the_closed_form() {
    let e1 = r#"{"kind":"quadruple","k":1,"l":1,"backend":"float",
        "X":[[0.0,0.0]],"Y":[[0.0,0.0]],"F":[[1.0,0.0]],"G":[[1.0,0.0]]}"#;
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flow.csv");
    let out = run(&[
        "flow",
        "--json",
        e1,
        "--hamiltonian",
        "H:0,0",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    assert!((re(&doc["final"]["F"][0]) - (-1f64).exp()).abs() < 1e-8);
    assert!((re(&doc["final"]["G"][0]) - 1f64.exp()).abs() < 1e-8);
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert!(rows > 1);
}

#[test]
fn curve_reports_the_determinant() {
    let out = run(&["curve", "--json", E1, "--zetas", "1,2"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert!(doc.to_string().contains("zeta*eta - 1"), "{doc}");
}
