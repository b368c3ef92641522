use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diagsynth::{Angle, Circuit, Gate};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_diagsynth"));
    c.env_remove("DIAGSYNTH_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn load(p: &Path) -> Circuit {
    Circuit::from_json(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write_alphas(p: &Path, alphas: &[f64]) {
    std::fs::write(p, serde_json::to_string(alphas).unwrap()).unwrap();
}

fn manifest(p: &Path) -> serde_json::Value {
    let mut name = p.file_name().unwrap().to_os_string();
    name.push(".manifest.json");
    serde_json::from_str(&std::fs::read_to_string(p.with_file_name(name)).unwrap()).unwrap()
}

fn synth_to(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut full = vec!["synth"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", s(&out)]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

#[test]
fn synth_full_five() {
    let dir = TempDir::new().unwrap();
    let out = synth_to(&dir, "c.json", &["--variant", "spa", "--topology", "full", "--n", "5", "--verify"]);
    assert_eq!(load(&out).cx_count(), 26);
    let m = manifest(&out);
    assert_eq!(m["command"], "synth");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["metadata"]["cx_count"], 26);
    assert!(m["sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn manifest_reproduces_output_digest() {
    let dir = TempDir::new().unwrap();
    let args = ["--variant", "spa", "--topology", "circular", "--n", "12", "--seed", "3"];
    let a = synth_to(&dir, "a.json", &args);
    let first = manifest(&a)["sha256"].clone();
    let b = synth_to(&dir, "a.json", &args);
    assert_eq!(manifest(&b)["sha256"], first);
    assert_eq!(manifest(&b)["metadata"]["circular"]["q"], 5);
}

#[test]
fn synth_linear_eight_with_swap_opt() {
    let dir = TempDir::new().unwrap();
    let out = synth_to(&dir, "c.json", &["--variant", "spa", "--topology", "linear", "--n", "8", "--swap-opt"]);
    assert_eq!(load(&out).cx_count(), 409);
}

#[test]
fn circular_without_trinomial() {
    let o = run(&["synth", "--variant", "wpa", "--topology", "circular", "--n", "8"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("--fallback linear"));
    let o =
        run(&["synth", "--variant", "wpa", "--topology", "circular", "--n", "8", "--fallback", "linear", "--verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("{\"n\":8,\"topology\":{\"kind\":\"circular\"}"));
}

#[test]
fn invalid_arguments_exit_two() {
    assert_eq!(code(&run(&["synth", "--variant", "xpa", "--topology", "full", "--n", "3"])), 2);
    assert_eq!(code(&run(&["synth", "--variant", "spa", "--topology", "full", "--n", "0"])), 2);
    assert_eq!(code(&run(&["synth", "--variant", "spa", "--topology", "custom", "--edges", "0-1", "--n", "2"])), 3);
}

#[test]
fn angles_single_wire() {
    let dir = TempDir::new().unwrap();
    let sk = synth_to(&dir, "sk.json", &["--variant", "spa", "--topology", "full", "--n", "1"]);
    let al = path(&dir, "a.json");
    write_alphas(&al, &[0.0, 1.0]);
    let out = path(&dir, "b.json");
    let o = run(&["angles", "--alphas", s(&al), "--circuit", s(&sk), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(load(&out).gates(), &[Gate::phase(0, 1.0)]);
}

#[test]
fn angles_two_wire_example() {
    let dir = TempDir::new().unwrap();
    let sk = synth_to(&dir, "sk.json", &["--variant", "spa", "--topology", "full", "--n", "2", "--phases"]);
    let al = path(&dir, "a.json");
    write_alphas(&al, &[0.0, PI, PI, 0.0]);
    let out = path(&dir, "b.json");
    assert_eq!(code(&run(&["angles", "--alphas", s(&al), "--circuit", s(&sk), "--out", s(&out)])), 0);
    let c = load(&out);
    let mut sig = [1u32, 2];
    let mut nonzero = Vec::new();
    for g in c.gates() {
        match *g {
            Gate::Cx { control, target } => sig[target] ^= sig[control],
            Gate::Phase { wire, angle: Angle::Value(x) } => {
                if x.abs() > 1e-12 {
                    nonzero.push((sig[wire], x));
                }
            }
            Gate::Phase { .. } => panic!("unbound phase"),
        }
    }
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0].0, 0b11);
    assert!((nonzero[0].1 - PI).abs() < 1e-12);
}

#[test]
fn angles_random_six_wires_verify() {
    let dir = TempDir::new().unwrap();
    let sk = synth_to(&dir, "sk.json", &["--variant", "npa", "--topology", "linear", "--n", "6"]);
    let al = path(&dir, "a.json");
    let alphas: Vec<f64> = (0..64).map(|i| ((i * 37 % 101) as f64) * 0.173).collect();
    write_alphas(&al, &alphas);
    let out = path(&dir, "b.json");
    assert_eq!(code(&run(&["angles", "--alphas", s(&al), "--circuit", s(&sk), "--out", s(&out)])), 0);
    let o = run(&["verify", "--circuit", s(&out), "--variant", "npa", "--alphas", s(&al)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let err: f64 = stdout(&o).lines().last().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err < 1e-9);
}

#[test]
fn angles_rejects_incomplete_skeleton_and_bad_length() {
    let dir = TempDir::new().unwrap();
    let sk = path(&dir, "sk.json");
    std::fs::write(&sk, r#"{"n":2,"topology":{"kind":"full"},"gates":[]}"#).unwrap();
    let al = path(&dir, "a.json");
    write_alphas(&al, &[0.0, 1.0, 2.0, 3.0]);
    assert_eq!(code(&run(&["angles", "--alphas", s(&al), "--circuit", s(&sk)])), 2);
    write_alphas(&al, &[0.0, 1.0, 2.0]);
    assert_eq!(code(&run(&["angles", "--alphas", s(&al), "--circuit", s(&sk)])), 2);
}

#[test]
fn verify_reports_failure() {
    let dir = TempDir::new().unwrap();
    let c = synth_to(&dir, "c.json", &["--variant", "spa", "--topology", "full", "--n", "3"]);
    let o = run(&["verify", "--circuit", s(&c), "--variant", "npa"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("NPA: FAIL"));
    assert_eq!(code(&run(&["verify", "--circuit", s(&c), "--variant", "spa"])), 0);
}

#[test]
fn export_qasm() {
    let dir = TempDir::new().unwrap();
    let empty = path(&dir, "e.json");
    std::fs::write(&empty, r#"{"n":2,"topology":{"kind":"full"},"gates":[]}"#).unwrap();
    let o = run(&["export-qasm", "--circuit", s(&empty)]);
    assert_eq!(stdout(&o), "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\n");

    let one = path(&dir, "one.json");
    std::fs::write(&one, r#"{"n":2,"topology":{"kind":"full"},"gates":[{"cx":[0,1]}]}"#).unwrap();
    assert!(stdout(&run(&["export-qasm", "--circuit", s(&one)])).ends_with("qubit[2] q;\ncx q[0], q[1];\n"));

    let sk = synth_to(&dir, "sk.json", &["--variant", "spa", "--topology", "full", "--n", "3", "--phases"]);
    assert_eq!(code(&run(&["export-qasm", "--circuit", s(&sk)])), 2);
    let al = path(&dir, "a.json");
    write_alphas(&al, &[0.0, 0.3, 0.1, 0.7, 0.2, 0.9, 0.4, 0.5]);
    let bound = path(&dir, "b.json");
    assert_eq!(code(&run(&["angles", "--alphas", s(&al), "--circuit", s(&sk), "--out", s(&bound)])), 0);
    let q = path(&dir, "b.qasm");
    assert_eq!(code(&run(&["export-qasm", "--circuit", s(&bound), "--out", s(&q)])), 0);
    let text = std::fs::read_to_string(&q).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("cx ")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("p(")).count(), 7);
    assert_eq!(manifest(&q)["command"], "export-qasm");
}

#[test]
fn search_length_and_budget() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "w.json");
    let o =
        run(&["search", "--variant", "spa", "--topology", "linear", "--n", "3", "--budget", "20", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "length 5");
    assert_eq!(load(&out).cx_count(), 5);
    assert_eq!(manifest(&out)["metadata"]["lower_bound"], 4);
    let o = run(&["search", "--variant", "npa", "--topology", "linear", "--n", "3", "--budget", "7"]);
    assert_eq!(code(&o), 4);
    let o = run(&["search", "--variant", "npa", "--topology", "linear", "--n", "4", "--max-nodes", "100"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn search_honors_jobs_env() {
    let o = bin()
        .env("DIAGSYNTH_JOBS", "1")
        .args(["search", "--variant", "wpa", "--topology", "circular", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("length 6\n"));
}

#[test]
fn adapt_skip_example() {
    let dir = TempDir::new().unwrap();
    // angles zero on 1001, 1010, 1110, 1111; phases from the direct sum
    let zeros = [0b1001usize, 0b1010, 0b1110, 0b1111];
    let theta: Vec<f64> = (0..16).map(|k| if k == 0 || zeros.contains(&k) { 0.0 } else { 0.1 * k as f64 }).collect();
    let alphas: Vec<f64> =
        (0..16usize).map(|b| (1..16usize).filter(|v| (v & b).count_ones() % 2 == 1).map(|v| theta[v]).sum()).collect();
    let al = path(&dir, "a.json");
    write_alphas(&al, &alphas);
    let out = path(&dir, "c.json");
    let o = run(&["adapt", "--alphas", s(&al), "--topology", "linear", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = &manifest(&out)["metadata"]["report"];
    assert_eq!(report["skip_size"], 4);
    assert!(report["cx"].as_u64().unwrap() <= 11);
    assert!(report["max_phase_error"].as_f64().unwrap() < 1e-9);
    let v = run(&["verify", "--circuit", s(&out), "--variant", "spa", "--alphas", s(&al)]);
    assert!(stdout(&v).contains("max phase error"));
}

#[test]
fn adapt_with_support() {
    let dir = TempDir::new().unwrap();
    let al = path(&dir, "a.json");
    write_alphas(&al, &[0.0, 0.8, 0.0, 0.0]);
    let out = path(&dir, "c.json");
    let o = run(&["adapt", "--alphas", s(&al), "--topology", "linear", "--support", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(load(&out).cx_count(), 0);
    assert_eq!(manifest(&out)["metadata"]["report"]["skip_size"], 2);
}

#[test]
fn table_lists_known_and_searched() {
    let o = run(&["table", "--max-n", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row: Vec<&str> =
        text.lines().find(|l| l.starts_with(" 3  linear    npa")).unwrap().split_whitespace().collect();
    assert_eq!(&row[3..5], ["8", "8"]);
    assert_eq!(text.lines().count(), 1 + 2 * 9);
}
