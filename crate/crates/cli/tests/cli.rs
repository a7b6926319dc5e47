//! End-to-end tests of the command-line surface: flags, exit codes, output
//! formats, and determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellport"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn write_tmp(name: &str, content: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

const MAXIMALLY_MIXED: &str = r#"{"dim":4,
  "re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
  "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;

const SINGLET: &str = r#"{"dim":4,
  "re":[[0,0,0,0],[0,0.5,-0.5,0],[0,-0.5,0.5,0],[0,0,0,0]],
  "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;

#[test]
fn analyze_w3_text_report() {
    let out = run(&["analyze", "--state", "w", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("w4: -0.012346"), "{text}");
    assert!(text.contains("entangled: yes"));
    assert!(text.contains("bell_violating: no"));
    assert!(text.contains("note:") && text.contains("7/9"), "n=3 deviation must be flagged");
}

#[test]
fn analyze_json_round_trips_bit_exactly() {
    let out = run(&["analyze", "--state", "mixture", "--n", "3", "--p", "0.9", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["teleport_useful"], serde_json::Value::Bool(true));
    assert_eq!(v["bell_violating"], serde_json::Value::Bool(false));
    assert_eq!(v["state_kind"], "mixture");

    let spec = bellport::MixtureSpec::new(3, 0.9).unwrap();
    let rho = bellport::states::mixture_ghz_w(spec).unwrap();
    let (w3, w4) = bellport::criteria::w3_w4(&rho);
    assert_eq!(v["w3"].as_f64().unwrap(), w3, "printed w3 must round-trip bit-exactly");
    assert_eq!(v["w4"].as_f64().unwrap(), w4);
    assert_eq!(v["f_max"].as_f64().unwrap(), bellport::criteria::f_max(&rho));
}

#[test]
fn analyze_accepts_maximally_mixed_file() {
    let path = write_tmp("maximally_mixed.json", MAXIMALLY_MIXED);
    let out = run(&["analyze", "--input", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["entangled"], serde_json::Value::Bool(false));
    assert_eq!(v["m_value"].as_f64().unwrap(), 0.0);
    assert_eq!(v["f_max"].as_f64().unwrap(), 0.5);
    assert_eq!(v["state_kind"], "file");
}

#[test]
fn analyze_rejects_bad_trace_with_exit_3() {
    let bad = r#"{"dim":4,
      "re":[[0.2,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.2]],
      "im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
    let path = write_tmp("bad_trace.json", bad);
    let out = run(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("trace"), "message must name the violated invariant");
}

#[test]
fn analyze_flag_conflicts_exit_2() {
    let path = write_tmp("mm2.json", MAXIMALLY_MIXED);
    let out = run(&["analyze", "--input", path.to_str().unwrap(), "--state", "w", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--state", "w"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--state", "mixture", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--state", "w", "--n", "3", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--state", "w", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_columns_and_flip() {
    let out = run(&[
        "sweep", "--n", "3", "--p-start", "0", "--p-end", "1", "--steps", "101",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,w3,w4,ppt_min,u1,u2,u3,m,f_max,entangled,bell_violating,teleport_useful"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 101);

    let entangled: Vec<bool> = rows
        .iter()
        .map(|r| r.split(',').nth(9).unwrap() == "true")
        .collect();
    let flips = (1..entangled.len())
        .filter(|&i| entangled[i] != entangled[i - 1])
        .count();
    assert_eq!(flips, 1, "entangled column transitions once");
    assert!(!entangled[70] && entangled[71]);
}

#[test]
fn sweep_n5_never_useful() {
    let out = run(&[
        "sweep", "--n", "5", "--p-start", "0", "--p-end", "1", "--steps", "51",
    ]);
    assert!(out.status.success());
    for row in stdout(&out).lines().skip(1) {
        assert_eq!(row.split(',').nth(11).unwrap(), "false");
    }
}

#[test]
fn sweep_rejects_degenerate_range() {
    let out = run(&[
        "sweep", "--n", "3", "--p-start", "0.5", "--p-end", "0.5", "--steps", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_round_trips_bit_exactly() {
    let out = run(&[
        "sweep", "--n", "4", "--p-start", "0", "--p-end", "1", "--steps", "11",
    ]);
    let text = stdout(&out);
    let row = text.lines().nth(6).unwrap(); // p = 0.5
    let fields: Vec<&str> = row.split(',').collect();
    let p: f64 = fields[0].parse().unwrap();
    assert_eq!(p, 0.5);
    let w4: f64 = fields[2].parse().unwrap();
    let rho = bellport::states::mixture_ghz_w(bellport::MixtureSpec::new(4, 0.5).unwrap()).unwrap();
    assert_eq!(w4, bellport::criteria::w3_w4(&rho).1);
}

#[test]
fn thresholds_output_and_guard() {
    let out = run(&["thresholds", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("p_entangled: 0.708204"), "{text}");
    assert!(text.contains("certified"));
    assert!(text.contains("p_teleport: 0.750000"));
    assert!(text.contains("p_bell") && text.contains("absent"));

    let out = run(&["thresholds", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["thresholds", "--n", "4"]);
    assert!(stdout(&out).contains("p_entangled: 0.828427"));
}

#[test]
fn table1_verify_all_cells_pass() {
    let out = run(&["table1", "--verify"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 12);
    assert!(!text.contains("FAIL"));
}

#[test]
fn table1_json_carries_formula_strings() {
    let out = run(&["table1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let formulas: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["m_formula"].as_str().unwrap())
        .collect();
    assert_eq!(formulas, vec!["8p^2/9", "p^2/2", "8p^2/25"]);
}

#[test]
fn oracle_chsh_singlet_hits_tsirelson() {
    let path = write_tmp("singlet.json", SINGLET);
    let out = run(&[
        "oracle", "--kind", "chsh", "--input", path.to_str().unwrap(),
        "--restarts", "8", "--iters", "80",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 2.828427"), "{text}");
}

#[test]
fn oracle_fef_w3_reports_both_fidelities() {
    let out = run(&[
        "oracle", "--kind", "fef", "--state", "w", "--n", "3",
        "--restarts", "8", "--iters", "60",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("f: 0.666667"));
    assert!(text.contains("implied fidelity (2f+1)/3: 0.777778"));
    assert!(text.contains("f_max"));
    assert!(text.contains("note:"), "n=3 deviation note expected");
}

#[test]
fn oracle_is_deterministic_for_fixed_seed() {
    let args = [
        "oracle", "--kind", "chsh", "--state", "mixture", "--n", "3", "--p", "0.9",
        "--seed", "7", "--restarts", "6", "--iters", "60",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "identical flags + seed give identical bytes");
}

#[test]
fn oracle_rejects_bad_counts() {
    let out = run(&[
        "oracle", "--kind", "chsh", "--state", "w", "--n", "3", "--restarts", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
