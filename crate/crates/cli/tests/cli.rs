use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const GOLDEN_COMMANDS: [&str; 2] = ["certify", "oracle-crosscheck"];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn adic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adic")).args(args).output().expect("binary runs")
}

fn run(cmd: &str, file: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec![cmd, "-i", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = adic(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("report is JSON")
}

fn bundled() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(root().join("instances"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "adic"))
        .collect();
    v.sort();
    v
}

#[test]
fn golden_reports_are_stable() {
    let update = std::env::var_os("ADIC_UPDATE_GOLDEN").is_some();
    let files = bundled();
    assert!(files.len() >= 10);
    for file in &files {
        let stem = file.file_stem().unwrap().to_str().unwrap();
        for cmd in GOLDEN_COMMANDS {
            let (code, first) = run(cmd, file, &[]);
            let (_, second) = run(cmd, file, &[]);
            assert_eq!(code, 0, "{stem} {cmd}");
            assert_eq!(first, second, "{stem} {cmd}: output differs between runs");
            let golden = root().join("tests/golden").join(format!("{stem}.{cmd}.json"));
            if update {
                fs::write(&golden, &first).unwrap();
            }
            let frozen = fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing {}", golden.display()));
            assert_eq!(first, frozen, "{stem} {cmd}: differs from the golden file");
        }
    }
}

#[test]
fn every_command_runs_on_every_instance() {
    for file in bundled() {
        let has_source = fs::read_to_string(&file).unwrap().matches("\nmodule ").count() > 1;
        for cmd in adic_cli::COMMANDS {
            let (code, out) = run(cmd, &file, &[]);
            let report = json(&out);
            if cmd == "verify-3-3" && !has_source {
                assert_eq!(code, 1);
                assert_eq!(report["error"]["kind"], "missing-entity");
                continue;
            }
            assert_eq!(code, 0, "{} {cmd}: {out}", file.display());
            assert_eq!(report["status"], "pass");
            assert_eq!(report["command"], cmd);
        }
    }
}

#[test]
fn certify_mod_eight() {
    let (code, out) = run("certify", &root().join("instances/z-mod8-at-2.adic"), &[]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["verdicts"]["complete"], true);
    assert_eq!(r["verdicts"]["consistent"], true);
    assert_eq!(r["depth"], 8);
    assert!(r["instance_digest"].as_str().unwrap().starts_with("sha256:"));
    assert!(r.get("timing").is_none());
}

#[test]
fn reduced_generator_is_recorded() {
    let (_, out) = run("certify", &root().join("instances/z-scrambled.adic"), &[]);
    let r = json(&out);
    assert_eq!(r["inputs"]["ideal_generators"], serde_json::json!(["4", "6"]));
    assert_eq!(r["inputs"]["ideal_reduced"], "2");
}

#[test]
fn non_separated_instance_is_explained() {
    let (code, out) = run("certify", &root().join("instances/z-mod9-at-2.adic"), &[]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["verdicts"]["separated"], false);
    assert!(r["verdicts"]["explanation"].is_string());
}

#[test]
fn snf_embeds_transforms() {
    let (code, out) = run("snf", &root().join("tests/data/snf-2-3.adic"), &[]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["certificates"]["s"], serde_json::json!([["1", "0"], ["0", "6"]]));
    assert!(r["certificates"]["u"].is_array() && r["certificates"]["v"].is_array());
}

#[test]
fn options_change_the_report() {
    let file = root().join("instances/z-torsion-at-30.adic");
    let (_, a) = run("certify", &file, &["--seed", "1", "--samples", "3"]);
    let r = json(&a);
    assert_eq!(r["inputs"]["seed"], 1);
    assert_eq!(r["certificates"]["cond_iii"].as_array().unwrap().len(), 3);
    let (code, b) = run("oracle-crosscheck", &file, &["--depth", "4", "--system", "x"]);
    assert_eq!(code, 0);
    assert_eq!(json(&b)["depth"], 4);
}

#[test]
fn text_format_and_out_file() {
    let file = root().join("instances/z-mod8-at-2.adic");
    let (code, text) = run("invariants", &file, &["--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("command: invariants\nstatus: pass\n"), "{text}");
    let out = std::env::temp_dir().join(format!("adic-cli-test-{}.json", std::process::id()));
    let (code, stdout) = run("invariants", &file, &["--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = fs::read_to_string(&out).unwrap();
    fs::remove_file(&out).unwrap();
    assert_eq!(json(&written)["status"], "pass");
}

#[test]
fn input_errors_exit_one() {
    let good = root().join("instances/z-mod8-at-2.adic");
    let (code, out) = run("frobnicate", &good, &[]);
    assert_eq!(code, 1);
    let r = json(&out);
    assert_eq!(r["error"]["kind"], "unknown-command");
    assert!(r["error"]["message"].as_str().unwrap().contains("unknown command"));

    let (code, out) = run("certify", &root().join("tests/data/bad-syntax.adic"), &[]);
    assert_eq!(code, 1);
    let r = json(&out);
    assert_eq!((r["error"]["line"].as_u64(), r["error"]["column"].as_u64()), (Some(2), Some(24)));

    let (code, out) = run("certify", &root().join("tests/data/bad-prime.adic"), &[]);
    assert_eq!(code, 1);
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("not a prime"));

    let (code, out) = run("certify", &root().join("tests/data/bad-element.adic"), &[]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["column"], 13);

    let (code, out) = run("certify", &good, &["--ideal", "J"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "missing-entity");

    let (code, _) = run("certify", &root().join("no-such-file.adic"), &[]);
    assert_eq!(code, 1);
    let out = adic(&["certify"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precondition_violations_are_reported() {
    // Z/2 is not supported in V(3).
    let file = std::env::temp_dir().join(format!("adic-cli-pre-{}.adic", std::process::id()));
    fs::write(&file, "ring = \"Z\"\nmodule M = [[9]]\nmodule X = [[2]]\nideal I = [\"3\"]\n").unwrap();
    let (code, out) = run("verify-3-3", &file, &[]);
    fs::remove_file(&file).unwrap();
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "precondition");
}
