use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn lazyset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lazyset"))
        .args(args)
        .env("LAZYSET_COLOR", "0")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn overloaded_arrows_are_subsumed() {
    let o = lazyset(&[
        "subtype",
        "(Int->Int)&(Bool->Bool)",
        "(Int|Bool)->(Int|Bool)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "holds\n");
    let o = lazyset(&[
        "subtype",
        "(Int|Bool)->(Int|Bool)",
        "(Int->Int)&(Bool->Bool)",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn internal_types_are_expressible() {
    let o = lazyset(&["subtype", "Bot * Int", "Bot * Bool"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lazyset(&["empty", "Int & Bool"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "empty\n");
    let o = lazyset(&["--json", "empty", "Bot"]);
    assert_eq!(stdout(&o).trim(), r#"{"empty":false}"#);
}

#[test]
fn parse_errors_exit_with_two() {
    assert_eq!(
        lazyset(&["subtype", "Int ->", "Int"]).status.code(),
        Some(2)
    );
    assert_eq!(lazyset(&["dnf", "rec X. X"]).status.code(), Some(2));
    assert_eq!(lazyset(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        lazyset(&["oracle-check", "Int", "Int", "--pool", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_prints_the_negation_interface() {
    let o = lazyset(&["check", corpus("neg.lzs").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(tt -> ff) & (ff -> tt)\n");
}

#[test]
fn check_trace_is_json_lines() {
    let o = lazyset(&[
        "check",
        corpus("identity.lzs").to_str().unwrap(),
        "--trace",
        "-",
    ]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("Int | Bot"));
    let rules: Vec<String> = lines
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["rule"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(rules.last().map(String::as_str), Some("Appl"));
}

#[test]
fn run_exit_codes() {
    let o = lazyset(&["run", corpus("neg_true.lzs").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("in false"));
    let o = lazyset(&["run", corpus("loop.lzs").to_str().unwrap(), "--fuel", "50"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let stuck = dir.path().join("stuck.lzi");
    std::fs::write(&stuck, "fst 3").unwrap();
    assert_eq!(
        lazyset(&["run", stuck.to_str().unwrap()]).status.code(),
        Some(4)
    );
    let open = dir.path().join("open.lzi");
    std::fs::write(&open, "# a free variable\nf 3").unwrap();
    assert_eq!(
        lazyset(&["run", open.to_str().unwrap()]).status.code(),
        Some(5)
    );
}

#[test]
fn run_trace_records_every_step() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let o = lazyset(&[
        "run",
        corpus("letp.lzi").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(trace).unwrap();
    let rules: Vec<String> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["rule"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(rules, ["ProjL", "Proj", "LetP", "Proj", "LetV"]);
}

#[test]
fn oracle_check_prints_a_witness() {
    let o = lazyset(&["oracle-check", "Bot * Int", "Bot * Bool", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness: (bot, "), "{}", stdout(&o));
    let o = lazyset(&["--json", "oracle-check", "Int", "Int | Bool"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "consistent");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn dnf_groups_lines_by_kind() {
    let o = lazyset(&["--json", "dnf", "(Int * Int) | ~Bool"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let kinds: Vec<&str> = v["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["bot", "basic", "prod", "prod", "arrow"]);
    assert_eq!(stdout(&lazyset(&["dnf", "Int & Bool"])), "Empty\n");
}

/// `key=value` pairs from the totals line of the human report.
fn human_totals(out: &str) -> BTreeMap<String, u64> {
    let line = out.lines().find(|l| l.starts_with("programs=")).unwrap();
    line.split_whitespace()
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn soundness_json_and_human_agree() {
    let args = [
        "soundness",
        "--fuzz",
        "15",
        "--seed",
        "3",
        "--size",
        "6",
        "--fuel",
        "2000",
    ];
    let human = lazyset(&args);
    assert_eq!(human.status.code(), Some(0));
    let mut json_args = vec!["--json"];
    json_args.extend(args);
    let json = lazyset(&json_args);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let totals = human_totals(&stdout(&human));
    for (k, n) in &totals {
        assert_eq!(v["totals"][k].as_u64(), Some(*n), "{k}");
    }
    for k in ["preserved", "exhausted", "stuck"] {
        assert!(totals.contains_key(k));
    }
}

#[test]
fn soundness_output_is_reproducible() {
    let args = [
        "--json",
        "soundness",
        "--fuzz",
        "10",
        "--seed",
        "11",
        "--fuel",
        "2000",
    ];
    assert_eq!(stdout(&lazyset(&args)), stdout(&lazyset(&args)));
}

#[test]
fn empty_corpus_reports_as_empty_object() {
    let dir = tempfile::tempdir().unwrap();
    let o = lazyset(&[
        "--json",
        "soundness",
        "--corpus",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{}\n");
}

#[test]
fn soundness_writes_junit() {
    let dir = tempfile::tempdir().unwrap();
    let xml = dir.path().join("report.xml");
    let o = lazyset(&[
        "soundness",
        "--fuel",
        "2000",
        "--junit",
        xml.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(xml).unwrap();
    assert!(text.contains("<testsuite name=\"soundness\""));
    assert!(text.contains("name=\"neg_true.lzs\""));
    assert!(text.contains("failures=\"0\""));
}
