use std::process::{Command, Output};

use flagrig::classify::Verdict;
use flagrig::json::{algebra_from_json, algebra_to_json};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagrig")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dims_and_roots() {
    let o = run(&["dims", "D4[2,3,4]"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("(4,4,2,1) total 11"));
    let o = run(&["roots", "A1[1]"]);
    assert!(stdout(&o).starts_with("1 positive roots"));
    let o = run(&["roots", "D4"]);
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["dims", "D4[2,9]"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "garbage"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "C3[1]"]).status.code(), Some(3));
    assert_eq!(run(&["prolong", "A4[1]"]).status.code(), Some(3));
    assert_eq!(run(&["model", "NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["split", "A3[1,2]", "--beta", "3", "--alpha", "1"]).status.code(), Some(2));
}

#[test]
fn classify_text_and_json() {
    let o = run(&["classify", "A3[1,2]"]);
    assert!(stdout(&o).contains("NotRigid(F^d(1,2;C^4))"));
    let o = run(&["classify", "D4[1,3,4]", "--json"]);
    let text = stdout(&o);
    let v: Verdict = serde_json::from_str(&text).unwrap();
    assert_eq!(v.trace[0].rule, "R-REDUCE");
    let again = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(again.trim(), text.trim());
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["input", "canonical_form", "status", "trace"] {
        assert!(raw.get(key).is_some(), "{key}");
    }
}

#[test]
fn nilradical_json_round_trip() {
    let o = run(&["nilradical", "D4[2,3,4]", "--json"]);
    let g = algebra_from_json(&stdout(&o)).unwrap();
    assert_eq!(g.dims(), vec![4, 4, 2, 1]);
    assert_eq!(algebra_to_json(&g).trim(), stdout(&o).trim());
    let o = run(&["model", "A4_DEG", "--json"]);
    assert!(stdout(&o).contains("\"1/2\""));
}

#[test]
fn splitting_commands() {
    let o = run(&["split", "A3[1,2]", "--beta", "1", "--k", "1", "--alpha", "2"]);
    assert_eq!(stdout(&o).trim(), "O(-1) total -1");
    let o = run(&["split", "A3[1,2]", "--beta", "2", "--alpha", "2"]);
    assert_eq!(stdout(&o).trim(), "O(2)+O(1) total 3");
    let o = run(&["split-fiber", "A3[1,2]", "--A", "2", "--alpha", "1"]);
    assert_eq!(stdout(&o).trim(), "O(-1)+O(-1) total -2");
}

#[test]
fn prolong_and_models() {
    let o = run(&["prolong", "D4[2,3,4]", "--steps", "1"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().skip(2).map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
    assert_eq!(rows, vec!["0 6 6 true", "1 4 4 true"]);
    let o = run(&["model", "A4_DEG", "--verify"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verify ok"));
    assert!(stdout(&run(&["models"])).contains("B4_Q"));
    let o = run(&["compare", "A4_IDEALQ", "A4_DEG"]);
    assert!(stdout(&o).contains("isomorphic (verified certificate)"));
    let o = run(&["present", "D4[2,3,4]"]);
    assert!(stdout(&o).contains("match yes"));
}

#[test]
fn batch_preserves_order() {
    let dir = std::env::temp_dir().join(format!("flagrig-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("specs.txt");
    let specs = ["A5[1,2,5]", "A3[1,2]", "# comment", "D4[2,3,4]", "A1[1]", "E6[1,2,3,4,5,6]", "D5[1,2,3,4]"];
    std::fs::write(&path, specs.join("\n")).unwrap();
    let o = run(&["classify", "--json", "--batch", path.to_str().unwrap()]);
    assert!(o.status.success());
    let inputs: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<Verdict>(l).unwrap().input)
        .collect();
    let expected: Vec<&str> = specs.iter().copied().filter(|s| !s.starts_with('#')).collect();
    assert_eq!(inputs, expected);
    std::fs::write(&path, "A3[1,2]\nB2[1]\n").unwrap();
    let o = run(&["classify", "--batch", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("B2[1]: "));
}

#[test]
fn selftest_reports_every_criterion() {
    let o = run(&["selftest"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 10);
    for n in [1, 2, 3, 4, 5, 7, 8, 9, 10] {
        assert!(lines.iter().any(|l| l.starts_with(&format!("PASS [{n}]"))), "criterion {n}");
    }
}
