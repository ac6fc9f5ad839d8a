#[path = "../src/record.rs"]
#[allow(dead_code)]
mod record;

use std::path::PathBuf;
use std::process::{Command, Output};

use record::RunRecord;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paftd")).args(args).output().expect("binary runs")
}

fn record(out: &Output) -> RunRecord {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("paftd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solve_and_oracle_agree_on_fixtures() {
    let cases = [("example2.paf", "a,c,e"), ("example2.paf", "b,d"), ("example2.paf", ""), ("figure2.paf", "a,b")];
    for (file, set) in cases {
        for sem in ["adm", "com", "stb"] {
            let solve = record(&run(&["solve", "--semantics", sem, "--set", set, &fixture(file)]));
            let oracle = record(&run(&["oracle", "--semantics", sem, "--ext", set, &fixture(file)]));
            assert_eq!(solve.answer, oracle.answer, "{file} {sem} {{{set}}}");
            assert_eq!(solve.mode.as_deref(), Some("rational"));
        }
    }
}

#[test]
fn answers_carry_a_fifteen_digit_decimal() {
    let rec = record(&run(&["oracle", "--acc", "e", &fixture("example2.paf")]));
    assert_eq!(rec.answer.as_deref(), Some("4923/5000"));
    assert_eq!(rec.answer_decimal.as_deref(), Some("0.984600000000000"));
    assert_eq!(rec.count, Some(22));
    assert_eq!(rec.subframeworks, Some(24));
}

#[test]
fn query_defaults_come_from_the_file() {
    // example2.paf carries `set a c e` and `query e`
    let rec = record(&run(&["solve", &fixture("example2.paf")]));
    assert_eq!(rec.answer.as_deref(), Some("18/25"));
    let rec = record(&run(&["oracle", &fixture("example2.paf")]));
    assert_eq!(rec.argument.as_deref(), Some("e"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let out = run(&["solve", "--semantics", "nonsense", &fixture("example2.paf")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["solve", "--semantics", "grd", &fixture("example2.paf")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(record(&out).exit_code, Some(2));
    assert_eq!(run(&["generate", "--grid", "3by5"]).status.code(), Some(2));
    assert_eq!(run(&["solve", &fixture("figure2.paf")]).status.code(), Some(2), "no query set");
}

#[test]
fn input_errors_exit_3() {
    let out = run(&["solve", "--set", "a", "/nonexistent/file.paf"]);
    assert_eq!(out.status.code(), Some(3));
    let bad = temp_file("bad.paf", "arg a 1\natt a b 0.5\n");
    let out = run(&["solve", "--set", "a", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(record(&out).error.unwrap().contains("line 2"));
    let zero = temp_file("zero.paf", "arg a 1\narg b 1\natt a b 0\n");
    let out = run(&["oracle", &zero]);
    assert!(record(&out).error.unwrap().contains("zero-probability attack; remove it"));
    let out = run(&["solve", "--set", "zz", &fixture("example2.paf")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_decomposition_is_an_input_error() {
    let td = temp_file("broken.td", "bag 0 a b c\nbag 1 d e\nedge 0 1\n");
    let out = run(&["validate-td", "--td-file", &td, &fixture("example2.paf")]);
    assert_eq!(out.status.code(), Some(3));
    let rec = record(&out);
    assert_eq!(rec.valid, Some(false));
    assert!(!rec.violations.unwrap().is_empty());
    let out = run(&["solve", "--td-file", &td, "--set", "a", &fixture("example2.paf")]);
    assert_eq!(out.status.code(), Some(3));
    let ok = run(&["validate-td", "--td-file", &fixture("figure3.td"), &fixture("example2.paf")]);
    assert_eq!(record(&ok).valid, Some(true));
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn resource_limits_exit_4() {
    let grid = String::from_utf8(run(&["generate", "--grid", "3x20", "--seed", "1"]).stdout).unwrap();
    let file = temp_file("grid.paf", &grid);
    let out = run(&["solve", "--preprocess", "false", "--max-rows", "3", "--set", "", &file]);
    assert_eq!(out.status.code(), Some(4));
    let out = run(&["solve", "--preprocess", "false", "--timeout", "0.000000001", "--set", "", &file]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(record(&out).error.as_deref(), Some("time budget exhausted"));
    let out = run(&["oracle", "--capacity", "3", "--set", "", &file]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn decompose_outputs_replayable_decompositions() {
    let rec = record(&run(&["decompose", &fixture("example2.paf")]));
    assert_eq!(rec.width, Some(2));
    let td = temp_file("ex2.td", &rec.td.unwrap());
    let out = run(&["solve", "--td-file", &td, "--set", "a,c,e", &fixture("example2.paf")]);
    assert_eq!(record(&out).answer.as_deref(), Some("18/25"));
    let raw = run(&["decompose", "--plain", "--format", "td", &fixture("example2.paf")]);
    let text = String::from_utf8(raw.stdout).unwrap();
    assert!(text.starts_with("bag ") && !text.contains("type "));
    let plain = temp_file("plain.td", &text);
    let out = run(&["solve", "--td-file", &plain, "--set", "a,c,e", &fixture("example2.paf")]);
    assert_eq!(record(&out).answer.as_deref(), Some("18/25"));
}

#[test]
fn generate_is_deterministic_and_solvable() {
    let a = run(&["generate", "--grid", "3x5", "--seed", "7"]).stdout;
    let b = run(&["generate", "--grid", "3x5", "--seed", "7"]).stdout;
    assert_eq!(a, b);
    // small enough for enumeration
    let small = run(&["generate", "--grid", "2x3", "--seed", "7"]).stdout;
    let file = temp_file("g.paf", &String::from_utf8(small).unwrap());
    let solve = record(&run(&["solve", "--preprocess", "false", &file]));
    let oracle = record(&run(&["oracle", "--ext", &solve.set.clone().unwrap().join(","), &file]));
    assert_eq!(solve.answer, oracle.answer);
}

#[test]
fn preprocess_reports_forced_labels_and_reduction() {
    let rec = record(&run(&["preprocess", "--set", "a,b", &fixture("figure2.paf")]));
    assert_eq!(rec.forced_in.unwrap(), ["a", "d"]);
    assert_eq!(rec.forced_out.unwrap(), ["c"]);
    assert_eq!(rec.removed.unwrap(), ["d"]);
    assert_eq!(rec.multiplier.as_deref(), Some("0.3"));
    let rec = record(&run(&["preprocess", "--set", "b", &fixture("figure2.paf")]));
    assert_eq!(rec.answer.as_deref(), Some("0"));
}

#[test]
fn records_reject_unknown_fields() {
    let err = serde_json::from_str::<RunRecord>(r#"{"command":"solve","surprise":1}"#);
    assert!(err.is_err());
}
