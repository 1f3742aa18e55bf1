use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ffk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffkoopman")).args(args).output().expect("binary runs")
}

fn ffk_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ffkoopman"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

const F5: &str = "x^3+2*x^2+3*x+3";
const QUINTIC: &str = "x^5 + a*x^3 + 3*a^2*x";

#[test]
fn invert_univariate_golden() {
    let o = ffk(&["invert", "--field", "5", "--poly", F5]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x^3 + 3*x^2 + 3*x + 2\n");
}

#[test]
fn invert_map_golden() {
    let o = ffk(&["invert-map", "--field", "2", "--vars", "3", "--map", "x2; x3; x1 + x2*x3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1*x2 + x3; x1; x2\n");
}

#[test]
fn not_a_permutation_exits_two() {
    let o = ffk(&["invert", "--field", "5", "--poly", "x^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "not a permutation (det M = 0)\n");

    let o = ffk(&["koopman", "--field", "5", "--poly", "x^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("invertible: false\n"));
    assert!(stdout(&o).contains("inverse: none\n"));
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["invert", "--field", "5", "--poly", "3x"],
        &["invert", "--field", "6", "--poly", "x"],
        &["invert", "--poly", "x"],
        &["invert", "--field", "5"],
        &["invert", "--field", "5", "--poly", "y"],
        &["invert", "--field", "5", "--poly", "x^-1"],
        &["invert", "--field", "5", "--map", "x1; x2"],
        &["invert-map", "--field", "5", "--vars", "2", "--map", "x1; x2; x1"],
        &["power", "--field", "5", "--poly", "x"],
        &["classify", "--field", "13", "--poly", QUINTIC, "--at", "2"],
        &["invert-map", "--field", "3", "--max-space", "100", "--map", "x1; x2; x3; x4; x5"],
        &["frobnicate", "--field", "5"],
    ];
    for args in cases {
        let o = ffk(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
    let o = ffk(&["invert", "--field", "5", "--poly", "3x"]);
    assert!(stderr(&o).contains("column 2"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(ffk(&["--help"]).status.code(), Some(0));
    assert_eq!(ffk(&["--version"]).status.code(), Some(0));
}

#[test]
fn koopman_text_report() {
    let o = ffk(&["koopman", "--field", "5", "--poly", F5]);
    assert_eq!(o.status.code(), Some(0));
    let want = "\
field: F_5
nvars: 1
input: x^3 + 2*x^2 + 3*x + 3
dimension: 3
basis:
  psi_1 = x
  psi_2 = x^3 + 2*x^2 + 3*x + 3
  psi_3 = 2*x^3 + 3*x^2 + 4*x + 2
matrix:
  0 1 0
  0 0 1
  4 3 3
alpha: 4 3 3
det: 4
invertible: true
inverse: x^3 + 3*x^2 + 3*x + 2
";
    assert_eq!(stdout(&o), want);
}

#[test]
fn json_agrees_with_text() {
    for args in [
        &["koopman", "--field", "5", "--poly", F5][..],
        &["koopman", "--field", "2", "--map", "x2; x3; x1 + x2*x3"][..],
        &["koopman", "--field", "7", "--map", "x1 + x2^2; 3*x2"][..],
        &["koopman", "--field", "7", "--poly", "x^2 + 1"][..],
    ] {
        let text = stdout(&ffk(args));
        let mut jargs = args.to_vec();
        jargs.extend(["--format", "json"]);
        let j = json(&ffk(&jargs));

        let line = |key: &str| -> String {
            text.lines().find_map(|l| l.strip_prefix(&format!("{key}: "))).unwrap().to_string()
        };
        assert_eq!(j["field"], Value::from(line("field").trim_start_matches("F_").parse::<u64>().unwrap()));
        assert_eq!(j["nvars"], Value::from(line("nvars").parse::<u64>().unwrap()));
        assert_eq!(j["input"], Value::from(line("input")));
        assert_eq!(j["dimension"], Value::from(line("dimension").parse::<u64>().unwrap()));
        assert_eq!(j["det"], Value::from(line("det").parse::<u64>().unwrap()));
        assert_eq!(j["invertible"], Value::from(line("invertible") == "true"));
        match line("inverse").as_str() {
            "none" => assert_eq!(j["inverse"], Value::Null),
            g => assert_eq!(j["inverse"], Value::from(g)),
        }

        let rows: Vec<Vec<u64>> = text
            .split("matrix:\n")
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| l.starts_with("  "))
            .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(j["matrix"], serde_json::to_value(&rows).unwrap());
        let alpha: Vec<Vec<u64>> = text
            .lines()
            .filter_map(|l| l.strip_prefix("alpha: "))
            .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(j["alpha"], serde_json::to_value(&alpha).unwrap());
    }
}

#[test]
fn json_schema_keys() {
    let j = json(&ffk(&["invert", "--field", "5", "--poly", F5, "--format", "json"]));
    let keys: Vec<&str> = j.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["alpha", "det", "dimension", "field", "input", "inverse", "invertible", "matrix", "nvars"]);
    assert_eq!(j["alpha"], serde_json::json!([[4, 3, 3]]));
    assert_eq!(j["inverse"], "x^3 + 3*x^2 + 3*x + 2");

    let o = ffk(&["invert", "--field", "5", "--poly", "x^2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["invertible"], false);
    assert_eq!(json(&o)["inverse"], Value::Null);
}

#[test]
fn power_iterates() {
    let run = |k: &str| stdout(&ffk(&["power", "--field", "2", "--map", "x2; x3; x1 + x2*x3", "--power", k]));
    assert_eq!(run("1"), "x2; x3; x2*x3 + x1\n");
    assert_eq!(run("0"), "x1; x2; x3\n");
    assert_eq!(run("-1"), "x1*x2 + x3; x1; x2\n");
    // x^2 over F_5 has no inverse but its iterates exist
    let o = ffk(&["power", "--field", "5", "--poly", "x^2", "--power", "2"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "x^4\n".to_string()));
    let o = ffk(&["power", "--field", "5", "--poly", "x^2", "--power", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_parametric_example() {
    let o = ffk(&["classify", "--field", "13", "--poly", QUINTIC]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let want = "\
field: F_13
dimension: 6
invertible: {2, 5, 6, 7, 8, 11}
singular: {1, 3, 4, 9, 10, 12}
undefined: {0}
  a = 0: concrete check says permutation
det: 4*(a + 1)(a + 3)(a + 4)(a + 9)(a + 10)(a + 12)(a^2 + a + 12)(a^2 + 12*a + 12) / \
8*(a)^2(a^2 + a + 3)(a^2 + 12*a + 3)(a^3 + a^2 + 12*a + 7)(a^3 + 12*a^2 + 12*a + 6)
";
    assert_eq!(stdout(&o), want);

    let j = json(&ffk(&["classify", "--field", "13", "--poly", QUINTIC, "--format", "json"]));
    assert_eq!(j["dimension"], 6);
    assert_eq!(j["classification"]["invertible"], serde_json::json!([2, 5, 6, 7, 8, 11]));
    assert_eq!(j["classification"]["undefined"], serde_json::json!([0]));
    assert_eq!(j["factors"]["den"]["factors"][0], serde_json::json!({ "poly": [0, 1], "multiplicity": 2 }));
    assert!(j["matrix"][0][0]["num"].is_array());
    assert!(j["det"]["den"].is_array());
}

#[test]
fn classify_with_other_symbol() {
    let o = ffk(&["classify", "--field", "13", "--param", "t", "--poly", "x^5 + t*x^3 + 3*t^2*x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(t^2 + t + 12)"));
    assert!(!stdout(&o).contains("(a"));
}

#[test]
fn param_invert_specializes() {
    // x^9 coefficients of the inverse at a = 2, 5, 6, 7, 8, 11
    for (a0, c9) in [(2, 9), (5, 1), (6, 3), (7, 3), (8, 1), (11, 9)] {
        let o = ffk(&["param-invert", "--field", "13", "--poly", QUINTIC, "--at", &a0.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let line = stdout(&o);
        let lead = if c9 == 1 { "x^9 + ".to_string() } else { format!("{c9}*x^9 + ") };
        assert!(line.starts_with(&lead), "a = {a0}: {line}");
    }
    let o = ffk(&["param-invert", "--field", "13", "--poly", QUINTIC, "--at", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ffk(&["param-invert", "--field", "13", "--poly", QUINTIC]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("undefined at: {0"));
}

#[test]
fn param_invert_generically_singular() {
    let o = ffk(&["param-invert", "--field", "5", "--poly", "a*x^2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_agrees() {
    for args in [
        &["verify", "--field", "5", "--poly", F5][..],
        &["verify", "--field", "5", "--poly", "x^2"][..],
        &["verify", "--field", "2", "--map", "x2; x3; x1 + x2*x3"][..],
        &["verify", "--field", "13", "--poly", QUINTIC][..],
        &["verify", "--field", "13", "--poly", QUINTIC, "--at", "0"][..],
    ] {
        let o = ffk(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("result: agree\n"));
    }
    let o = ffk(&["invert", "--field", "5", "--poly", F5, "--verify"]);
    assert_eq!((o.status.code(), stderr(&o)), (Some(0), "verify: ok\n".to_string()));
    let o = ffk(&["verify", "--field", "7", "--poly", "x^5", "--format", "json"]);
    assert_eq!(json(&o)["verify"]["agree"], true);
}

#[test]
fn stdin_input() {
    let o = ffk_stdin(&["invert-map", "--field", "2", "--map", "-"], "x2; x3; x1 + x2*x3\n");
    assert_eq!(stdout(&o), "x1*x2 + x3; x1; x2\n");
    let o = ffk_stdin(&["invert", "--field", "5", "--poly", "-"], F5);
    assert_eq!(stdout(&o), "x^3 + 3*x^2 + 3*x + 2\n");
}

#[test]
fn no_color_is_plain() {
    let o = Command::new(env!("CARGO_BIN_EXE_ffkoopman"))
        .args(["invert", "--field", "5", "--poly", "3x"])
        .env("NO_COLOR", "1")
        .output()
        .unwrap();
    assert!(!stderr(&o).contains('\u{1b}'));
}
