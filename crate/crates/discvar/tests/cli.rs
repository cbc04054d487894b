//! The built `discvar` binary: streams, exit codes and flags.

use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn discvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn worked_example_text_report() {
    let out = discvar(&["solve", &fixture("worked_example.sys")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("delta: 1\n"), "{text}");
    assert!(text.contains("  w_infinity: computed [r^2 - a]\n"));
    assert!(text.contains("  w_c: empty\n"));
    assert!(text.contains("  w_sing: empty\n"));
    assert!(text.contains("  w_sd: assumed_empty\n"));
    assert!(text.ends_with("discriminant_variety:\n  [r^2 - a]\n"));
    // the warning goes to both streams: inside the report and as a diagnostic
    assert!(stderr(&out).starts_with("warning: w_sd"));
}

#[test]
fn worked_example_json_report() {
    let out = discvar(&["solve", &fixture("worked_example.sys"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["delta"], 1);
    assert_eq!(doc["components"]["w_infinity"]["status"], "computed");
    assert_eq!(doc["components"]["w_infinity"]["generators"][0], "r^2 - a");
    assert_eq!(doc["components"]["w_f"]["generators"], serde_json::json!(["a", "r"]));
    assert_eq!(doc["components"]["w_sd"]["status"], "assumed_empty");
    assert!(doc["components"]["w_sd"]["warning"].is_string());
    assert_eq!(doc["discriminant_variety"], serde_json::json!([["r^2 - a"]]));
    assert!(doc.get("oracle").is_none());
    let text = stdout(&out);
    let labels: Vec<usize> = ["w_infinity", "w_f", "w_c", "w_sing", "w_sd"]
        .iter()
        .map(|l| text.find(&format!("\"{l}\"")).unwrap())
        .collect();
    assert!(labels.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn oracle_section() {
    let out = discvar(&["solve", &fixture("worked_example.sys"), "--oracle-primes", "5,7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("oracle (primes 5,7, seed 0):\n  lemma1: pass\n  corollary1: pass\n"), "{text}");

    let out = discvar(&["solve", &fixture("worked_example.sys"), "--oracle-primes", "7", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lemma1 = &doc["oracle"]["checks"]["lemma1"];
    assert_eq!(lemma1["status"], "pass");
    // k = 1 and k = 2
    assert_eq!(lemma1["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn component_selection_and_user_w_sd() {
    let out = discvar(&[
        "solve",
        &fixture("worked_example.sys"),
        "--components",
        "winf,wsing",
        "--wsd-file",
        &fixture("worked_example.wsd"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("  w_f: not_requested\n"));
    assert!(text.contains("  w_c: not_requested\n"));
    assert!(text.contains("  w_sd: user_supplied [a - 1]\n"), "{text}");
    assert!(text.contains("discriminant_variety:\n  [r^2 - a]\n  [a - 1]\n"), "{text}");
    assert!(stderr(&out).is_empty());
}

#[test]
fn parse_errors_exit_1() {
    let out = discvar(&["solve", &fixture("no_equations.sys")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty equations section"));
    assert!(out.stdout.is_empty());

    let out = discvar(&["solve", &fixture("malformed.sys")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("malformed.sys:4:7: unexpected `*`"));

    let out = discvar(&["solve", &fixture("does_not_exist.sys")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot read"));

    let out = discvar(&["solve", &fixture("worked_example.sys"), "--wsd-file", &fixture("malformed.sys")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["solve"],
        vec!["frobnicate"],
        vec!["solve", "x.sys", "--format", "yaml"],
        vec!["solve", "x.sys", "--components", "wsd"],
        vec!["solve", "x.sys", "--oracle-primes", "6"],
        vec!["solve", "x.sys", "--seed", "-1"],
    ] {
        let out = discvar(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = discvar(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("solve"));
}

#[test]
fn computation_errors_exit_2() {
    let out = discvar(&["solve", &fixture("exponent_overflow.sys")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("computation failed"));

    // 101^4 points exceed the enumeration guard
    let out = discvar(&["solve", &fixture("worked_example.sys"), "--oracle-primes", "101"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("oracle could not run"));
}

#[test]
fn oracle_failures_exit_3() {
    let out = discvar(&["solve", &fixture("bad_primes.sys"), "--oracle-primes", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("lemma1: fail (no good prime at or below 31)"));
    assert!(stderr(&out).contains("error: oracle check lemma1"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["solve", &fixture("worked_example.sys"), "--format", "json", "--oracle-primes", "5,7", "--seed", "9"];
    let a = discvar(&args);
    let b = discvar(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}
