use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn wordeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordeq")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_three_solution_equation() {
    let out = wordeq(&["solve", &data("three_solutions.eq"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"kind": "finite", "solutions": ["", "ab", "abaabbab"]}));
}

#[test]
fn classify_periodic_family() {
    let out = wordeq(&["classify", &data("xab.eq")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Xab = abX: infinite family p=ε, q=ab");
}

#[test]
fn solve_with_oracle_over_several_equations() {
    let out = wordeq(&["solve", &data("golden.eq"), "--oracle", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v[0], serde_json::json!({"kind": "infinite", "p": "", "q": "ab"}));
    assert_eq!(v[1]["solutions"], serde_json::json!(["", "ab"]));
    assert_eq!(v[2]["solutions"], serde_json::json!(["a", "aaba"]));
}

#[test]
fn normalize_reports_checks_and_rewrites() {
    let out = wordeq(&["normalize", &data("golden.eq"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    for item in stdout_json(&out).as_array().unwrap() {
        assert_eq!(item["checks"]["n1"], true);
        assert_eq!(item["checks"]["n2"], true);
        assert_eq!(item["checks"]["n3"], true);
        assert!(item["normal_form"]["rewrites"].is_array());
    }
}

#[test]
fn reduce_gives_verdicts() {
    let out = wordeq(&["reduce", &data("three_solutions.eq")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["outcome"]["result"], "verdict");
    assert_eq!(v["outcome"]["verdict"]["kind"], "fewer_than_three_nonempty");
    assert_eq!(v["outcome"]["verdict"]["nonempty"], 2);
}

#[test]
fn input_errors_exit_with_one() {
    let out = wordeq(&["solve", &data("malformed.eq")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed.eq:1"));
    assert_eq!(wordeq(&["solve", &data("missing.eq")]).status.code(), Some(1));
    assert_eq!(wordeq(&["solve", &data("xab.eq"), "--frobnicate"]).status.code(), Some(1));
    assert_eq!(wordeq(&["exhaustive", "--alphabet", "0"]).status.code(), Some(1));
    assert_eq!(wordeq(&["--help"]).status.code(), Some(0));
}

#[test]
fn small_campaign_is_deterministic() {
    let args = ["exhaustive", "--max-const-len", "3", "--workers", "2", "--json"];
    let a = wordeq(&args);
    let b = wordeq(&["exhaustive", "--max-const-len", "3", "--workers", "1", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    let (mut va, mut vb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(va["violations"], 0);
    va["config"]["workers"] = 0.into();
    vb["config"]["workers"] = 0.into();
    assert_eq!(va, vb);
    assert_eq!(a.stdout, wordeq(&args).stdout);
}

#[test]
fn check_lemmas_text_report() {
    let out = wordeq(&["check-lemmas", "--max-const-len", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("max finite solution-set size observed: 1; violations: 0"), "{text}");
    assert!(text.contains("normal_form"));
}

#[test]
fn small_three_variable_search() {
    let out = wordeq(&["search-3var", "--max-eq-len", "6", "--image-len", "4", "--max-size", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["max_size"], 2);
    let first_pair = v["examples"].as_array().unwrap().iter().find(|e| e["equations"].as_array().unwrap().len() == 2);
    assert_eq!(first_pair.unwrap()["equations"], serde_json::json!(["XY = YX", "XZ = ZX"]));
}
