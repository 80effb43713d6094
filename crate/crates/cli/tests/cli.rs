use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use flowpoly::poly::{parse_poly, var_names};

fn flowpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowpoly")).args(args).output().expect("binary runs")
}

/// Run with `--json` and return the exit code and parsed report.
fn report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = flowpoly(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v)
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn cry_five() {
    let (code, v) = report(&["cry", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["vol_rel"], "10");
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn ehrhart_of_the_nice_chamber() {
    let (code, v) = report(&["ehrhart", "--system", "complete:3", "--chamber", "nice"]);
    assert_eq!(code, 0);
    let k = &v["outputs"]["ehrhart"];
    assert_eq!(k["factored"], "1/6*(a1 + 1)*(a1 + 2)*(a1 + 3*a2 + 3)");
    let names = var_names("a", 3);
    let expanded = parse_poly(k["expanded"].as_str().unwrap(), &names).unwrap();
    assert_eq!(expanded, parse_poly("(a1+1)*(a1+2)*(a1+3*a2+3)/6", &names).unwrap());
}

#[test]
fn kostant_counts() {
    let (code, v) = report(&["kostant", "--system", "complete:3", "--weight", "1,2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["value"], "10");
    let (_, v) = report(&["kostant", "--system", "complete:3", "--weight", "1,2,3", "--method", "ct"]);
    assert_eq!(v["outputs"]["value"], "10");
    let (_, v) = report(&["kostant", "--system", "complete:2", "--weight", "2,1", "--strict"]);
    assert_eq!(v["outputs"]["value"], "1");
}

#[test]
fn ehrhart_at_a_weight_checks_the_count() {
    let (code, v) = report(&["ehrhart", "--system", "complete:3", "--weight", "3,-2,1", "--form", "s"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["ehrhart"]["factored"], "1/6*(a1 + a2 + 1)*(a1 + a2 + 2)*(a1 + a2 + 3)");
    assert_eq!(v["outputs"]["value"], "4");
    assert_eq!(v["inputs"]["chamber"]["form"], "[123] - [213]");
}

#[test]
fn volume_engines_agree() {
    let args = ["volume", "--system", "complete:3", "--chamber", "witness:3,-1,-1"];
    let (_, dp) = report(&args);
    let (_, ct) = report(&[&args[..], &["--method", "ct"]].concat());
    assert_eq!(dp["outputs"], ct["outputs"]);
    assert_eq!(dp["outputs"]["volume"]["factored"], "1/6*(a1 + a2 + a3)^2*(a1 + a2 - 2*a3)");
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let args = ["tables", "--r", "3"];
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn chamber_enumeration() {
    let (code, v) = report(&["chambers", "--rank", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["big_chambers"], 7);
    let (_, v) = report(&["chambers", "--rank", "3", "--witness", "3,-2,1"]);
    let members = v["outputs"]["chamber"]["members"].as_array().unwrap();
    assert_eq!(members.len(), 2);
    assert_eq!(members[1]["sign"], -1);
}

#[test]
fn morris_methods() {
    let base = ["morris", "--r", "3", "--k1", "1", "--k2", "1", "--k3", "1"];
    for method in ["rec", "closed", "residue"] {
        let (code, v) = report(&[&base[..], &["--method", method]].concat());
        assert_eq!(code, 0, "{method}");
        assert_eq!(v["outputs"]["constant"], "12", "{method}");
    }
}

#[test]
fn verification_failure_exits_one() {
    // k1 = k2 = 1 with l >= 1 and k3 = 0: the total residue leaves the expected span
    let (code, v) = report(&["morris", "--r", "2", "--l", "1", "--k1", "1", "--k2", "1", "--k3", "0", "--method", "residue"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert_eq!(v["outputs"]["degenerate"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["kostant", "--system", "complete:3", "--weight", "1,2,3", "--frobnicate"],
        &["kostant", "--system", "nonsense", "--weight", "1"],
        &["kostant", "--system", "complete:3", "--weight", "1,2"],
        &["cry", "--n", "1"],
        &["volume", "--system", "complete:2", "--chamber", "witness:1,-1"],
        &["verify", "--suite", "nope"],
    ] {
        let out = flowpoly(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn system_from_file_and_out_path() {
    let sys = tmp("pitman2.json");
    std::fs::write(&sys, r#"{"r": 2, "edges": [[1,2,1],[1,3,1],[2,3,1],[1,3,1]]}"#).unwrap();
    let out_path = tmp("report.json");
    let spec = format!("@{}", sys.display());
    let (code, v) = report(&["kostant", "--system", &spec, "--weight", "1,1", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written, v);
    assert_eq!(v["inputs"]["system"]["edges"][0], serde_json::json!([1, 2, 1]));
}

#[test]
fn verify_one_suite() {
    let (code, v) = report(&["verify", "--suite", "pitman", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["pitman"], true);
    assert!(v["suites"][0]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn residue_and_csv() {
    let (_, v) = report(&["residue", "--nvars", "2", "--num", "x1", "--den", "x1, x2, x1-x2"]);
    assert_eq!(v["outputs"]["total_residue"]["[12]"], "1");
    let (_, v) = report(&["residue", "--nvars", "2", "--num", "x1", "--den", "x1, x2, x1-x2", "--order", "21"]);
    assert_eq!(v["outputs"]["value"], "0");
    let out = flowpoly(&["tables", "--r", "2", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), [
        "label,chamber,volume,ehrhart",
        "c1,[12],a1,a1 + 1",
        "c2,[12] - [21],a1 + a2,a1 + a2 + 1",
    ]);
}

#[test]
fn plain_text_output() {
    let out = flowpoly(&["cry", "--n", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("vol_rel: 2\n"), "{text}");
    assert!(text.ends_with("passed\n"));
}
