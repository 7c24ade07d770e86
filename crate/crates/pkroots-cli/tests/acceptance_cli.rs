//! Command-line acceptance checks: golden JSON records for the library
//! acceptance criteria 1-3, the under-count exit contract (criterion 8),
//! and byte-level determinism of the JSON output (criterion 10).

use std::process::{Command, Output};

fn pkroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pkroots"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// The JSON record with the trailing elapsed_ms value blanked: everything
/// up to and including the `"elapsed_ms":` key must be byte-identical
/// across reruns.
fn strip_elapsed(json: &str) -> String {
    let key = "\"elapsed_ms\":";
    let at = json.rfind(key).expect("record has elapsed_ms");
    json[..at + key.len()].to_string()
}

fn json_value(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).expect("stdout is one JSON record")
}

#[test]
fn criterion_01_cli_golden_running_example() {
    let out = pkroots(&[
        "count", "--poly", "x^10 - 10*x + 738", "--p", "3", "--k", "7", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_value(&out);
    assert_eq!(v["count_decimal"], "190");
    assert_eq!(v["exact"], true);
    assert_eq!(v["tree"]["depth"], 2);
    assert_eq!(v["tree"]["nodes"], 3);
    println!("criterion 1 (CLI) PASS: count_decimal 190, tree 3 nodes");
}

#[test]
fn criterion_02_cli_golden_quintic_and_dot() {
    const DECIMAL: &str = "1620424537653706124196923258781575759359875675913436470380245486276378993995166018";
    let out = pkroots(&[
        "count",
        "--poly",
        "x^5-8*x^4+25*x^3-38*x^2+28*x-8",
        "--p",
        "17",
        "--k",
        "100",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_value(&out);
    assert_eq!(v["count_decimal"], DECIMAL);
    assert_eq!(v["tree"]["depth"], 49);
    assert_eq!(v["tree"]["nodes"], 83);

    let dir = tempfile::tempdir().unwrap();
    let dot_path = dir.path().join("quintic.dot");
    let out = pkroots(&[
        "tree",
        "--poly",
        "x^5-8*x^4+25*x^3-38*x^2+28*x-8",
        "--p",
        "17",
        "--k",
        "100",
        "--tree-out",
        dot_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    let nodes = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!(nodes, 83);
    assert_eq!(edges, 82);
    assert!(dot.contains("n0 [label=\"(0, ) k=100\"]"));
    // Root edges carry shift valuations 2 and 3, labelled 17^1 and 17^2.
    assert!(dot.contains("n0 -> n1 [label=\"17^1\"]"));
    assert!(dot.contains("[label=\"17^2\"]"));
    println!("criterion 2 (CLI) PASS: 82-digit count, DOT with 83 nodes / 82 edges");
}

#[test]
fn criterion_03_cli_timing_table() {
    const EXPR: &str = "(x-1234)^3(x-7193)^4(x-2030)^12";
    const K10: &str = "6662463731107084597239930491383079081613573366742531838643898960928425583";
    const K23: &str = "835246507397636707835912727935014993473814207009903666897740500800316540116998486687526544735315400399242092096638763251220316295804045232463245408233080887254694925939\
73";
    for (k, expected) in [
        ("1", "3"),
        ("3", "45724737732053043"),
        ("10", K10),
        ("23", K23),
    ] {
        let out = pkroots(&[
            "count", "--poly", EXPR, "--p", "123456791", "--k", k, "--json",
        ]);
        assert_eq!(out.status.code(), Some(0), "k={k}: {}", stderr(&out));
        let v = json_value(&out);
        assert_eq!(v["count_decimal"], expected, "k={k}");
        assert_eq!(v["exact"], true);
    }
    println!("criterion 3 (CLI) PASS: timing-table counts byte-exact for k in (1,3,10,23)");
}

#[test]
fn criterion_08_cli_under_count_exit_code() {
    // (x-1)^2 (x-2)^2 over Z/(263^2) with a zero split budget: the isolation
    // must fail, the record must say so, and the exit code must be 2.
    let out = pkroots(&[
        "count",
        "--coeffs",
        "4,-12,13,-6,1",
        "--p",
        "263",
        "--k",
        "2",
        "--split-budget",
        "0",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_value(&out);
    assert_eq!(v["exact"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
    assert!(stderr(&out).contains("lower bound"));

    // The count it did report stays at or below the brute-force truth.
    let oracle = pkroots(&[
        "oracle", "--coeffs", "4,-12,13,-6,1", "--p", "263", "--k", "2", "--json",
    ]);
    assert_eq!(oracle.status.code(), Some(0));
    let t = json_value(&oracle);
    let reported: u64 = v["count_decimal"].as_str().unwrap().parse().unwrap();
    let truth: u64 = t["count_decimal"].as_str().unwrap().parse().unwrap();
    assert!(reported <= truth);
    println!("criterion 8 (CLI) PASS: exit 2, exact=false, failures non-empty, count <= oracle");
}

#[test]
fn criterion_10_determinism_byte_identical_json() {
    let runs: [&[&str]; 3] = [
        &["count", "--poly", "x^10 - 10*x + 738", "--p", "3", "--k", "7", "--json"],
        &[
            "count",
            "--poly",
            "x^5-8*x^4+25*x^3-38*x^2+28*x-8",
            "--p",
            "17",
            "--k",
            "100",
            "--json",
        ],
        &[
            "count",
            "--poly",
            "(x-1234)^3(x-7193)^4(x-2030)^12",
            "--p",
            "123456791",
            "--k",
            "23",
            "--seed",
            "7",
            "--json",
        ],
    ];
    for args in runs {
        let a = pkroots(args);
        let b = pkroots(args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(
            strip_elapsed(stdout(&a).trim()),
            strip_elapsed(stdout(&b).trim()),
            "args: {args:?}"
        );
    }
    println!("criterion 10 PASS: byte-identical JSON (modulo elapsed_ms) across reruns");
}

#[test]
fn stream_flag_drops_tree_summary() {
    let out = pkroots(&[
        "count", "--poly", "x^2", "--p", "5", "--k", "4", "--stream", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_value(&out);
    assert_eq!(v["tree"], serde_json::Value::Null);
    assert_eq!(v["count_decimal"], "25");
}

#[test]
fn implicit_and_explicit_products_agree() {
    let a = pkroots(&[
        "count", "--poly", "(x-1)^2(x-2)^3", "--p", "17", "--k", "9", "--json",
    ]);
    let b = pkroots(&[
        "count", "--poly", "(x-1)^2*(x-2)^3", "--p", "17", "--k", "9", "--json",
    ]);
    assert_eq!(
        json_value(&a)["count_decimal"],
        json_value(&b)["count_decimal"]
    );
}

#[test]
fn usage_and_input_errors_exit_1() {
    // Unparseable expression.
    let out = pkroots(&["count", "--poly", "2x", "--p", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("syntax error"));

    // Composite p.
    let out = pkroots(&["count", "--poly", "x", "--p", "10", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not prime"));

    // Missing required input group.
    let out = pkroots(&["count", "--p", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));

    // Oracle guard violation.
    let out = pkroots(&[
        "oracle", "--poly", "x", "--p", "17", "--k", "100", "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("guard"));
}

#[test]
fn oracle_json_record() {
    let out = pkroots(&["oracle", "--poly", "x^2", "--p", "2", "--k", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_value(&out);
    assert_eq!(v["count_decimal"], "2");
    assert_eq!(v["exact"], true);
    assert_eq!(v["tree"], serde_json::Value::Null);
}

#[test]
fn tree_json_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.json");
    let out = pkroots(&[
        "tree",
        "--poly",
        "x^10 - 10*x + 738",
        "--p",
        "3",
        "--k",
        "7",
        "--tree-out",
        path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let tree: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(tree["precision"], 7);
    assert_eq!(tree["children"][0]["exponent"], 4);
    assert_eq!(tree["children"][0]["node"]["precision"], 3);
    assert_eq!(tree["children"][0]["node"]["children"][0]["node"]["precision"], 1);
}

#[test]
fn tree_dot_to_stdout_for_single_node() {
    let out = pkroots(&["tree", "--poly", "x-1", "--p", "3", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    let nodes = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (1, 0));
}

#[test]
fn linear_polynomial_counts_one() {
    let out = pkroots(&["count", "--poly", "x-1", "--p", "5", "--k", "9", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_value(&out)["count_decimal"], "1");
}

#[test]
fn bench_emits_csv_and_succeeds() {
    let out = pkroots(&[
        "bench",
        "--p",
        "10009",
        "--k",
        "15",
        "--instances",
        "2",
        "--cubics",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,seed,degree,k,count_decimal,exact,recount_agree,elapsed_ms"
    );
    assert_eq!(lines.count(), 2);
}
