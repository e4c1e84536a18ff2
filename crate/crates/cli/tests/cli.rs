use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dqt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqt"))
        .args(args)
        .output()
        .expect("run dqt")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn ok_text(args: &[&str]) -> String {
    let out = dqt(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    stdout(&out)
}

fn ok_json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let v: Value = serde_json::from_str(&ok_text(&all)).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

fn oracle(dir: &TempDir, name: &str, n: usize, ones: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let body = serde_json::json!({"n": n, "ones": ones});
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

const TABLE: &str = "\
pi(k)   k      p
-----  --  -----
    1   2      3
    2   3      7
    3   5     23
    4   7     71
    5  11    311
    6  13    479
    7  17   1559
    8  19   5711
    9  23  10559
   10  29  18191
";

#[test]
fn nt_table_golden() {
    assert_eq!(ok_text(&["nt", "table", "--rows", "10"]), TABLE);
}

#[test]
fn nt_table_json_matches_text() {
    let v = ok_json(&["nt", "table", "--rows", "10"]);
    assert_eq!(v["command"], "nt table");
    let rows = v["result"]["rows"].as_array().unwrap();
    for (row, line) in rows.iter().zip(TABLE.lines().skip(2)) {
        let cells: Vec<u64> = line
            .split_whitespace()
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(
            cells,
            [
                row["pi_k"].as_u64().unwrap(),
                row["k"].as_u64().unwrap(),
                row["p"].as_u64().unwrap()
            ]
        );
    }
}

#[test]
fn nt_table_reports_unresolved_rows() {
    let out = dqt(&["nt", "table", "--rows", "5", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    assert!(text.contains("    5  11   -\n"), "{text}");
    assert!(text.contains("1 row(s) not resolved within budget 100"));
}

#[test]
fn nt_find_p_and_verify() {
    assert_eq!(
        ok_text(&["nt", "find-p", "--k", "37"]),
        "k = 37\np = 422231\n"
    );
    assert_eq!(
        ok_json(&["nt", "find-p", "--k", "131"])["result"]["p"],
        196265095009u64
    );
    assert!(ok_text(&["nt", "verify", "--p", "311", "--k", "11"]).ends_with("holds\n"));
    assert!(ok_text(&["nt", "verify", "--p", "311", "--k", "7"]).ends_with("fails\n"));
}

#[test]
fn nt_find_p_budget_exhausted() {
    let out = dqt(&["nt", "find-p", "--k", "257"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("error: no prime up to 4194304"));
}

#[test]
fn amplitudes_golden() {
    let text = ok_text(&["amplitudes", "--k", "11", "--d", "1..6"]);
    let counts: Vec<&str> = text
        .lines()
        .map(|l| l.split(['[', ']']).nth(1).unwrap())
        .collect();
    assert_eq!(counts, ["21", "9", "5", "5", "5", "1"]);
    assert!(text.contains("F^2(11) [9] = {0, 1, -1, i, -i, 1+i, -1+i, 1-i, -1-i}\n"));
    assert!(text.ends_with("F^6(11) [1] = {0}\n"));
}

#[test]
fn amplitudes_json_matches_text() {
    let v = ok_json(&["amplitudes", "--k", "11", "--d", "6"]);
    let row = &v["result"]["rows"][0];
    assert_eq!(row["count"], 1);
    assert_eq!(row["amplitudes"], serde_json::json!([[0, 0]]));
}

#[test]
fn bad_dimension_is_usage_error() {
    assert_eq!(
        dqt(&["amplitudes", "--k", "11", "--d", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dqt(&["amplitudes", "--k", "1", "--d", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(dqt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn modal_usat_single_oracle() {
    let dir = TempDir::new().unwrap();
    let sat = oracle(&dir, "sat.json", 2, &["00"]);
    let text = ok_text(&["modal", "usat", "--oracle", sat.to_str().unwrap()]);
    assert!(text.contains("verdict: satisfiable\n"));
    assert!(!text.contains("|0,00>"));

    let none = oracle(&dir, "none.json", 3, &[]);
    let v = ok_json(&["modal", "usat", "--oracle", none.to_str().unwrap()]);
    assert_eq!(v["result"]["verdict"], "unsatisfiable");
}

#[test]
fn modal_usat_sample_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let sat = oracle(&dir, "sat.json", 3, &["101"]);
    let path = sat.to_str().unwrap();
    let a = ok_text(&["modal", "usat", "--oracle", path, "--sample", "42"]);
    let b = ok_text(&["modal", "usat", "--oracle", path, "--sample", "42"]);
    assert_eq!(a, b);
    assert!(a.contains("sample (seed 42)"));
    assert!(a.contains("extrapolation"));
}

#[test]
fn modal_usat_exhaustive_all_correct() {
    let text = ok_text(&["modal", "usat", "--exhaustive", "3"]);
    assert!(
        text.ends_with("9 of 9 oracles decided correctly\n"),
        "{text}"
    );
}

#[test]
fn modal_usat_rejects_two_solutions() {
    let dir = TempDir::new().unwrap();
    let two = oracle(&dir, "two.json", 2, &["01", "10"]);
    let out = dqt(&["modal", "usat", "--oracle", two.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_oracle_file_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "not json").unwrap();
    let out = dqt(&["modal", "usat", "--oracle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let short = oracle(&dir, "short.json", 3, &["10"]);
    assert_eq!(
        dqt(&["modal", "usat", "--oracle", short.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dqc1_supernatural_depends_on_divisibility() {
    let dir = TempDir::new().unwrap();
    let sat = oracle(&dir, "sat.json", 2, &["00"]);
    let path = sat.to_str().unwrap();
    let v = ok_json(&["dqc1", "usat", "--oracle", path, "--p", "3"]);
    assert_eq!(v["result"]["supernatural"], true);
    assert_eq!(v["result"]["p_divides_2n_minus_1"], true);
    let v = ok_json(&["dqc1", "usat", "--oracle", path, "--p", "7"]);
    assert_eq!(v["result"]["supernatural"], false);
    assert_eq!(v["result"]["p_divides_2n_minus_1"], false);
}

#[test]
fn dj_run_verdicts() {
    let dir = TempDir::new().unwrap();
    let bal = oracle(&dir, "bal.json", 2, &["10", "11"]);
    let zero = oracle(&dir, "zero.json", 2, &[]);
    let mixed = oracle(&dir, "mixed.json", 2, &["00"]);
    let run = |p: &PathBuf, q: &str| dqt(&["dj", "run", "--oracle", p.to_str().unwrap(), "--p", q]);
    assert!(stdout(&run(&bal, "3")).contains("verdict: balanced"));
    assert!(stdout(&run(&zero, "422231")).contains("verdict: constant"));
    assert_eq!(run(&mixed, "7").status.code(), Some(2));
}

#[test]
fn dj_resources() {
    let v = ok_json(&["dj", "resources", "--n", "1"]);
    assert_eq!(v["result"]["k_bound"], 33);
    assert_eq!(v["result"]["k"], 37);
    assert_eq!(v["result"]["p"], 422231);
    let out = dqt(&["dj", "resources", "--n", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("not found up to 4194304"));
}

#[test]
fn grover_resources() {
    let v = ok_json(&["grover", "resources", "--n", "2"]);
    assert_eq!(v["result"]["k"], 131);
    assert_eq!(v["result"]["p"], 196265095009u64);
    assert_eq!(
        dqt(&["grover", "resources", "--n", "3"]).status.code(),
        Some(4)
    );
}

#[test]
fn grover_trace_golden() {
    let text = ok_text(&["grover", "trace", "--n", "3", "--target", "5"]);
    let expected = "\
N = 8, target = 5, j = 2
step   a   b  weight  scaled a  scaled b  P(target)  P(other)    mu
----  --  --  ------  --------  --------  ---------  --------  ----
   0   1   1      16        16        16        256       256  2048
   1  10   2       4        40         8       1600        64  2048
   2  44  -4       1        44        -4       1936        16  2048
needed k = 30977
";
    assert_eq!(text, expected);
}

#[test]
fn grover_trace_json_matches_text() {
    let v = ok_json(&["grover", "trace", "--n", "3", "--target", "0"]);
    let r = &v["result"];
    assert_eq!(r["target_probs"], serde_json::json!([256, 1600, 1936]));
    assert_eq!(r["other_probs"], serde_json::json!([256, 64, 16]));
    assert_eq!(r["weights"], serde_json::json!([16, 4, 1]));
    assert_eq!(r["mu"], 2048);
}

#[test]
fn grover_trace_range_overflow() {
    let out = dqt(&["grover", "trace", "--n", "2", "--p", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("needs an ordered range of k >= 129, this field has k = 2"));
    let text = ok_text(&["grover", "trace", "--n", "2", "--p", "196265095009"]);
    assert!(text.contains("fits the ordered range"));
}

#[test]
fn cardinal_rescale_golden() {
    let text = ok_text(&[
        "cardinal", "rescale", "--norms", "1,2,3,4", "--target", "24",
    ]);
    let expected = "\
field: F_311^2 (k = 11)
target: 24, precision: 0
     state  m  weight  mu  cardinal     exact
----------  -  ------  --  --------  --------
    (1, 0)  1       6  36     36, 0      1, 0
    (1, 1)  2       4  32    16, 16  1/2, 1/2
  (1, 1+i)  3       4  48    16, 32  1/3, 2/3
(1-i, 1+i)  4       3  36    18, 18  1/2, 1/2
valid: yes
strict: no
preserved pairs: 20, tied pairs: 6
collapsed: state 3 outcome 0 (16) vs state 2 outcome 0 (16): exact 1/3 < 1/2
collapsed: state 3 outcome 0 (16) vs state 2 outcome 1 (16): exact 1/3 < 1/2
reversed: none
";
    assert_eq!(text, expected);
}

#[test]
fn cardinal_rescale_precision_and_weights() {
    let v = ok_json(&[
        "cardinal",
        "rescale",
        "--norms",
        "1,2,3,4",
        "--target",
        "24",
        "--precision",
        "1",
    ]);
    assert_eq!(v["result"]["strict"], true);
    let mus: Vec<u64> = v["result"]["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["mu"].as_u64().unwrap())
        .collect();
    assert_eq!(mus, [2500, 2592, 2700, 2500]);

    let v = ok_json(&[
        "cardinal",
        "rescale",
        "--norms",
        "1,2,3,4",
        "--weights",
        "4,3,2,2",
    ]);
    assert_eq!(v["result"]["valid"], false);
    assert_eq!(v["result"]["reversed"].as_array().unwrap().len(), 2);
}

#[test]
fn cardinal_rescale_errors() {
    assert_eq!(
        dqt(&["cardinal", "rescale", "--norms", "1,2,3,4", "--p", "7"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        dqt(&["cardinal", "rescale", "--norms", "1,2", "--p", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dqt(&["cardinal", "rescale", "--norms", "1,2", "--weights", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dqt(&["cardinal", "rescale", "--norms", "0"]).status.code(),
        Some(2)
    );
}
