use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_tmwords");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("TMWORDS_CACHE_DIR")
        .output()
        .unwrap()
}

fn run_cached(dir: &std::path::Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("TMWORDS_CACHE_DIR", dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn generate_prints_words() {
    let o = run(&["generate", "tm", "--length", "16"]);
    assert_eq!(
        (o.status.code(), stdout(&o).as_str()),
        (Some(0), "0110100110010110\n")
    );
    let o = run(&["generate", "tmk", "--k", "3", "--length", "8"]);
    assert_eq!(stdout(&o), "01121220\n");
    let o = run(&["generate", "paperfolding", "--instructions", "000"]);
    assert_eq!(stdout(&o), "0010011\n");
    let o = run(&["generate", "tm", "--length", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,letter\n0,0\n1,1\n2,1\n3,0\n");
    let o = run(&[
        "generate",
        "paperfolding",
        "--instructions",
        "00",
        "--length",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn exit_codes_follow_the_taxonomy() {
    assert_eq!(run(&["avoid", "overlap", "0110"]).status.code(), Some(0));
    assert_eq!(run(&["avoid", "overlap", "000"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["generate", "tm"]).status.code(), Some(64));
    assert_eq!(run(&["avoid", "overlap", "01x"]).status.code(), Some(64));
    assert_eq!(
        run(&["avoid", "overlap", "0110", "--format", "csv"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn avoid_reports_the_least_overlap() {
    let o = run(&["avoid", "overlap", "001100110"]);
    let v = json(&o);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["evidence"]["overlap"]["position"], 0);
    assert_eq!(v["evidence"]["overlap"]["period"], 4);
    let v = json(&run(&["avoid", "circular", "00110"]));
    assert_eq!(v["status"], "fail");
    assert!(v["evidence"]["conjugate"]["word"].is_string());
    let v = json(&run(&["avoid", "square", "010010"]));
    assert_eq!(v["evidence"]["squares"].as_array().unwrap().len(), 2);
}

#[test]
fn complexity_csv_matches_formula() {
    let o = run(&["complexity", "tm", "--max", "512", "--check-formula"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p_brute,p_formula,match"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 512);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    let o = run(&["complexity", "paperfolding", "--max", "7"]);
    assert!(stdout(&o).contains("\n7,40,40,true\n"));
}

#[test]
fn enumeration_outputs() {
    let o = run(&["enum", "overlap-free", "--max", "4"]);
    assert_eq!(stdout(&o), "n,a_n\n0,1\n1,2\n2,4\n3,6\n4,10\n");
    let v = json(&run(&[
        "enum", "circular", "--max", "8", "--format", "json",
    ]));
    assert_eq!(
        v["evidence"]["support"],
        serde_json::json!([1, 2, 3, 4, 6, 8])
    );
}

#[test]
fn series_from_file_and_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    std::fs::write(&path, "n,value\n0,2\n1,4\n2,6\n3,10\n4,12\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["series", "diff", "--input", p, "--format", "csv"]);
    assert_eq!(stdout(&o), "n,value\n0,2\n1,2\n2,4\n3,2\n");
    let v = json(&run(&["series", "run", "--input", p, "--value", "4"]));
    assert_eq!(v["evidence"]["result"]["max_run"], 1);
    let v = json(&run(&[
        "series",
        "gaps",
        "--builtin",
        "delta2-pt",
        "--len",
        "1025",
    ]));
    assert_eq!(v["evidence"]["result"]["min_ratio"], "4/3");
    let v = json(&run(&[
        "series",
        "period",
        "--builtin",
        "tm",
        "--len",
        "200",
    ]));
    assert!(v["evidence"]["result"].is_null());
    assert_eq!(v["evidence"]["evidence_window"]["len"], 200);
    assert_eq!(
        run(&["series", "run", "--builtin", "tm"]).status.code(),
        Some(64)
    );
}

#[test]
fn kernel_and_interchange_reports() {
    let v = json(&run(&[
        "kernel",
        "--builtin",
        "tm",
        "--base",
        "2",
        "--window",
        "256",
    ]));
    assert_eq!(
        (v["status"].as_str(), v["evidence"]["classes"].as_u64()),
        (Some("pass"), Some(2))
    );
    let o = run(&["kernel", "--builtin", "overlap-free", "--window", "256"]);
    assert_eq!(o.status.code(), Some(64));

    let v = json(&run(&["interchange", "--k", "3", "--c", "1"]));
    assert_eq!(v["evidence"]["contradiction"]["holds"], true);
    assert_eq!(v["evidence"]["contradiction"]["lower"], "1073741824/4225");
    let o = run(&["interchange", "--k", "1", "--c", "1/2"]);
    let v = json(&o);
    for key in [
        "k",
        "n",
        "R_size",
        "splits_tested",
        "pairs_tested",
        "violations",
        "fixed_middle_max",
        "bound",
    ] {
        assert!(v["evidence"].get(key).is_some(), "{key}");
    }
    assert_eq!(v["evidence"]["contradiction"]["c"], "1/2");
    assert_eq!(v["evidence"]["violations"], serde_json::json!([]));
    assert_eq!(
        run(&["interchange", "--k", "1", "--c", "x"]).status.code(),
        Some(64)
    );
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["enum", "circular", "--max", "20"];
    let cold = run_cached(dir.path(), &args);
    let warm = run_cached(dir.path(), &args);
    let off = run(&["--no-cache", "enum", "circular", "--max", "20"]);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, off.stdout);
    let stat = json(&run_cached(dir.path(), &["cache", "stat"]));
    assert_eq!(stat["evidence"]["entries"], 1);
    let cleared = json(&run_cached(dir.path(), &["cache", "clear"]));
    assert_eq!(cleared["evidence"]["removed"], 1);
}
