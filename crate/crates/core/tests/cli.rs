use std::path::Path;

use pfzeta::cli::{run_with, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use pfzeta::xicoeffs::CoeffTable;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pfzeta").chain(args.iter().copied());
    let code = run_with(argv.map(String::from), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn last_doc(out: &str) -> Value {
    let line = out.lines().filter(|l| !l.starts_with('#')).next_back().expect("a JSON line");
    serde_json::from_str(line).unwrap()
}

fn write_table(path: &Path) -> String {
    let p = path.to_str().unwrap();
    let (code, out, err) = run(&["coeffs", "--kmax", "24", "--prec-bits", "128", "--out", p]);
    assert_eq!(code, EXIT_PASS, "{err}");
    out
}

#[test]
fn table_generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    write_table(&a);
    write_table(&b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    write_table(&path);
    let t = CoeffTable::read_cache(&path).unwrap();
    assert_eq!(t.k_max(), 24);
    let again = CoeffTable::from_json(&t.to_json()).unwrap();
    assert_eq!(again.to_json(), t.to_json());
    for (x, y) in t.entries().iter().zip(again.entries()) {
        assert!(x.contains_ball(y) && y.contains_ball(x));
    }
    let p = path.to_str().unwrap();
    let (code, out, err) = run(&["minors", "--input", p, "--nu", "1:2", "--krange", "0:10"]);
    assert_eq!(code, EXIT_PASS, "{err}");
    assert_eq!(out, run(&["minors", "--input", p, "--nu", "1:2", "--krange", "0:10"]).1);
}

#[test]
fn malformed_cache_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    write_table(&path);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["entries"][3]["mid"] = Value::from(7);
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, _, err) = run(&["minors", "--input", path.to_str().unwrap(), "--nu", "1:1", "--krange", "0:2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("entries[3].mid"), "{err}");

    std::fs::write(&path, "{not json").unwrap();
    let (code, _, _) = run(&["turan", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn polynomial_sources_and_exit_codes() {
    let (code, out, _) = run(&["minors", "--poly", "1,3,3,1", "--nu", "1:3", "--krange", "0:5"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.lines().any(|l| l.starts_with("# ")));
    let (code, _, _) = run(&["minors", "--poly", "1,0.8,1", "--nu", "1:2", "--krange", "0:3"]);
    assert_eq!(code, EXIT_FAIL);
    let (code, _, _) = run(&["minors", "--poly", "1,2", "--nu", "2:1"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run(&["nonsense"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn sector_preset_reports_order() {
    let (code, out, _) = run(&["sector", "--preset", "rectangle"]);
    assert_eq!(code, EXIT_PASS);
    let doc = last_doc(&out);
    assert_eq!(doc["m_sufficient"], Value::from(43), "{doc}");
}
