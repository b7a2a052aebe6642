use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freetrack")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Every number in the output sits in an object with an `exact` or `tol` key.
fn all_marked(v: &Value, inside: bool) -> bool {
    match v {
        Value::Number(_) => inside,
        Value::Array(a) => a.iter().all(|x| all_marked(x, inside)),
        Value::Object(o) => {
            let marked = inside || o.contains_key("exact") || o.contains_key("tol");
            o.values().all(|x| all_marked(x, marked))
        }
        _ => true,
    }
}

#[test]
fn validate_fibonacci() {
    let out = run(&["validate", fixture("fib.map").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["train_track"], true);
    assert_eq!(v["expanding_power"]["value"], 2);
    assert_eq!(v["illegal_turns"].as_array().unwrap().len(), 1);
    assert!(all_marked(&v, false));
}

#[test]
fn plastic_simplex_is_a_point() {
    let out = run(&["simplex", fixture("plastic.map").to_str().unwrap(), "--radius", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
    let lambda = v["vertices"][0]["lambda"]["value"].as_f64().unwrap();
    assert!((lambda - 2.324717957244746).abs() < 1e-6);
    assert!(all_marked(&v, false));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let pair = fixture("plastic.pair.toml");
    let args = ["ns-report", "--pair", pair.to_str().unwrap(), "--samples", "5", "--nmax", "12"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert!(all_marked(&v, false));
    let seq = run(&[&args[..], &["--sequential"]].concat());
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("freetrack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.map");
    std::fs::write(&path, "edges: a, b\nmap f: a -> a c; b -> a\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"]["value"], 2);
    assert_eq!(v["error"]["column"]["value"], 15);
    std::fs::write(&path, "edges: a, b\nmap f: a -> a b; b -> b B\n").unwrap();
    let v = json(&run(&["validate", path.to_str().unwrap()]));
    assert_eq!(v["error"]["kind"], "regularity");
}

#[test]
fn frequencies_csv() {
    let dir = std::env::temp_dir().join(format!("freetrack-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("f.csv");
    let out = run(&["frequencies", fixture("fib.map").to_str().unwrap(), "--edge", "a", "--radius", "2", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("path,frequency"));
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a: f64 = lines.find(|l| l.starts_with("a,")).unwrap()[2..].parse().unwrap();
    assert!((a - phi / (phi + 1.0)).abs() < 1e-8);
}

#[test]
fn orbit_of_a_plastic_word() {
    let out = run(&["orbit", "--pair", fixture("plastic.pair.toml").to_str().unwrap(), "--word", "abCab", "--nmax", "30"]);
    assert!(out.status.success());
    let v = json(&out);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 61);
    let last = recs.last().unwrap();
    assert!(last["dist_plus"]["value"].as_f64().unwrap() < 1e-3);
}

#[test]
fn wedge_of_two_roses() {
    let out = run(&["wedge", fixture("plastic.map").to_str().unwrap(), fixture("fib.map").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["edges"]["value"], 5);
    assert!(v["map_file"].as_str().unwrap().contains("fixed-vertex: v"));
}
