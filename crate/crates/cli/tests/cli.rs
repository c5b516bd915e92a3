use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_arqft");
const Q1: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/q1.json");
const Q2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/q2.json");
const ISOTROPIC: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/isotropic.json");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn arqft")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn field<'a>(csv: &'a str, row: usize, name: &str) -> &'a str {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.nth(row).unwrap().split(',').nth(i).unwrap()
}

#[test]
fn lfun_of_cubic() {
    let out = stdout(&["--p", "5", "lfun", "--D", "T^3+T+1"]);
    assert_eq!(field(&out, 0, "coefficients"), "1;3;5");
    assert_eq!(field(&out, 0, "rh"), "true");
    assert_eq!(field(&out, 0, "fe"), "true");
}

#[test]
fn lfun_of_linear_is_trivial() {
    let out = stdout(&["lfun", "--D", "T"]);
    assert_eq!(field(&out, 0, "coefficients"), "1");
    assert_eq!(field(&out, 0, "angles"), "");
}

#[test]
fn zeros_lie_on_the_circle() {
    let out = stdout(&["zeros", "--D", "T^3+T+1"]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for i in 0..2 {
        let m: f64 = field(&out, i, "modulus").parse().unwrap();
        assert!((m - 5f64.sqrt().recip()).abs() < 1e-9);
    }
}

#[test]
fn q2_represents_t() {
    let out = stdout(&["rep", "--form", Q2, "--D", "T"]);
    assert!(field(&out, 0, "vectors").split(';').any(|v| v == "0|1|0"));
    assert_eq!(field(&out, 0, "complete"), "true");
}

#[test]
fn q1_misses_degree_one() {
    let out = stdout(&["rep", "--form", Q1, "--deg", "1", "--all"]);
    assert_eq!(out.lines().count(), 21);
    for i in 0..20 {
        assert_eq!(field(&out, i, "r_Q"), "0");
    }
}

#[test]
fn example7_passes() {
    let out = stdout(&["example7"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 5);
    assert!(!out.contains("FAIL"));
}

#[test]
fn identity_suite_is_deterministic_across_threads() {
    let a = stdout(&["--seed", "7", "--threads", "4", "identity-suite"]);
    let b = stdout(&["--seed", "7", "--threads", "1", "identity-suite"]);
    assert_eq!(a, b);
}

#[test]
fn family_is_deterministic_across_threads() {
    let a = stdout(&["--seed", "3", "--threads", "4", "family", "--deg", "5", "--sample", "40"]);
    let b = stdout(&["--seed", "3", "--threads", "1", "family", "--deg", "5", "--sample", "40"]);
    assert_eq!(a, b);
}

fn read_dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn cache_is_transparent() {
    let cache = tempfile::tempdir().unwrap();
    let c = cache.path().to_str().unwrap();
    let mut outs = Vec::new();
    for cached in [false, true, true] {
        let out = tempfile::tempdir().unwrap();
        let o = out.path().to_str().unwrap();
        let mut args = vec!["--out-dir", o];
        if cached {
            args.extend(["--cache-dir", c]);
        }
        args.extend(["lfun", "--deg", "4", "--all"]);
        stdout(&args);
        let mut rep = args.clone();
        rep.truncate(rep.len() - 4);
        rep.extend(["rep", "--form", Q2, "--deg", "2", "--all"]);
        stdout(&rep);
        outs.push(read_dir_files(out.path()));
    }
    assert!(std::fs::read_dir(cache.path()).unwrap().count() > 0);
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[1], outs[2]);
}

#[test]
fn corrupt_cache_entries_are_ignored() {
    let cache = tempfile::tempdir().unwrap();
    let c = cache.path().to_str().unwrap();
    let clean = stdout(&["lfun", "--D", "T^3+T+1"]);
    stdout(&["--cache-dir", c, "lfun", "--D", "T^3+T+1"]);
    for e in walk(cache.path()) {
        std::fs::write(e, b"{not json").unwrap();
    }
    assert_eq!(stdout(&["--cache-dir", c, "lfun", "--D", "T^3+T+1"]), clean);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            files.extend(walk(&path));
        } else {
            files.push(path);
        }
    }
    files
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--p", "7", "lfun", "--D", "T"]), 3);
    assert_eq!(code(&["lfun", "--D", "T^2"]), 3);
    assert_eq!(code(&["--tol", "0", "lfun", "--D", "T"]), 3);
    assert_eq!(code(&["rep", "--form", ISOTROPIC, "--D", "T"]), 3);
    assert_eq!(code(&["--budget", "10", "rep", "--form", Q1, "--deg", "3", "--all"]), 4);
    assert_eq!(code(&["residual", "--form", Q1, "--maxdeg", "3"]), 2);
}

#[test]
fn genus_of_q1() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["--out-dir", dir.path().to_str().unwrap(), "genus", "--form", Q1]);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("genus.json")).unwrap()).unwrap();
    assert_eq!(v["class_count"], 6);
    assert_eq!(v["weight_num"], 31);
    assert_eq!(v["weight_den"], 12);
}
