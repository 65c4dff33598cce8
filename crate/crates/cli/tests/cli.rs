use std::process::{Command, Output};

use num_bigint::BigInt;
use num_traits::Signed;

fn measura(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_measura"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = measura(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    measura(args).status.code().expect("exit code")
}

/// `d`-digit decimal string as `n / 10^d`.
fn scaled(s: &str, d: u32) -> BigInt {
    let (int, frac) = s.trim().split_once('.').expect("decimal point");
    assert_eq!(frac.len(), d as usize, "{s}");
    let neg = int.starts_with('-');
    let mag: BigInt = format!("{}{frac}", int.trim_start_matches('-')).parse().unwrap();
    if neg {
        -mag
    } else {
        mag
    }
}

/// `|printed − num/den| ≤ 10^-d` in integers.
fn within(printed: &str, d: u32, num: &BigInt, den: &BigInt) -> bool {
    let unit = BigInt::from(10).pow(d);
    (scaled(printed, d) * den - num * &unit).abs() <= den.clone()
}

#[test]
fn digits_of_the_alternating_series() {
    let s = stdout(&["digits", "series(n, (-1)^(n+1)*(1/2)^n)", "12"]);
    assert_eq!(s.trim(), "0.333333333333");
}

#[test]
fn digits_match_independent_references() {
    // √2 from the integer square root of 2·10^60
    let d = 25;
    let s = stdout(&["digits", "sqrt(2)", &d.to_string()]);
    let scale = BigInt::from(10).pow(30);
    let root = (BigInt::from(2) * &scale * &scale).sqrt();
    assert!(within(&s, d, &root, &scale), "{s}");

    // Σ n²/3ⁿ = x(1 + x)/(1 − x)³ at x = 1/3, i.e. 3/2
    let s = stdout(&["digits", "series(n, n^2/3^n)", "10"]);
    assert!(within(&s, 10, &BigInt::from(3), &BigInt::from(2)), "{s}");

    let s = stdout(&["digits", "1/3 + 1/3", "3"]);
    assert!(s.trim() == "0.667" || s.trim() == "0.666");
    let s = stdout(&["digits", "-sqrt(2)", "5"]);
    assert!(within(&s, 5, &BigInt::from(-1_414_213_562i64), &BigInt::from(1_000_000_000)), "{s}");
}

#[test]
fn measure_tables() {
    let s = stdout(&["measure", "1 - 1/omega", "--q", "1..5", "--convention", "floor"]);
    assert_eq!(s, "q p\n1 0\n2 1\n3 2\n4 3\n5 4\n");
    let s = stdout(&["measure", "2/3", "--q", "3", "--convention", "floor", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["expr"], "2/3");
    assert_eq!(v["convention"], "floor");
    assert_eq!(v["rows"][0]["q"], 3);
    assert_eq!(v["rows"][0]["p"], 2);
    let s = stdout(&["measure", "1/omega", "--q", "999990..1000000", "--convention", "floor"]);
    assert!(s.lines().skip(1).all(|l| l.ends_with(" 0")));
    // laugwitz answers for √2 at q = 10 are 14 or 15
    let s = stdout(&["measure", "sqrt(2)", "--q", "10"]);
    let p = s.lines().nth(1).unwrap();
    assert!(p == "10 14" || p == "10 15", "{p}");
}

#[test]
fn compare_verdicts() {
    assert_eq!(
        stdout(&["compare", "1", "1 - 1/omega"]).trim(),
        "Greater (exact); old-equal: false; new-equal: true"
    );
    assert!(stdout(&["compare", "sqrt(2)", "3/2"]).starts_with("Less, witness q="));
    assert!(stdout(&["compare", "1/3", "series(n, (-1)^(n+1)*(1/2)^n)"]).starts_with("equal within 2^-19"));
    assert_eq!(stdout(&["compare", "sqrt(2)*sqrt(2)", "2", "--depth", "10"]).trim(), "equal within 2^-9");
}

#[test]
fn nets_dump_and_nesting() {
    let s = stdout(&["net", "2/3", "--q0", "2", "--depth", "4", "--mode", "doubling"]);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(&lines[..4], &["1 1/2 1/1", "2 1/2 3/4", "3 5/8 3/4", "4 5/8 11/16"]);
    assert_eq!(lines[4..].iter().filter(|l| l.ends_with(": ok")).count(), 3);
    let s = stdout(&["net", "sqrt(2)", "--q0", "1", "--depth", "10", "--mode", "cumulative"]);
    assert!(s.lines().all(|l| !l.contains("FAILED")));
    assert_eq!(code(&["net", "sqrt(2)", "--q0", "1", "--depth", "3", "--mode", "doubling"]), 3);
    assert_eq!(code(&["net", "omega", "--q0", "1", "--depth", "3", "--mode", "cumulative"]), 2);
}

#[test]
fn classification_lines() {
    assert!(stdout(&["classify", "series(n, n)"]).starts_with("InfinitelyLargeValue"));
    assert!(stdout(&["classify", "product(n, 1 - (1/2)^n)"]).starts_with("Unknown"));
    let s = stdout(&["classify", "3 + 4/omega"]);
    assert!(s.starts_with("MeasurableValue, Exact") && s.contains("std 3 "), "{s}");
    assert!(stdout(&["classify", "series(n, (-1)^(n+1)/n)"]).contains("leibniz"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["classify", "series(n,"]), 1);
    assert_eq!(code(&["digits", "1 +", "3"]), 1);
    assert_eq!(code(&["digits", "omega", "3"]), 2);
    assert_eq!(code(&["digits", "series(n, 1/n^2)", "3"]), 2);
    assert_eq!(code(&["measure", "sqrt(2)", "--q", "1..3", "--convention", "floor"]), 3);
    assert_eq!(code(&["digits", "1", "0"]), 1);
    assert_eq!(code(&["verify", "nonsense"]), 1);
    assert_eq!(code(&["verify", "window"]), 0);
    let err = measura(&["digits", "series(n,", "3"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("position 9"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "all", "--seed", "42", "--trials", "30"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert!(a.contains("A+B: Violated at q=1"));
    assert!(a.ends_with("failures: 0\n"));
    let json = stdout(&["verify", "counterexample", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["suite"], "counterexample");
}

#[test]
fn repl_reads_lines() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_measura"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"series(n, n)\n1/\n:q\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[0].starts_with("InfinitelyLargeValue"));
    assert!(lines[1].starts_with("error: parse error"));
}
