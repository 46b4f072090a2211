//! Black-box tests of the ehrk binary: output formats, q-spec parsing,
//! exit codes.

use std::process::{Command, Output};

fn ehrk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn hstar_text_output() {
    let out = ehrk(&["hstar", "2^7,5^5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "1 + z + 2z^2 + 4z^3 + 4z^4 + 5z^5 + 6z^6 + 5z^7 + 4z^8 + 4z^9 + 2z^10 + z^11 + z^12"
    );
}

#[test]
fn hstar_accepts_explicit_multiset() {
    let a = ehrk(&["hstar", "2^7,5^5"]);
    let b = ehrk(&["hstar", "2,2,2,2,2,2,2,5,5,5,5,5"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn hstar_json_round_trips() {
    let out = ehrk(&["hstar", "2^7,5^5", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["coeffs"][3], 4);
}

#[test]
fn empty_qspec_is_usage_error() {
    let out = ehrk(&["hstar", ""]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = ehrk(&["hstar", "--frobnicate", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn g_requires_reflexive_input() {
    let out = ehrk(&["g", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn factor_poly_example() {
    let out = ehrk(&["factor", "--poly", "1,2,2,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "(1+z)(1+z+z^2)");
}

#[test]
fn factor_needs_exactly_one_input() {
    assert_eq!(ehrk(&["factor"]).status.code(), Some(2));
    assert_eq!(
        ehrk(&["factor", "1^3", "--poly", "1,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn ell_reflexive_count_commands() {
    assert_eq!(stdout(&ehrk(&["ell", "2^7,5^5"])).trim(), "4");
    assert_eq!(stdout(&ehrk(&["reflexive", "2^7,5^5"])).trim(), "true");
    assert_eq!(stdout(&ehrk(&["reflexive", "2"])).trim(), "false");
    assert_eq!(stdout(&ehrk(&["count", "1,1", "-t", "2"])).trim(), "10");
}

#[test]
fn count_rejects_oracle_scale_violation() {
    let out = ehrk(&["count", "1^7", "-t", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ehrhart_formats() {
    assert_eq!(stdout(&ehrk(&["ehrhart", "1,1"])).trim(), "3/2 t^2 + 3/2 t + 1");
    let out = ehrk(&["ehrhart", "1,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["num"][2], "3");
    assert_eq!(v["den"][2], "2");
}

#[test]
fn search2_csv_and_out_file() {
    let dir = std::env::temp_dir().join("ehrk-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("records.csv");
    let out = ehrk(&[
        "search2",
        "--rmax",
        "3",
        "--xmax",
        "5",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("r,x,reflexive,ell,kronecker"));
    assert!(written.lines().count() > 3);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn csv_format_rejected_for_scalar_commands() {
    let out = ehrk(&["hstar", "1^3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search2_diff_flag_reports_ok() {
    let out = ehrk(&["search2", "--rmax", "9", "--xmax", "15", "--diff-exceptional"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("OK:"), "{text}");
    assert!(text.contains("r=(2,9) x=(4,3)"), "{text}");
}

#[test]
fn classify2odd_small_sweep() {
    let out = ehrk(&["classify2odd", "--kmax", "4", "--cmax", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("OK:"));
}

#[test]
fn fib_small() {
    let out = ehrk(&["fib", "--nmax", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n=1 identities=true"), "{text}");
    assert!(text.contains("OK: 2 checks"), "{text}");
}

#[test]
fn families_small() {
    let out = ehrk(&["families", "--amax", "3", "--kmax", "2", "--cmax", "2", "--nmax", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("OK:"));
}

#[test]
fn positivity_small() {
    let out = ehrk(&["positivity", "--rmax", "3", "--xmax", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("OK:"));
}

#[test]
fn ehrk_threads_env_is_honored_and_output_identical() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_ehrk"))
            .args(["search2", "--rmax", "5", "--xmax", "8", "--format", "csv"])
            .env("EHRK_THREADS", threads)
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        stdout(&out)
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn fib_nmax_guard() {
    let out = ehrk(&["fib", "--nmax", "30"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kronecker_poly_flag() {
    let out = ehrk(&["kronecker", "--poly", "1,1,1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("true"));
    let out = ehrk(&["kronecker", "--poly", "1,1,2"]);
    assert_eq!(stdout(&out).trim(), "false");
}
