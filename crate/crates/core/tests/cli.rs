use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use narita_core::cli::{run, Args, ProblemFile};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run_args(args: &[&str]) -> (i32, String) {
    let parsed =
        Args::try_parse_from(std::iter::once("narita").chain(args.iter().copied())).unwrap();
    let out = run(&parsed);
    (out.code, out.output)
}

#[test]
fn invariants_match_golden_output() {
    let (code, out) = run_args(&["invariants", &data("data/m4_square.prob"), "--json"]);
    assert_eq!(code, 0);
    let golden = std::fs::read_to_string(data("golden/m4_square_invariants.json")).unwrap();
    assert_eq!(out, golden);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["hilbert"]["h"], serde_json::json!(["5", "0", "6", "-4", "1"]));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "reduction",
        "--fixture",
        "rr-classic",
        "--json",
        "--seed",
        "7",
    ];
    let (c1, a) = run_args(&args);
    let (c2, b) = run_args(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], "7");
}

#[test]
fn text_rendering() {
    let (code, out) = run_args(&["invariants", &data("data/parameters.prob")]);
    assert_eq!(code, 0);
    assert!(out.contains("h = [4]"), "{out}");
    assert!(out.contains("e = (4, 0, 0)"), "{out}");

    let (code, out) = run_args(&["rr", "--fixture", "rr-classic"]);
    assert_eq!(code, 0);
    assert!(out.contains("end_h0 = 0"), "{out}");
    assert!(out.contains("c_I = 2"), "{out}");
}

#[test]
fn file_options_are_read() {
    let text = std::fs::read_to_string(data("data/hypersurface.prob")).unwrap();
    let p = ProblemFile::parse(&text).unwrap();
    assert_eq!(p.options.window, Some(3));
    assert_eq!(p.options.seed, Some(0));
    let fx = p.build("hypersurface", Some(12)).unwrap();
    assert_eq!(fx.dim(), 3);
    assert_eq!(fx.ring.degree_bound(), 12);
    assert!(fx.get_module("M").is_ok());
}

#[test]
fn oracle_check_agrees() {
    let (code, out) = run_args(&["oracle-check", "--fixture", "parameters", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "oracle-check");
    assert_eq!(v["all_agree"], true);
}

#[test]
fn input_errors_exit_with_three() {
    assert_eq!(run_args(&["invariants"]).0, 3);
    assert_eq!(run_args(&["invariants", "--fixture", "nope"]).0, 3);
    assert_eq!(
        run_args(&["invariants", "--fixture", "m4-square", "--ideal", "nope"]).0,
        3
    );

    let dir = std::env::temp_dir().join(format!("narita-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.prob");
    std::fs::write(&bad, "ring { vars = [x]; }\nideal I = [ x^ ];\n").unwrap();
    let (code, out) = run_args(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.starts_with("error:"), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_narita");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["narita", "--fixture", "plane"]), Some(0));
    assert_eq!(status(&["invariants"]), Some(3));
    assert_eq!(status(&["frobnicate"]), Some(3));
    assert_eq!(status(&["--help"]), Some(0));
}
