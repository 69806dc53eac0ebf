use std::path::PathBuf;
use std::process::Command;

use bcft::cli::run;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bcft"))
}

fn config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("bcft-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

fn args(list: &[&str]) -> Vec<String> {
    std::iter::once("bcft").chain(list.iter().copied()).map(String::from).collect()
}

#[test]
fn tree_examples() {
    let text = |list: &[&str]| {
        let mut a = vec!["--format", "text"];
        a.extend_from_slice(list);
        let o = run(args(&a));
        assert_eq!(o.code, 0, "{}", o.text);
        o.text
    };
    assert_eq!(text(&["tree", "compose", "3((12)4)", "2", "2(13)"]).trim(), "5((1(3(24)))6)");
    assert_eq!(text(&["tree", "compose", "3((12)4)", "2", ""]).trim(), "2(13)");
    assert!(text(&["tree", "double", "t(c1) o2"]).starts_with("(12)3"));
    let coords = text(&["coords", "(23)((15)4)"]);
    for line in ["x_A = z3-z4", "zeta2 = (z2-z3)/(z3-z4)", "zeta5 = (z5-z4)/(z3-z4)", "zeta1 = (z1-z5)/(z5-z4)"] {
        assert!(coords.contains(line), "{coords}");
    }
    let expand = run(args(&["expand", "(23)((15)4)", "(z2-z1)^-1", "--N", "2"]));
    let v: serde_json::Value = serde_json::from_str(&expand.text).unwrap();
    assert!(v.to_string().contains("zeta5"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(args(&["tree", "parse", "(12)3"])).code, 0);
    assert_eq!(run(args(&["tree", "parse", "(12"])).code, 2);
    assert_eq!(run(args(&["no-such-command"])).code, 2);
    assert_eq!(run(args(&["braid", "generator", "nope"])).code, 2);
    assert_eq!(run(args(&["verify", "bootstrap"])).code, 2);
}

#[test]
fn failed_check_exits_one() {
    let cfg = config("fail", r#"{"R_squared": "2", "charges": [[1, 0], [0, 1]], "seed": 1}"#);
    let cfg = cfg.to_str().unwrap();
    let ok = run(args(&["--config", cfg, "verify", "boundary-consistency", "--trees", "t(c1) o2;o2 t(c1)"]));
    assert_eq!(ok.code, 0, "{}", ok.text);
    let strict = run(args(&["--config", cfg, "--tol", "0", "--N", "2", "verify", "boundary-consistency", "--trees", "t(c1) o2;o2 t(c1)"]));
    assert_eq!(strict.code, 1, "{}", strict.text);
}

#[test]
fn binary_matches_library() {
    let out = bin().args(["tree", "compose", "(12)3", "2", "12"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), run(args(&["tree", "compose", "(12)3", "2", "12"])).text.trim_end());
    let bad = bin().args(["tree", "parse", "((1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("bcft-cli-{}-out.json", std::process::id()));
    let o = run(args(&["--out", path.to_str().unwrap(), "braid", "generator", "sigma"]));
    assert_eq!(o.code, 0);
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(written.get("word").is_some(), "{written}");
}

#[test]
fn text_format() {
    let o = run(args(&["--format", "text", "braid", "show", "s1 s2", "--strands", "3"]));
    assert_eq!(o.code, 0);
    assert!(!o.text.trim_start().starts_with('{'));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn seeded_runs_are_byte_identical(seed in 0u64..1000) {
        let seed = seed.to_string();
        let a = run(args(&["--seed", &seed, "verify", "regions", "(1(23))4", "--points", "50"]));
        let b = run(args(&["--seed", &seed, "verify", "regions", "(1(23))4", "--points", "50"]));
        prop_assert_eq!(a.code, 0);
        prop_assert_eq!(a.text, b.text);
    }

    #[test]
    fn seeded_config_runs_are_byte_identical(seed in 0u64..1000) {
        let cfg = config(&format!("det{seed}"), &format!(r#"{{"R_squared": "3", "reflection": "-1", "charges": [[1, 1], [2, -1]], "seed": {seed}}}"#));
        let cfg = cfg.to_str().unwrap();
        let call = || run(args(&["--config", cfg, "verify", "boundary-consistency", "--trees", "t(c1) o2;o2 t(c1)"]));
        let (a, b) = (call(), call());
        prop_assert_eq!(a.code, 0);
        prop_assert_eq!(a.text, b.text);
    }
}
