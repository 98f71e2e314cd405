use std::process::{Command, Output};

fn sl3coh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3coh")).args(args).env_remove("SL3COH_CACHE").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn coh_json_is_exact() {
    let out = sl3coh(&["coh", "--i", "2", "--weight", "4,-6", "--p", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim_end(),
        r#"{"dim":3,"character":[{"w":[-1,1],"m":1},{"w":[0,-1],"m":1},{"w":[1,0],"m":1}]}"#
    );
}

#[test]
fn singular_chi_is_zero() {
    let out = sl3coh(&["chi", "--weight", "-1,5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim_end(), r#"{"dim":0,"character":[]}"#);
}

#[test]
fn virtual_characters_print_signed() {
    let out = sl3coh(&["chi", "--weight", "-2,1", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with('-'), "{}", stdout(&out));
    let text = stdout(&sl3coh(&["chi", "--weight", "-2,1"]));
    assert!(text.contains("-1"), "{text}");
}

#[test]
fn output_is_stable() {
    let args = ["report", "--i", "2", "--weight", "16,-14", "--p", "3", "--format", "json"];
    let first = sl3coh(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, sl3coh(&args).stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["case"], "Delta");
    assert_eq!(v["subcase"], serde_json::json!({"R": 2, "S": 1}));
    let effaced: Vec<_> =
        v["layers"].as_array().unwrap().iter().filter(|l| l["status"] == "effaced").map(|l| l["k"].clone()).collect();
    assert_eq!(effaced, vec![serde_json::json!(3)]);
}

#[test]
fn every_command_runs_in_every_format() {
    let commands: [&[&str]; 11] = [
        &["chi", "--weight", "2,1"],
        &["coh", "--weight", "7,-8", "--p", "3"],
        &["simple", "--weight", "3,2", "--p", "3"],
        &["classify", "--weight", "7,-8", "--p", "3"],
        &["dfilt", "--weight", "7,-8", "--p", "3"],
        &["phifilt", "--j", "2", "--weight", "7,-8", "--p", "3"],
        &["jantzen", "--weight", "1,11", "--p", "5"],
        &["wall", "--n", "13", "--p", "3"],
        &["idelta", "--delta", "beta", "--weight", "6,-6", "--p", "3"],
        &["report", "--i", "1", "--weight", "8,-2", "--p", "5"],
        &["verify", "--suite", "named"],
    ];
    for args in commands {
        for format in ["json", "text", "latex"] {
            let mut full = args.to_vec();
            full.extend(["--format", format]);
            let out = sl3coh(&full);
            assert_eq!(out.status.code(), Some(0), "{full:?}: {}", stderr(&out));
            assert!(!stdout(&out).trim().is_empty(), "{full:?}");
            if format == "json" {
                serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap();
            }
        }
    }
}

#[test]
fn named_values_through_the_cli() {
    let h2 = sl3coh(&["coh", "--i", "2", "--weight", "7,-8", "--p", "3", "--format", "json"]);
    let l03 = sl3coh(&["simple", "--weight", "0,3", "--p", "3", "--format", "json"]);
    assert_eq!(h2.stdout, l03.stdout);
    let zero = sl3coh(&["idelta", "--delta", "alpha", "--weight", "15,-12", "--p", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&zero.stdout).unwrap();
    assert_eq!(v["dim"], 0);
}

#[test]
fn verify_suite_passes() {
    let out = sl3coh(&["verify", "--suite", "euler", "--box", "40", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = sl3coh(&["verify", "--suite", "all", "--box", "8", "--p", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["runs"].as_array().unwrap().len(), 11);
}

#[test]
fn domain_errors_exit_one() {
    let out = sl3coh(&["idelta", "--delta", "alpha", "--weight", "3,-5", "--p", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("DomainError"));
    let out = sl3coh(&["jantzen", "--weight", "-1,2", "--p", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sl3coh(&["wall", "--n", "0", "--p", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    let cases: [(&[&str], &str); 6] = [
        (&["coh", "--i", "2", "--weight", "4,-6", "--p", "4"], "--p"),
        (&["coh", "--i", "2", "--weight", "4", "--p", "3"], "--weight"),
        (&["coh", "--i", "2", "--weight", "4,-6"], "--p"),
        (&["coh", "--i", "5", "--weight", "4,-6", "--p", "3"], "--i"),
        (&["verify", "--suite", "euler", "--box", "0", "--p", "3"], "--box"),
        (&["verify", "--suite", "nope"], "--suite"),
    ];
    for (args, flag) in cases {
        let out = sl3coh(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sl3coh"))
            .args(["coh", "--i", "2", "--weight", "20,-17", "--p", "3", "--format", "json"])
            .env("SL3COH_CACHE", &path)
            .output()
            .unwrap()
    };
    let cold = run();
    assert_eq!(cold.status.code(), Some(0));
    assert!(path.exists());
    let warm = run();
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, sl3coh(&["coh", "--i", "2", "--weight", "20,-17", "--p", "3", "--format", "json"]).stdout);
    let other = Command::new(env!("CARGO_BIN_EXE_sl3coh"))
        .args(["coh", "--i", "2", "--weight", "4,-6", "--p", "5"])
        .env("SL3COH_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(other.status.code(), Some(0));
    assert!(stderr(&other).contains("warning"));
}
