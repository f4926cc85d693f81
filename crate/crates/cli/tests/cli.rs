//! End-to-end runs of the `sl3theta` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn sl3theta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3theta"))
        .args(args)
        .env_remove("SL3THETA_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["id"].as_str().unwrap().to_owned(), c["status"].as_str().unwrap().to_owned()))
        .collect()
}

#[test]
fn borel_suite_passes() {
    let out = sl3theta(&["verify", "--all", "--lambda1", "7/3", "--lambda2", "5/7", "--depth", "10", "--B", "5", "--D", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let ids: Vec<_> = statuses(&report).into_iter().map(|(id, s)| (id, s == "pass")).collect();
    assert_eq!(
        ids,
        [("BorelTrace13", true), ("BorelRegTrace12", true), ("BorelRegTrace23", true)].map(|(a, b)| (a.to_owned(), b))
    );
}

#[test]
fn parabolic_suite_reports_discrepancies() {
    let out = sl3theta(&["verify", "--all", "--module", "parabolic", "--lambda2", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["pipelineAgreement"], "pass");
        let expected = match check["id"].as_str().unwrap() {
            "ParabolicTrace12" | "ParabolicTrace23" => "paper-discrepancy",
            _ => "ok",
        };
        assert_eq!(check["classification"], expected, "{}", check["id"]);
    }
    let levi = report["checks"][2]["notes"].as_array().unwrap();
    assert!(levi.iter().any(|n| n == "matching upper limit: k <= i (ParabolicTrace23AltLimit)"));
    assert!(report["checks"][0]["firstMismatch"]["monomial"].is_string());
}

#[test]
fn parabolic_branching_a23() {
    let out = sl3theta(&["branch", "--module", "parabolic", "--root", "23", "--lambda2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let agg = json(&out)["data"]["aggregate"].clone();
    let finite: Vec<(u64, u64)> = agg
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["kind"] == "FiniteL")
        .map(|e| (e["hw"].as_u64().unwrap(), e["multiplicity"].as_u64().unwrap()))
        .take(4)
        .collect();
    assert_eq!(finite, [(0, 1), (1, 2), (2, 2), (3, 2)]);
}

#[test]
fn parabolic_character_at_zero_levi() {
    let out = sl3theta(&["character", "--module", "parabolic", "--lambda2", "0", "--T", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(statuses(&json(&out))[0].1, "pass");
}

#[test]
fn reports_are_byte_stable() {
    let args = ["spectrum", "--root", "13", "--depth", "6"];
    let a = sl3theta(&args);
    let b = sl3theta(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_sl3theta"))
        .args(args)
        .env("SL3THETA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["branch"],
        &["branch", "--root", "14"],
        &["character", "--lambda1", "1"],
        &["character", "--module", "parabolic", "--lambda2", "1/2"],
        &["character", "--format", "xml"],
        &["character", "--format", "csv"],
        &["verify"],
        &["verify", "--id", "NoSuchIdentity"],
        &["verify", "--id", "ParabolicTrace13"],
        &["character", "--config", "/nonexistent/settings.conf"],
    ] {
        let out = sl3theta(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_sl3theta"))
        .arg("character")
        .env("SL3THETA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = sl3theta(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# parabolic run\nmodule = parabolic\nlambda2 = 2\ndepth = 4\nT = 3\n").unwrap();
    let conf = conf.to_str().unwrap();
    let out = sl3theta(&["character", "--config", conf, "--lambda1", "-13/4"]);
    assert_eq!(out.status.code(), Some(0));
    let cfg = json(&out)["config"].clone();
    assert_eq!(cfg["module"], "parabolic");
    assert_eq!((cfg["lambda1"].as_str(), cfg["lambda2"].as_str()), (Some("-13/4"), Some("2")));
    assert_eq!(cfg["window"]["T"], 3);
    let over = sl3theta(&["character", "--config", conf, "--lambda2", "0"]);
    assert_eq!(json(&over)["config"]["lambda2"], "0");
}

#[test]
fn csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a13.csv");
    let out = sl3theta(&[
        "branch", "--root", "13", "--depth", "2", "--format", "csv", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "root,n,m,kind,hw_c0,hw_c1,hw_c2,multiplicity");
    assert_eq!(lines.len(), 1 + 6);
    assert_eq!(lines[1], "13,0,0,VermaM,0,1,1,1");
}

#[test]
fn trace_pipelines() {
    let out = sl3theta(&["trace", "--root", "13", "--B", "3", "--D", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let ids: Vec<String> = statuses(&json(&out)).into_iter().map(|(id, _)| id).collect();
    assert!(ids.contains(&"BorelTrace13".to_owned()));

    let out = sl3theta(&["trace", "--root", "12", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let notes = json(&out)["checks"][0]["notes"].to_string();
    assert!(notes.contains("formal window sums; divergent as series"));

    let out = sl3theta(&["trace", "--root", "23", "--regularized", "--T", "3", "--pipeline", "brute"]);
    assert_eq!(out.status.code(), Some(0));
}
