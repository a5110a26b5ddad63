use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmp-elliptic"))
        .args(args)
        .env("MMP_ELLIPTIC_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn reduce_worked_example() {
    let o = cli(&["reduce", "--to", &fixture("alpha_third.json"), &fixture("worked_example.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["kind"], "LaNaveFlip");
    assert_eq!(records[0]["t"], "1/4");
    assert_eq!(records[1]["kind"], "TreeCollapseToPoint");
    assert_eq!(records[1]["wall"]["constant"], "5/6");
    let g1 =
        |m: &Value| m["components"][0]["fibers"].as_array().unwrap().iter().find(|f| f["id"] == "G1").cloned().unwrap();
    let collapsed = g1(&records[1]["snapshot"]);
    assert_eq!(collapsed["type"], "II");
    assert_eq!(collapsed["state"], "Weierstrass");
    assert_eq!(collapsed["coeff"], "5/6");
    assert_eq!(g1(&v["final"])["coeff"], "2/3");
}

#[test]
fn reduce_inline_weights_and_dot_dir() {
    let dir = tempfile::tempdir().unwrap();
    let to = "1,1,1,1,1,1,1,1,1,1,1/3,1/3";
    let d = dir.path().display().to_string();
    let o = cli(&["reduce", "--to", to, "--check-hassett", "--dot-dir", &d, &fixture("worked_example.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert_eq!(
        names,
        [
            "worked_example-00-start.dot",
            "worked_example-01-LaNaveFlip.dot",
            "worked_example-02-TreeCollapseToPoint.dot"
        ]
    );
}

#[test]
fn walls_two_markers() {
    let o = cli(&["walls", "--r", "2", "--types", "I1,I1", "--rational-base"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let walls = v.as_array().unwrap();
    let count = |k: &str| walls.iter().filter(|w| w["kind"] == k).count();
    assert_eq!(count("WII"), 4);
    assert_eq!(count("WIII"), 7 * 3);
    assert_eq!(count("WI"), 0);
}

#[test]
fn walls_segment_crossings() {
    let o = cli(&[
        "walls",
        "--model",
        &fixture("worked_example.json"),
        "--segment",
        &fixture("alpha_third.json"),
        "1,1,1,1,1,1,1,1,1,1,1,1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let ts: Vec<&str> = v["crossings"].as_array().unwrap().iter().map(|c| c["t"].as_str().unwrap()).collect();
    assert!(ts.contains(&"1/4") && ts.contains(&"1/8"), "{ts:?}");
}

#[test]
fn volume_results() {
    let o = cli(&["volume", &fixture("rational_twelve.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["volume"], "21");
    let o = cli(&["volume", &fixture("worked_example.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "unsupported-configuration");
}

#[test]
fn parse_errors() {
    let o = cli(&["model", &fixture("coeff_out_of_range.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "schema-violation");
    let o = cli(&["model", &fixture("coeff_mismatch.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "model-invalid");
    assert_eq!(v["error"]["details"].as_array().unwrap().len(), 1);
    let o = cli(&["model", &fixture("malformed.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "malformed-json");
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["volume", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cli(&["walls", "--r", "3", "--types", "I1"]).status.code(), Some(2));
    assert_eq!(cli(&["walls", "--r", "1", "--types", "I1", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn model_report_after_flip() {
    let o = cli(&["model", "--weights", "1,1,1,1,1,1,1,1,1,1,9/20,9/20", &fixture("worked_example.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["pseudo_fates"]["X2"], "Big");
    assert_eq!(v["section_degrees"]["X1"], "89/10");
    let o = cli(&[
        "model",
        "--format",
        "dot",
        "--weights",
        "1,1,1,1,1,1,1,1,1,1,9/20,9/20",
        &fixture("worked_example.json"),
    ]);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.contains("label=\"II, 9/10\""));
}

#[test]
fn dot_output_is_deterministic() {
    let run = || cli(&["model", "--format", "dot", &fixture("worked_example.json")]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn hassett_of_base_curve() {
    let o = cli(&["hassett", "--weights", "1,1,1,1,1,1,1,1,1,1,1/3,1/3", &fixture("worked_example.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(v["coincident"], serde_json::json!([[11, 12]]));
}

#[test]
fn markdown_has_no_ansi_when_disabled() {
    let o = cli(&["model", "--format", "md", &fixture("worked_example.json")]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("| X1 | F1 | I1 |"));
    assert!(!s.contains('\x1b'));
}

#[test]
fn batch_mode_keeps_path_order() {
    let pattern = format!("{}/*.json", fixture(""));
    let o = cli(&["volume", "--glob", &pattern]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let paths: Vec<String> = v.as_array().unwrap().iter().map(|e| e["path"].as_str().unwrap().to_string()).collect();
    let mut sorted = paths.clone();
    sorted.sort();
    assert_eq!(paths, sorted);
    let twelve =
        v.as_array().unwrap().iter().find(|e| e["path"].as_str().unwrap().ends_with("rational_twelve.json")).unwrap();
    assert_eq!(twelve["output"]["volume"], "21");
}
