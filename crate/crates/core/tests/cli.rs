use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn microcech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_microcech")).args(args).env_remove("MICROCECH_THREADS").output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(bytes)))
}

fn scratch(name: &str, contents: &[u8]) -> String {
    let dir = std::env::temp_dir().join(format!("microcech-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn op_product_matches_committed_example() {
    let out = microcech(&["op", "mul", &example("d1.json"), &example("x1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(example("d1_x1.json")).unwrap()).unwrap();
    assert_eq!(json(&out.stdout), expected);

    let text = microcech(&["op", "mul", &example("d1.json"), &example("x1.json"), "--text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("x1"));
}

#[test]
fn op_output_feeds_back_in() {
    let out = microcech(&["op", "inv", &example("d1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let inv = scratch("d1_inv.json", &out.stdout);
    let back = microcech(&["op", "mul", &example("d1.json"), &inv]);
    assert_eq!(back.status.code(), Some(0));
    let v = json(&back.stdout);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1, "{v}");
}

#[test]
fn cohomology_of_sphere() {
    let out = microcech(&["cohomology", &example("s2.json"), "--coeff", "Z", "--deg", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["free_rank"], 1);
    let h1 = json(&microcech(&["cohomology", &example("s2.json"), "--coeff", "Z/4", "--deg", "1"]).stdout);
    assert_eq!(h1["order"], "1");
}

#[test]
fn h1_with_comparison() {
    let out = microcech(&["h1", &example("s2.json"), &example("xmod_z2_shifted.json"), "--compare"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["classes"], 2);
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = microcech(&["h1", &example("s2.json"), &example("xmod_z2_shifted.json"), "--budget", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(json(&out.stderr)["error"], "budget");
}

#[test]
fn verify_truth_values_map_to_exit_codes() {
    for (file, code, truth) in [
        ("bundle_s1_lambda.json", 0, "true"),
        ("bundle_s2_scalar.json", 0, "true"),
        ("bundle_broken.json", 1, "false"),
        ("bundle_short_window.json", 3, "indeterminate"),
    ] {
        let out = microcech(&["verify", &example(file)]);
        assert_eq!(out.status.code(), Some(code), "{file}");
        assert_eq!(json(&out.stdout)["truth"], truth, "{file}");
    }
    let broken = json(&microcech(&["verify", &example("bundle_broken.json")]).stdout);
    assert_eq!(broken["simplex"], serde_json::json!([0, 1, 3]));
}

#[test]
fn twist_then_classify_recovers_the_fiber_class() {
    let out = microcech(&["twist", &example("s1.json"), "--lambda", &example("lambda_s1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let bundle = scratch("twisted.json", &out.stdout);
    let committed: Value = serde_json::from_str(&std::fs::read_to_string(example("bundle_s1_lambda.json")).unwrap()).unwrap();
    assert_eq!(json(&out.stdout), committed);

    let c = microcech(&["classify", &bundle, "--model", &example("model_s1_e0.json")]);
    assert_eq!(c.status.code(), Some(0));
    let v = json(&c.stdout);
    assert_eq!(v["fiber1"], serde_json::json!(["2/3"]));
}

#[test]
fn hopf_sequence_is_exact() {
    let out = microcech(&["sequence", &example("model_hopf.json"), "--coeff", "Z/4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["exact"], serde_json::json!([true, true, true]));
}

#[test]
fn malformed_input_reports_the_path() {
    let bad = scratch("bad_nerve.json", br#"{"vertices": 3, "simplices": [[0, "x"]]}"#);
    let out = microcech(&["cohomology", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let e = json(&out.stderr);
    assert_eq!(e["error"], "parse");
    assert!(e["path"].as_str().unwrap().ends_with("simplices[0][1]"), "{e}");

    let truncated = scratch("truncated.json", b"{\"vertices\": 3,");
    assert_eq!(microcech(&["cohomology", &truncated]).status.code(), Some(2));
    assert_eq!(microcech(&["cohomology", "/nonexistent/nerve.json"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(microcech(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(microcech(&["cohomology", &example("s2.json"), "--coeff", "Z/0"]).status.code(), Some(2));
    assert_eq!(microcech(&["verify", &example("bundle_s1_lambda.json"), "--window", "1"]).status.code(), Some(2));
    assert_eq!(microcech(&["--help"]).status.code(), Some(0));
}

#[test]
fn thread_variable_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_microcech"))
            .args(["cohomology", &example("s1.json")])
            .env("MICROCECH_THREADS", v)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("4"), Some(0));
    assert_eq!(run("0"), Some(2));
    assert_eq!(run("many"), Some(2));
}
