use std::process::{Command, Output};

fn picard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picard"))
        .args(args)
        .env_remove("PICARD_REPORT_DIR")
        .output()
        .unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("report on stdout")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(picard(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(picard(&["verify", "theorem2", "--k", "4..1"]).status.code(), Some(2));
    assert_eq!(picard(&["quad", "--grid", "32"]).status.code(), Some(2));
}

#[test]
fn presentations_pass() {
    let o = picard(&["verify", "presentations"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "picard-report");
    assert_eq!(v["version"], 1);
    assert_eq!(v["pass"], true);
    let suites = v["result"]["presentations"]["suites"].as_array().unwrap();
    assert!(suites
        .iter()
        .all(|s| s["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true && c["id"].is_string())));
}

#[test]
fn theorem2_single_k() {
    let o = picard(&["verify", "theorem2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["relations"].as_array().unwrap().len(), 6);
}

#[test]
fn report_dir_from_env() {
    let dir = std::env::temp_dir().join(format!("picard-cli-{}", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_picard"))
        .args(["verify", "geometry"])
        .env("PICARD_REPORT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.join("verify-geometry.json")).unwrap();
    assert!(written.contains("\"command\": \"verify geometry\""));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn theta_eval_and_period_matrix() {
    let o = picard(&["eval", "period-matrix", "--z1=-1", "--z2=0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["result"]["im_eigenvalues"][0].as_f64().unwrap() > 0.0);
    // [0:0:1] is on the boundary
    assert_eq!(picard(&["eval", "theta", "--z1=0", "--z2=0"]).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_1() {
    // the modularity suite does not hold for the literal theta constants
    let o = picard(&["verify", "theta", "--points", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["pass"], false);
}
