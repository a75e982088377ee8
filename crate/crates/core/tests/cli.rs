use ppvkit::cli::{run_with_env, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], env: Option<&str>) -> Outcome {
    run_with_env(std::iter::once("ppvkit").chain(args.iter().copied()), env)
}

fn json(args: &[&str]) -> Value {
    let out = run(args, Some("json"));
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn check_integrable_formats_agree() {
    let path = fixture("diag.json");
    let v = json(&["check-integrable", &path]);
    assert_eq!(v["verdict"], "Integrable");
    assert_eq!(v["violations"], Value::Array(Vec::new()));
    let reparsed: Value = serde_json::from_str(&v.to_string()).unwrap();
    assert_eq!(reparsed, v);

    let human = run(&["check-integrable", &path], None);
    assert_eq!(human.code, 0);
    assert!(human.stdout.contains("verdict: Integrable"), "{}", human.stdout);
}

#[test]
fn flag_overrides_environment() {
    let path = fixture("diag.json");
    let out = run(&["--format", "human", "check-integrable", &path], Some("json"));
    assert!(out.stdout.starts_with("verdict:"), "{}", out.stdout);
}

#[test]
fn solve_and_isomonodromy_report_witnesses() {
    let path = fixture("diag.json");
    let v = json(&["solve-integrable", &path]);
    assert_eq!(v["verdict"], "Integrable");
    assert_eq!(v["witnesses"]["t1"][0][0], "x");
    let v = json(&["isomonodromy", &path]);
    assert_eq!(v["verdict"], "IsomonodromicWithinAnsatz");
}

#[test]
fn classify_rescaling_family() {
    let v = json(&["classify-2x2", &fixture("sl2_rescaling.json")]);
    assert_eq!(v["verdict"], "CompletelyIntegrable");
    assert!(v["witnesses"]["t"].is_array());
}

#[test]
fn monodromy_of_one_over_x_is_constant() {
    let v = json(&["monodromy", &fixture("one_over_x.json"), "--loop", "center=0,radius=1,segments=64", "--grid", "t=0.1:0.9:5"]);
    assert_eq!(v["verdict"], "ConsistentWithIsomonodromy");
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 5);
    for s in samples {
        let re = s["monodromy"][0][0][0].as_f64().unwrap();
        assert!((re - 1.0).abs() < 1e-6, "{re}");
    }
}

#[test]
fn cross_check_agrees_on_varying_family() {
    let v = json(&["cross-check", &fixture("t_over_x.json"), "--loop", "center=0,radius=1,segments=64", "--grid", "t=0.1:0.9:3"]);
    assert_eq!(v["agreement"], "Agree");
    assert_eq!(v["numeric"], "VariesWithParameter");
}

#[test]
fn ore_and_group_commands() {
    let out = run(&["ore", "lclm", "D", "D - 1/t"], None);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "D^2");

    let out = run(&["group", "add", "t/(x-1)", "--closure"], None);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("group: Ga[L = D - 1/t]"), "{}", out.stdout);
    assert!(out.stdout.contains("closure: FullGa"), "{}", out.stdout);
}

#[test]
fn missing_file_is_an_io_error() {
    let out = run(&["check-integrable", "/nonexistent/system.json"], Some("json"));
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "Io");
}

#[test]
fn bad_loop_is_a_usage_error() {
    let out = run(&["monodromy", &fixture("diag.json"), "--loop", "garbage"], None);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--loop"), "{}", out.stderr);
}
