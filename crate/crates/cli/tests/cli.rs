use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn gaudin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaudin"))
        .args(args)
        .env_remove("GAUDIN_PRECISION")
        .output()
        .unwrap()
}

fn run(command: &str, file: &str, extra: &[&str]) -> (i32, Value) {
    let path = instance(file);
    let mut args = vec!["--command", command, "--instance", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = gaudin(&args);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn assertion<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["name"] == name)
        .unwrap_or_else(|| panic!("no assertion {name} in {report}"))
}

#[test]
fn construct_recovers_an_eigenvector() {
    let (code, report) = run("construct", "singlet.json", &[]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(assertion(&report, "delta_membership")["pass"], true);
    assert_eq!(assertion(&report, "eigenvector")["pass"], true);
}

#[test]
fn construct_rejects_an_operator_outside_the_class() {
    let (code, report) = run("construct", "not_in_class.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(assertion(&report, "delta_membership")["pass"], false);
}

#[test]
fn construct_without_operator_is_invalid_input() {
    let (code, _) = run("construct", "gl2_four_points.json", &[]);
    assert_eq!(code, 2);
}

#[test]
fn low_precision_with_a_tiny_first_parameter_fails_and_high_precision_recovers() {
    let (low, report) = run("construct", "low_precision_stress.json", &["--precision", "53", "--eps0", "1e-30"]);
    assert_eq!(low, 1, "{report}");
    let (high, report) = run("construct", "low_precision_stress.json", &["--precision", "256", "--eps0", "1e-30"]);
    assert_eq!(high, 0, "{report}");
}

#[test]
fn verify_closes_on_the_two_factor_instance() {
    let (code, report) = run("verify", "gl3_two_factors.json", &["--random-points", "1"]);
    assert_eq!(code, 0, "{report}");
    assert!(report["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true));
}

#[test]
fn completeness_and_spectrum_pass() {
    let (code, report) = run("completeness", "gl2_four_points.json", &[]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["result"]["dim"], 2);
    let (code, _) = run("spectrum", "gl3_three_points.json", &[]);
    assert_eq!(code, 0);
}

#[test]
fn empty_list_passes_vacuously() {
    let (code, report) = run("verify", "empty.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(report["pass"], true);
    assert_eq!(report["reports"].as_array().unwrap().len(), 0);
}

#[test]
fn malformed_and_missing_input_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"N\": 2, ").unwrap();
    let out = gaudin(&["--command", "verify", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let no_b = dir.path().join("no_b.json");
    std::fs::write(&no_b, r#"{"N":2,"factors":[{"partition":[1]}],"weight":[1]}"#).unwrap();
    let out = gaudin(&["--command", "verify", "--instance", no_b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = gaudin(&["--command", "verify", "--instance", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_and_thread_count_do_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    let four = dir.path().join("four.json");
    let path = instance("desk_suite.json");
    for (jobs, out) in [("1", &one), ("4", &four)] {
        let o = gaudin(&[
            "--command", "verify", "--instance", path.to_str().unwrap(),
            "--jobs", jobs, "--random-points", "1", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&four).unwrap());
}
