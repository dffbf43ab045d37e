use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn cubictk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubictk")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn modular_class_trivial_case() {
    let out = cubictk(&["modular-class", "--p", "241", "--r", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert_eq!(rep["result"]["n_chi"], 18);
    assert_eq!(rep["result"]["is_free"], true);
    assert_eq!(rep["assumptions"]["h_plus_one"], true);
}

#[test]
fn unknown_flag_is_an_input_error() {
    assert_eq!(cubictk(&["modular-class", "--p", "241", "--r", "5", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(cubictk(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(cubictk(&["--help"]).status.code(), Some(0));
}

#[test]
fn starved_class_group_is_a_certificate_mismatch() {
    let out = cubictk(&["classgroup", "--r", "23", "--bound", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certificate"));
}

#[test]
fn bad_parameters_exit_two() {
    assert_eq!(cubictk(&["modular-class", "--p", "243", "--r", "5"]).status.code(), Some(2));
    assert_eq!(cubictk(&["hminus", "--r", "9"]).status.code(), Some(2));
    assert_eq!(cubictk(&["tpi", "--branch", "/nonexistent.json", "--chi-exponent", "1"]).status.code(), Some(2));
}

#[test]
fn rationals_are_strings() {
    let rep = report(&cubictk(&["bernoulli", "--k", "12", "--mod", "691"]));
    assert_eq!(rep["result"]["value"], "-691/2730");
    assert_eq!(rep["result"]["residue"], 0);
    let rep = report(&cubictk(&["theta2", "--r", "5", "--p", "241"]));
    let coeffs: Vec<&str> =
        rep["result"]["coefficients"].as_array().unwrap().iter().map(|c| c["coefficient"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["0", "2/5", "8/5", "18/5", "32/5"]);
}

#[test]
fn tpi_on_the_modular_branch() {
    let branch = fixture("branch_241_5.json");
    let expected = ["0", "4/5", "9/5", "2", "7/5"];
    for (e, want) in expected.iter().enumerate() {
        let rep = report(&cubictk(&["tpi", "--branch", &branch, "--chi-exponent", &e.to_string()]));
        assert_eq!(rep["result"]["t"], *want, "χ₀^{e}");
    }
}

#[test]
fn check_cubic_verdicts() {
    let out = cubictk(&["check-cubic", "--group", &fixture("z3.json"), "--n", "3", "--elem", &fixture("unit_z3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["n_cubic"], true);
    let out = cubictk(&[
        "check-cubic",
        "--group",
        &fixture("z2xz2.json"),
        "--n",
        "2",
        "--elem",
        &fixture("unit_z2xz2.json"),
    ]);
    assert_eq!(report(&out)["result"]["n_cubic"], true);
    let out = cubictk(&["check-cubic", "--group", &fixture("z3.json"), "--n", "3", "--elem", &fixture("nonunit_z3.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vandiver_flag_is_recorded() {
    let rep = report(&cubictk(&["kernel-bound", "--group", &fixture("z3.json"), "--n", "3", "--assume-vandiver"]));
    assert_eq!(rep["assumptions"]["vandiver"], true);
    let rep = report(&cubictk(&["kernel-bound", "--group", &fixture("z3.json"), "--n", "3"]));
    assert_eq!(rep["assumptions"]["vandiver"], false);
}

#[test]
fn bsd_check_trivial_inputs() {
    let triv = fixture("trivial_class.json");
    let out = cubictk(&["bsd-check", "--p", "241", "--r", "5", "--sha", &triv, "--mw", &triv]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["relation_holds"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["mainthm-idele", "--branch", &fixture("branch_241_5.json"), "--squared"];
    assert_eq!(cubictk(&args).stdout, cubictk(&args).stdout);
}

#[test]
fn reports_replay_to_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("cubictk-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let branch = fixture("branch_241_5.json");
    let runs: [&[&str]; 4] = [
        &["tpi", "--branch", &branch, "--chi-exponent", "3"],
        &["mainthm-idele", "--branch", &branch],
        &["gauss", "--p", "11", "--r", "5"],
        &["telescope", "--n", "2", "--q", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = cubictk(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        let path = dir.join(format!("report{i}.json"));
        std::fs::write(&path, &first.stdout).unwrap();
        let again = cubictk(&["replay", "--report", path.to_str().unwrap()]);
        assert_eq!(again.stdout, first.stdout, "{args:?}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn acceptance_single_criterion() {
    let out = cubictk(&["acceptance", "--only", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert_eq!(rep["result"][0]["passed"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[PASS]"));
}
