//! End-to-end runs of the shipped scenario corpus through the library
//! API and through the compiled binary.

use std::path::PathBuf;
use std::process::Command;

use gaquot::report::Status;
use gaquot::scenario::{format_scenario, parse_scenario, run_scenario, RunOptions};

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .canonicalize()
        .expect("scenario corpus present")
}

fn load(name: &str) -> String {
    std::fs::read_to_string(scenario_dir().join(name)).expect("scenario file readable")
}

#[test]
fn shipped_corpus_parses_and_passes() {
    for name in [
        "sl2.scn",
        "russell_cubic.scn",
        "punctured_plane.scn",
        "families.scn",
    ] {
        let scenario = parse_scenario(&load(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let reports = run_scenario(&scenario, &RunOptions::default()).unwrap();
        assert!(!reports.is_empty(), "{name} has no checks");
        for r in &reports {
            assert!(r.passed(), "{name}: {r:?}");
        }
    }
}

#[test]
fn corpus_is_fmt_clean() {
    // formatting the shipped files is idempotent
    for name in ["sl2.scn", "russell_cubic.scn", "punctured_plane.scn"] {
        let scenario = parse_scenario(&load(name)).unwrap();
        let once = format_scenario(&scenario, &RunOptions::default()).unwrap();
        let twice =
            format_scenario(&parse_scenario(&once).unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn reports_are_deterministic_across_jobs() {
    let scenario = parse_scenario(&load("russell_cubic.scn")).unwrap();
    let strip = |reports: Vec<gaquot::report::Report>| {
        let stripped: Vec<_> = reports
            .into_iter()
            .map(|mut r| {
                r.ms = 0;
                r
            })
            .collect();
        serde_json::to_string(&stripped).unwrap()
    };
    let one = strip(run_scenario(&scenario, &RunOptions::default()).unwrap());
    let four = strip(
        run_scenario(
            &scenario,
            &RunOptions {
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap(),
    );
    assert_eq!(one, four);
}

#[test]
fn failing_check_sets_exit_code() {
    // y is not invariant for nu on SL2: expect a fail status, not an error
    let src = r#"scheme SL2 vars x,y,u,v rel "x*v - y*u - 1"
derivation nu on SL2 images x:"y", y:"0", u:"v", v:"0"
check invariant nu "x"
check fixed_empty nu
"#;
    let scenario = parse_scenario(src).unwrap();
    let reports = run_scenario(&scenario, &RunOptions::default()).unwrap();
    assert_eq!(reports[0].status, Status::Fail);
    assert!(!reports[0].witnesses.is_empty(), "fail carries a witness");
    // batch isolation: the second check still passes
    assert!(reports[1].passed());
}

#[test]
fn binary_runs_scenario_and_emits_json() {
    let bin = env!("CARGO_BIN_EXE_gaquot");
    let json_path = std::env::temp_dir().join(format!("gaquot_cli_{}.json", std::process::id()));
    let out = Command::new(bin)
        .arg("run")
        .arg(scenario_dir().join("sl2.scn"))
        .arg("--json")
        .arg(&json_path)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = std::fs::read_to_string(&json_path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&doc).unwrap();
    assert!(parsed.as_array().is_some_and(|a| !a.is_empty()));
    let _ = std::fs::remove_file(&json_path);
}

#[test]
fn binary_fmt_is_idempotent() {
    let bin = env!("CARGO_BIN_EXE_gaquot");
    let out = Command::new(bin)
        .arg("fmt")
        .arg(scenario_dir().join("punctured_plane.scn"))
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let formatted = String::from_utf8(out.stdout).unwrap();
    assert!(formatted.contains("cover split on A2"));
}

#[test]
fn binary_exit_code_nonzero_on_failure() {
    let bin = env!("CARGO_BIN_EXE_gaquot");
    let dir = std::env::temp_dir();
    let path = dir.join(format!("gaquot_fail_{}.scn", std::process::id()));
    std::fs::write(
        &path,
        "scheme A vars x rel \"x^2\"\ncheck member A \"x\"\n",
    )
    .unwrap();
    let out = Command::new(bin).arg("run").arg(&path).output().unwrap();
    assert!(!out.status.success());
    let _ = std::fs::remove_file(&path);
}
