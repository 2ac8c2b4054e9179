use gkverify_core::cli::strip_timing;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn gkverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkverify"))
        .args(args)
        .env("GKVERIFY_THREADS", "2")
        .output()
        .expect("spawn gkverify")
}

fn json_run(args: &[&str]) -> Value {
    let mut full = vec!["run", "--format", "json"];
    full.extend_from_slice(args);
    let out = gkverify(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    strip_timing(&mut v);
    v
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--p", "3", "--q", "3", "--m", "0", "--suite", "lie,weyl,module,garfinkle"];
    assert_eq!(json_run(&args), json_run(&args));
}

#[test]
fn golden_small_run() {
    let v = json_run(&["--p", "2", "--q", "2", "--m", "0", "--suite", "lie,weyl"]);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/lie_weyl_2_2.json");
    let rendered = serde_json::to_string_pretty(&v).unwrap() + "\n";
    if std::env::var_os("GKVERIFY_BLESS").is_some() {
        std::fs::write(&path, &rendered).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(rendered, golden);
}

#[test]
fn summary_counts_add_up() {
    let v = json_run(&["--p", "2", "--q", "4", "--m", "0", "--suite", "casimir,paction"]);
    let s = &v["summary"];
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(s["total"].as_u64().unwrap() as usize, checks.len());
    assert_eq!(s["passed"], s["total"]);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn odd_dimension_module_is_a_config_error() {
    let out = gkverify(&["run", "--p", "3", "--q", "4", "--suite", "module"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn odd_dimension_is_fine_for_lie_checks() {
    let out = gkverify(&["run", "--p", "3", "--q", "4", "--suite", "lie"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_suite_is_rejected() {
    let out = gkverify(&["run", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out_path = dir.path().join("report.json");
    std::fs::write(&cfg, "# small run\np = 2\nq = 2\nm = 0\nsuite = lie\nformat = text\n").unwrap();
    let out = gkverify(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--suite",
        "weyl",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["config"]["suites"], serde_json::json!(["weyl"]));
    assert_eq!(v["config"]["sweep"], serde_json::json!([[2, 2, 0]]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["name"].as_str().unwrap().starts_with("weyl.")));
}

#[test]
fn list_names_every_check() {
    let out = gkverify(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert!(names.len() >= 25);
    for suite in ["lie.", "weyl.", "casimir.", "module.", "paction.", "symsq.", "garfinkle."] {
        assert!(names.iter().any(|n| n.starts_with(suite)), "{suite}");
    }
}
