//! End-to-end runs of the `fadekit` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn fadekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fadekit")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_geometric_kernel() {
    let input = data("geometric_kernel.json");
    let out = fadekit(&["classify", "--input", path_str(&input), "--p", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["report"]["verdicts"]["p_weighted_fmp"], "holds");
    assert_eq!(r["report"]["verdicts"]["product_fmp"], "fails");
}

#[test]
fn classify_constant_norm_at_p_one() {
    let input = data("constant_norm.json");
    let r = report(&fadekit(&["classify", "--input", path_str(&input), "--p", "1"]));
    assert_eq!(r["report"]["verdicts"]["p_weighted_fmp"], "fails");
    assert_eq!(r["report"]["verdicts"]["p_continuity"], "holds");
}

#[test]
fn bad_inputs_exit_two() {
    let kernel = data("geometric_kernel.json");
    let out = fadekit(&["classify", "--input", path_str(&kernel), "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["error"].is_string());

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ \"dims\": [1, 1], ").unwrap();
    assert_eq!(fadekit(&["realize", "--input", path_str(&broken)]).status.code(), Some(2));
    assert_eq!(fadekit(&["classify", "--input", path_str(&broken), "--p", "2"]).status.code(), Some(2));

    let toy = data("toy.json");
    for gamma in ["0", "-1"] {
        let out = fadekit(&["regress", "--input", path_str(&toy), "--gamma", gamma, "--lambda", "0.5"]);
        assert_eq!(out.status.code(), Some(2), "gamma = {gamma}");
    }
    assert_eq!(fadekit(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(fadekit(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn realize_stable_and_unstable() {
    let out = fadekit(&["realize", "--input", path_str(&data("ssm_half.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["stability"]["stable"], "yes");
    let mats = r["kernel"]["matrices"].as_array().unwrap();
    assert_eq!(mats[mats.len() - 1], serde_json::json!([[1.0]]));
    assert_eq!(mats[mats.len() - 2], serde_json::json!([[0.5]]));

    let out = fadekit(&["realize", "--input", path_str(&data("ssm_rotation.json"))]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["stability"]["stable"], "no");
    assert!(r["witness"]["residual"].as_f64().unwrap() < 1e-12);
    assert!(r["kernel"].is_null());
}

#[test]
fn regress_is_deterministic_and_zero_targets_give_zero_weights() {
    let toy = data("toy.json");
    let args = ["regress", "--input", path_str(&toy), "--gamma", "0.1", "--lambda", "0.5", "--truncate", "-1", "--seed", "7"];
    let (a, b) = (fadekit(&args), fadekit(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    let eq = &r["equivalence"];
    for key in ["prediction_residual", "objective_residual", "norm_residual"] {
        assert!(eq[key].as_f64().unwrap() < 1e-10, "{key}: {}", eq[key]);
    }

    let dir = tempfile::tempdir().unwrap();
    let csv = std::fs::read_to_string(data("toy.csv")).unwrap();
    let zeroed: String = csv
        .lines()
        .map(|l| match l.rsplit_once(',') {
            Some((head, tail)) if !tail.is_empty() && !l.starts_with("seq") => format!("{head},0\n"),
            _ => format!("{l}\n"),
        })
        .collect();
    std::fs::write(dir.path().join("toy.csv"), zeroed).unwrap();
    std::fs::copy(toy, dir.path().join("toy.json")).unwrap();
    let fit_path = dir.path().join("fit.json");
    let out = fadekit(&[
        "regress",
        "--input",
        path_str(&dir.path().join("toy.json")),
        "--gamma",
        "0.1",
        "--lambda",
        "0.5",
        "--save-fit",
        path_str(&fit_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["alpha"].as_array().unwrap().iter().all(|a| a.as_f64() == Some(0.0)));
    assert_eq!(r["rkhs_norm"], 0.0);
    assert!(fit_path.exists());
}

#[test]
fn regress_with_induced_kernel() {
    let out = fadekit(&[
        "regress",
        "--input",
        path_str(&data("toy.json")),
        "--gamma",
        "0.5",
        "--kernel",
        path_str(&data("geometric_kernel.json")),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["alpha"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_passes_and_can_fail() {
    let out = fadekit(&["verify", "--trials", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 10);

    // a tolerance below double precision cannot be met
    let out = fadekit(&["verify", "--trials", "2", "--eps", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn bench_discrepancy_within_bound() {
    let out = fadekit(&["bench", "--input", path_str(&data("ssm_damped.json")), "--lengths", "64,256", "--reps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = report(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["within_bound"], true);
        assert!(row["discrepancy"].as_f64().unwrap() <= row["bound"].as_f64().unwrap());
    }
}

#[test]
fn text_format_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("report.txt");
    let input = data("finite_kernel.json");
    let out = fadekit(&["classify", "--input", path_str(&input), "--p", "2", "--format", "text", "--output", path_str(&dest)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dest).unwrap();
    assert!(text.lines().any(|l| l == "schema_version: 1"), "{text}");
    assert!(text.lines().any(|l| l == "report.verdicts.product_fmp: holds"), "{text}");
}
