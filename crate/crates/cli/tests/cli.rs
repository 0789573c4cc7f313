//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wavefeat"));
    // Keep runs hermetic even if the ambient shell set a seed.
    c.env_remove("WAVEFEAT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Two cleanly separable classes, tab-delimited, `n` samples per record.
/// Class `a` is all-negative, class `b` all-positive, with per-class
/// spacings chosen so no midpoint between training values collides with a
/// test value.
fn write_dataset(path: &Path, per_class: usize, n: usize) {
    let mut s = String::new();
    for i in 0..per_class {
        for (label, base) in [("a", -(1.0 + 1.1 * i as f64)), ("b", 2.0 + 1.3 * i as f64)] {
            let values: Vec<String> = (0..n)
                .map(|t| format!("{}", base * (1.0 + 0.01 * t as f64)))
                .collect();
            s.push_str(&format!("{label}\t{}\n", values.join("\t")));
        }
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn info_summarizes_a_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 5, 16);
    let out = run(&["info", "--data", data.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("records: 10"), "{text}");
    assert!(text.contains("length: 16"), "{text}");
    assert!(text.contains("classes: 2"), "{text}");
    assert!(text.contains("mean smoothness"), "{text}");
}

#[test]
fn info_merges_a_second_file() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.tsv");
    let test = dir.path().join("test.tsv");
    write_dataset(&train, 3, 16);
    write_dataset(&test, 2, 16);
    let out = run(&[
        "info",
        "--data",
        train.to_str().unwrap(),
        "--merge-with",
        test.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("records: 10"), "{}", stdout(&out));
}

#[test]
fn missing_file_exits_with_data_error() {
    let out = run(&["info", "--data", "/nonexistent/nowhere.tsv"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("error:"), "{}", stderr(&out));
}

#[test]
fn unknown_filter_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 3, 16);
    let out = run(&[
        "transform",
        "--data",
        data.to_str().unwrap(),
        "--filters",
        "sym9",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("sym9"), "{}", stderr(&out));
}

#[test]
fn infeasible_level_exits_with_transform_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 3, 16);
    let out = run(&[
        "transform",
        "--data",
        data.to_str().unwrap(),
        "--filters",
        "haar",
        "--level",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn transform_writes_a_feature_csv() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 4, 16);
    let csv = dir.path().join("features.csv");
    let out = run(&[
        "transform",
        "--data",
        data.to_str().unwrap(),
        "--filters",
        "haar,d4",
        "--level",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    // Two filters × 4 smooth coefficients at level 2 on n=16, plus a label.
    assert_eq!(header.split(',').count(), 9, "{header}");
    assert!(header.starts_with("haar.s2.0,"), "{header}");
    assert!(header.ends_with(",label"), "{header}");
    assert_eq!(lines.count(), 8, "one line per record");
}

#[test]
fn transform_prints_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 2, 16);
    let out = run(&[
        "transform",
        "--data",
        data.to_str().unwrap(),
        "--filters",
        "haar",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("haar.s1.0,"), "{}", stdout(&out));
}

#[test]
fn npes_emits_curves_and_a_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 6, 16);
    let outdir = dir.path().join("curves");
    let out = run(&[
        "npes",
        "--data",
        data.to_str().unwrap(),
        "--filters",
        "haar,d4",
        "--level",
        "1",
        "--exemplars",
        "3",
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for name in [
        "npes_a_raw.csv",
        "npes_a_haar.csv",
        "npes_a_d4.csv",
        "npes_b_raw.csv",
        "npes_b_haar.csv",
        "npes_b_d4.csv",
        "ranking.json",
    ] {
        assert!(outdir.join(name).exists(), "missing {name}");
    }
    let ranking: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("ranking.json")).unwrap())
            .unwrap();
    assert_eq!(ranking["entries"].as_array().unwrap().len(), 2);
    let curve = std::fs::read_to_string(outdir.join("npes_a_haar.csv")).unwrap();
    assert!(curve.starts_with("M,C\n"), "{curve}");
    assert!(curve.trim_end().ends_with(",1"), "terminal fraction 1: {curve}");
    assert!(stdout(&out).starts_with("1. "), "{}", stdout(&out));
}

#[test]
fn evaluate_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 10, 16);
    let run_once = |outdir: &Path| {
        let out = run(&[
            "evaluate",
            "--data",
            data.to_str().unwrap(),
            "--filters",
            "haar",
            "--level",
            "1",
            "--classifier",
            "cart",
            "--eval",
            "cv:5",
            "--seed",
            "11",
            "--out",
            outdir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        std::fs::read(outdir.join("report.json")).unwrap()
    };
    let r1 = run_once(&dir.path().join("run1"));
    let r2 = run_once(&dir.path().join("run2"));
    assert_eq!(r1, r2, "same config and seed must give identical bytes");
    let report: serde_json::Value = serde_json::from_slice(&r1).unwrap();
    assert_eq!(report["accuracy_percent"], 100.0);
    assert_eq!(report["protocol"], "cv:5;seed=11;stratified=true");
    assert_eq!(report["fold_accuracies"].as_array().unwrap().len(), 5);
    let results =
        std::fs::read_to_string(dir.path().join("run1").join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 2, "{results}");
    assert!(results.starts_with("protocol,"), "{results}");
}

#[test]
fn evaluate_supports_fixed_train_test_files() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.tsv");
    let test = dir.path().join("test.tsv");
    write_dataset(&train, 8, 16);
    write_dataset(&test, 4, 16);
    let out = run(&[
        "evaluate",
        "--data",
        train.to_str().unwrap(),
        "--eval",
        "fixed",
        "--test-data",
        test.to_str().unwrap(),
        "--classifier",
        "j48",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["protocol"], "fixed");
    assert_eq!(report["accuracy_percent"], 100.0);
    assert_eq!(report["feature_width"], 16, "raw features when no --filters");
}

#[test]
fn fixed_eval_without_test_data_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 4, 16);
    let out = run(&[
        "evaluate",
        "--data",
        data.to_str().unwrap(),
        "--eval",
        "fixed",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("--test-data"), "{}", stderr(&out));
}

#[test]
fn recognized_but_unsupported_classifiers_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 4, 16);
    for name in ["forestpa", "sysfor"] {
        let out = run(&[
            "evaluate",
            "--data",
            data.to_str().unwrap(),
            "--classifier",
            name,
        ]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", stderr(&out));
        assert!(
            stderr(&out).contains("not implemented"),
            "{name}: {}",
            stderr(&out)
        );
    }
}

#[test]
fn pipeline_report_embeds_ranking_and_matches_composed_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 10, 16);
    let pipeline_json = dir.path().join("pipeline.json");
    let out = run(&[
        "pipeline",
        "--data",
        data.to_str().unwrap(),
        "--candidates",
        "haar,d4,la8",
        "--select-n",
        "2",
        "--level",
        "1",
        "--exemplars",
        "3",
        "--classifier",
        "rforest",
        "--trees",
        "20",
        "--eval",
        "cv:2",
        "--seed",
        "9",
        "--out",
        pipeline_json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&pipeline_json).unwrap()).unwrap();
    let chosen: Vec<String> = report["chosen_filters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(chosen.len(), 2);
    assert_eq!(report["original_n"], 16);
    let width = report["feature_width"].as_u64().unwrap();
    assert_eq!(width, 16, "two filters × 8 smooth coefficients at level 1");
    assert_eq!(
        report["compression_ratio"].as_f64().unwrap(),
        width as f64 / 16.0
    );
    assert_eq!(
        report["ranking"]["entries"].as_array().unwrap().len(),
        3,
        "all candidates ranked"
    );

    // Composing the steps by hand with the same seed reproduces the
    // embedded evaluation byte for byte.
    let outdir = dir.path().join("composed");
    let out = run(&[
        "evaluate",
        "--data",
        data.to_str().unwrap(),
        "--filters",
        &chosen.join(","),
        "--level",
        "1",
        "--classifier",
        "rforest",
        "--trees",
        "20",
        "--eval",
        "cv:2",
        "--seed",
        "9",
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let composed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["evaluation"], composed);
}

#[test]
fn select_n_beyond_candidates_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 4, 16);
    let out = run(&[
        "pipeline",
        "--data",
        data.to_str().unwrap(),
        "--candidates",
        "haar,d4",
        "--select-n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn seed_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.tsv");
    write_dataset(&data, 10, 16);
    let with_env = bin()
        .env("WAVEFEAT_SEED", "11")
        .args(["evaluate", "--data", data.to_str().unwrap(), "--classifier", "cart", "--eval", "cv:5"])
        .output()
        .unwrap();
    assert!(with_env.status.success(), "{}", stderr(&with_env));
    let with_flag = run(&[
        "evaluate",
        "--data",
        data.to_str().unwrap(),
        "--classifier",
        "cart",
        "--eval",
        "cv:5",
        "--seed",
        "11",
    ]);
    assert_eq!(stdout(&with_env), stdout(&with_flag));
}
