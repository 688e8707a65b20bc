use std::path::PathBuf;
use std::process::Command;

use fuzzy_rulegen::cli::{run, EXIT_DATA, EXIT_OK, EXIT_USAGE};

fn wdbc() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/wdbc.data")
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["fuzzy-rulegen"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn help_on_every_subcommand() {
    let flags = [
        ("fit", &["--method", "--data", "--out", "--partitions", "--bins"][..]),
        ("eval", &["--rules", "--data"][..]),
        ("compare", &["--data", "--scheme", "--seed", "--per-fold-normalization", "--partitions", "--bins"][..]),
        ("inspect", &["--rules"][..]),
        ("dump-plotdata", &["--data", "--kind", "--bins", "--attributes"][..]),
    ];
    for (cmd, expected) in flags {
        let (code, out, _) = invoke(&[cmd, "--help"]);
        assert_eq!(code, EXIT_OK, "{cmd}");
        for flag in expected {
            assert!(out.contains(flag), "{cmd} --help lacks {flag}:\n{out}");
        }
    }
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
}

#[test]
fn usage_errors_exit_one() {
    let (code, out, err) = invoke(&["compare", "--data", "x", "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(!err.is_empty());
    assert_eq!(invoke(&["fit", "--method", "grid", "--data", "x", "--out", "y"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["compare", "--data", &wdbc(), "--scheme", "holdout"]).0, EXIT_USAGE);
    assert_eq!(invoke(&[]).0, EXIT_USAGE);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.data");
    let (code, out, err) = invoke(&["compare", "--data", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_DATA);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);

    let bad = dir.path().join("bad.data");
    std::fs::write(&bad, "1,B,1,2,3\n").unwrap();
    let (code, _, err) = invoke(&["compare", "--data", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("line 1"), "{err}");

    let rules = dir.path().join("rules.fz");
    std::fs::write(&rules, "{\"format_version\": 9}").unwrap();
    let (code, _, err) = invoke(&["inspect", "--rules", rules.to_str().unwrap()]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("format_version"), "{err}");
}

#[test]
fn fit_then_eval_reports_the_same_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.fz");
    let rules = rules.to_str().unwrap();
    for method in ["mean-std", "histogram", "simple-grid", "modified-grid"] {
        let (code, out, err) = invoke(&[
            "fit", "--method", method, "--data", &wdbc(), "--out", rules, "--partitions", "5",
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.contains("rules written"), "{out}");
        let fit_acc = out.lines().find(|l| l.starts_with("training accuracy")).unwrap();
        let fit_acc = fit_acc.trim_start_matches("training ").to_string();

        let (code, out, _) = invoke(&["eval", "--rules", rules, "--data", &wdbc()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains(&fit_acc), "fit said {fit_acc:?}, eval said:\n{out}");
    }
}

#[test]
fn compare_prints_four_rows() {
    let (code, out, _) = invoke(&["compare", "--data", &wdbc(), "--scheme", "resubstitution"]);
    assert_eq!(code, EXIT_OK);
    for title in ["Mean and Standard Deviation", "Histogram", "Simple Grid", "Modified Grid"] {
        assert_eq!(out.lines().filter(|l| l.starts_with(title)).count(), 1, "{out}");
    }
    let (code, json, _) = invoke(&["compare", "--data", &wdbc(), "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["methods"].as_array().unwrap().len(), 4);
    assert_eq!(v["dataset"]["class_counts"], serde_json::json!([357, 212]));
}

#[test]
fn inspect_uses_linguistic_labels() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("grid.fz");
    let rules = rules.to_str().unwrap();
    assert_eq!(
        invoke(&["fit", "--method", "simple-grid", "--data", &wdbc(), "--out", rules]).0,
        EXIT_OK
    );
    let (code, out, _) = invoke(&["inspect", "--rules", rules]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("R1: IF radius_mean is "), "{out}");
    assert!(out.contains(" THEN class "));
    assert!(out.contains("partitions:"));
}

#[test]
fn plot_data_layouts() {
    let (code, out, _) = invoke(&["dump-plotdata", "--data", &wdbc()]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("class,attribute,bin_left,height"));
    // 2 classes x 30 attributes x 20 bins
    assert_eq!(lines.clone().count(), 1200);
    for l in lines {
        let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 4);
        assert!((0.0..=1.0).contains(&cols[3]));
    }

    let (code, out, _) = invoke(&["dump-plotdata", "--data", &wdbc(), "--kind", "scatter", "--attributes", "1,2,3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("class,radius_mean,texture_mean,perimeter_mean\n"));
    assert_eq!(out.lines().count(), 570);

    let (code, out, _) = invoke(&["dump-plotdata", "--data", &wdbc(), "--kind", "gaussian"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 61);

    assert_eq!(
        invoke(&["dump-plotdata", "--data", &wdbc(), "--kind", "scatter", "--attributes", "0,2,3"]).0,
        EXIT_USAGE
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fuzzy-rulegen");
    let ok = Command::new(bin).args(["compare", "--data", &wdbc()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Simple Grid"));
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    let data = Command::new(bin).args(["compare", "--data", "/nonexistent/wdbc.data"]).output().unwrap();
    assert_eq!(data.status.code(), Some(EXIT_DATA));
}
