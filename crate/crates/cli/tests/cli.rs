//! End-to-end tests of the `comfort` binary: exit codes, output shapes,
//! and determinism of the file artifacts.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn comfort(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comfort"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn help_exits_zero_everywhere() {
    for args in [
        vec!["--help"],
        vec!["gen-data", "--help"],
        vec!["train", "--help"],
        vec!["predict", "--help"],
        vec!["simulate", "--help"],
        vec!["check", "--help"],
    ] {
        let out = comfort(&args);
        assert_eq!(exit_code(&out), 0, "{args:?}: {out:?}");
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = comfort(&["gen-data", "--bogus"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn gen_data_writes_header_plus_records() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("data.csv");
    let out = comfort(&["gen-data", "--n", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("records=10"));
    assert!(stdout(&out).contains("resamples=0"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("temp_c,rh_pct,pmv\n"));
}

#[test]
fn gen_data_is_deterministic_per_seed() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        let out = comfort(&[
            "gen-data",
            "--n",
            "50",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn gen_data_rejects_bad_inputs() {
    let dir = tempdir().unwrap();
    let missing = dir.path().join("no-such-dir").join("data.csv");
    let out = comfort(&["gen-data", "--n", "10", "--out", missing.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);

    let path = dir.path().join("data.csv");
    let out = comfort(&["gen-data", "--n", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn train_rejects_bad_inputs() {
    let dir = tempdir().unwrap();
    let model = dir.path().join("model.txt");
    let out = comfort(&[
        "train",
        "--data",
        "/no/such/file.csv",
        "--model-out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    let data = dir.path().join("data.csv");
    let gen = comfort(&["gen-data", "--n", "50", "--out", data.to_str().unwrap()]);
    assert_eq!(exit_code(&gen), 0);
    for extra in [
        vec!["--epochs", "0"],
        vec!["--batch-size", "0"],
        vec!["--train-fraction", "1.0"],
        vec!["--widths", "16,16,16"],
        vec!["--widths", "16,0,16,16"],
    ] {
        let mut args = vec![
            "train",
            "--data",
            data.to_str().unwrap(),
            "--model-out",
            model.to_str().unwrap(),
        ];
        args.extend(extra.iter());
        let out = comfort(&args);
        assert_eq!(exit_code(&out), 1, "args {extra:?}: {out:?}");
    }
}

#[test]
fn predict_validates_ranges_and_model_file() {
    let dir = tempdir().unwrap();
    let model = dir.path().join("model.txt");
    std::fs::write(&model, "not a model\n").unwrap();
    // range checks precede the model load
    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "25",
        "--rh",
        "120",
    ]);
    assert_eq!(exit_code(&out), 1);
    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "90",
        "--rh",
        "50",
    ]);
    assert_eq!(exit_code(&out), 1);
    // corrupt model file
    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "25",
        "--rh",
        "50",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn simulate_validates_flags() {
    let dir = tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = comfort(&[
        "simulate",
        "--steps",
        "0",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let out = comfort(&[
        "simulate",
        "--steps",
        "10",
        "--source",
        "surrogate",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn pipeline_end_to_end() {
    let dir = tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let model = dir.path().join("model.txt");
    let stats = dir.path().join("stats.txt");

    let out = comfort(&[
        "gen-data",
        "--n",
        "600",
        "--seed",
        "7",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");

    let out = comfort(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--model-out",
        model.to_str().unwrap(),
        "--stats-out",
        stats.to_str().unwrap(),
        "--epochs",
        "15",
        "--widths",
        "8,8,8,8",
        "--seed",
        "7",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let metrics_line = stdout(&out);
    assert!(
        metrics_line.contains("mse=") && metrics_line.contains("r2="),
        "{metrics_line}"
    );
    assert!(stats.exists());

    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "25.00",
        "--rh",
        "60.99",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = stdout(&out);
    assert!(text.starts_with("Predicted PMV: "), "{text}");
    assert!(text.contains("class="), "{text}");

    // out-of-domain flag on a point outside the sampled box
    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "60",
        "--rh",
        "50",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("out_of_domain=true"));

    // comfortable-start simulation: no actuation at all
    let trace = dir.path().join("trace.csv");
    let report = dir.path().join("report.txt");
    let out = comfort(&[
        "simulate",
        "--steps",
        "100",
        "--source",
        "surrogate",
        "--model",
        model.to_str().unwrap(),
        "--trace-out",
        trace.to_str().unwrap(),
        "--report-out",
        report.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let report_text = std::fs::read_to_string(&report).unwrap();
    assert!(
        report_text.contains("heater_duty 0.000000"),
        "{report_text}"
    );
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    assert!(trace_text.starts_with("step,temp_c,rh_pct,pmv,class,heater,exhaust,coolant\n"));
    assert_eq!(trace_text.lines().count(), 101);

    // identical seeds give byte-identical traces
    let trace2 = dir.path().join("trace2.csv");
    let out = comfort(&[
        "simulate",
        "--steps",
        "100",
        "--source",
        "surrogate",
        "--model",
        model.to_str().unwrap(),
        "--trace-out",
        trace2.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        std::fs::read(&trace).unwrap(),
        std::fs::read(&trace2).unwrap()
    );
}

#[test]
fn hot_start_simulation_leaves_the_hot_band() {
    let dir = tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = comfort(&[
        "simulate",
        "--steps",
        "2000",
        "--init-temp",
        "32.34",
        "--init-rh",
        "62.22",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = stdout(&out);
    let occupancy_hot = text
        .lines()
        .find_map(|l| l.strip_prefix("occupancy_hot "))
        .expect("occupancy line")
        .parse::<f64>()
        .unwrap();
    assert!(
        occupancy_hot > 0.0 && occupancy_hot < 0.05,
        "hot occupancy {occupancy_hot}"
    );
    // the trailing steps are out of the Hot band
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    let last = trace_text.lines().last().unwrap();
    assert!(!last.contains(",Hot,"), "{last}");
}

#[test]
fn check_reports_the_known_failing_probe() {
    // all checks except the documented analytic reference-point probe pass,
    // so the battery exits 4 with exactly one FAIL line
    let out = comfort(&["check"]);
    assert_eq!(exit_code(&out), 4, "{out:?}");
    let text = stdout(&out);
    let fails: Vec<&str> = text.lines().filter(|l| l.contains("status=FAIL")).collect();
    assert_eq!(fails.len(), 1, "{text}");
    assert!(
        fails[0].contains("check=reference_point_analytic"),
        "{text}"
    );
    assert!(text.contains("check=solver_oracle_grid status=PASS"));
    assert!(text.contains("check=monotonic_in_temperature status=PASS"));
}

#[test]
fn check_rejects_a_corrupt_model_file() {
    let dir = tempdir().unwrap();
    let model = dir.path().join("model.txt");
    std::fs::write(&model, "garbage\n").unwrap();
    let out = comfort(&["check", "--model", model.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn full_scale_defaults_meet_the_metric_band() {
    // the whole pipeline at its default sizes: 50k records, 100 epochs
    let dir = tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let model = dir.path().join("model.txt");

    let out = comfort(&["gen-data", "--out", data.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("records=50000"));
    let text = std::fs::read_to_string(&data).unwrap();
    assert_eq!(text.lines().count(), 50_001);

    let out = comfort(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--model-out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let metrics_line = stdout(&out);
    let r2 = metrics_line
        .lines()
        .next()
        .and_then(|l| l.split("r2=").nth(1))
        .and_then(|v| v.trim().parse::<f64>().ok())
        .unwrap_or_else(|| panic!("no r2 in {metrics_line:?}"));
    assert!(r2 >= 0.98, "r2 {r2} below the band");

    // the trained surrogate tracks the analytic engine at the reference
    // point (analytic value: -0.4557) and agrees on the calibration labels
    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "23.45",
        "--rh",
        "45.67",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let pmv = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("Predicted PMV: "))
        .and_then(|v| v.parse::<f64>().ok())
        .unwrap_or_else(|| panic!("no PMV in {text:?}"));
    assert!((pmv - (-0.4557)).abs() <= 0.15, "pmv {pmv}");
    assert!(text.contains("class=Comfortable"), "{text}");

    let out = comfort(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--temp",
        "25.00",
        "--rh",
        "60.99",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("class=Comfortable"));
}
