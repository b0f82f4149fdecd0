//! Black-box tests of the `hearbox` binary: flag handling, exit codes, file
//! formats, and determinism. Every test drives the compiled executable.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::OnceLock;

use hearbox_core::spectrum::{generate_box_spectrum_auto, serialize_spectrum, BoxGeometry};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hearbox"));
    cmd.env_remove("SPECTRAL_THREADS");
    cmd
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("stdout utf8"),
        String::from_utf8(out.stderr).expect("stderr utf8"),
    )
}

/// The 1×3 benchmark eigenvalue file, generated once through the binary.
fn bench_file() -> &'static Path {
    static BENCH: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    let (_, path) = BENCH.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("bench.txt");
        let (code, _, stderr) = run(&[
            "generate",
            "--a",
            "1",
            "--b",
            "3",
            "--count",
            "10000",
            "--skip",
            "5",
            "--index-cap",
            "800",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stderr}");
        (dir, path)
    });
    path
}

fn bench_path() -> &'static str {
    bench_file().to_str().unwrap()
}

fn parse_json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON report")
}

#[test]
fn generate_writes_the_reference_leading_value() {
    let (code, stdout, _) = run(&[
        "generate",
        "--a",
        "1",
        "--b",
        "3",
        "--count",
        "16",
        "--skip",
        "5",
        "--index-cap",
        "800",
        "-o",
        "-",
    ]);
    assert_eq!(code, 0);
    let first: f64 = stdout.lines().next().unwrap().parse().unwrap();
    assert!((first - 40.5750).abs() < 5e-5, "first value {first}");
    assert_eq!(stdout.lines().count(), 16);
}

#[test]
fn generate_single_lowest_mode_to_stdout() {
    let (code, stdout, _) = run(&[
        "generate", "--a", "1", "--b", "1", "--count", "1", "-o", "-",
    ]);
    assert_eq!(code, 0);
    let value: f64 = stdout.trim().parse().unwrap();
    assert!((value - 19.7392).abs() < 5e-5, "value {value}");
}

#[test]
fn generated_box_file_matches_the_library_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("box.txt");
    let (code, _, stderr) = run(&[
        "generate",
        "--a",
        "1",
        "--b",
        "2",
        "--c",
        "3",
        "--dim",
        "3",
        "--count",
        "100",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stderr}");

    let geom = BoxGeometry::new(1.0, 2.0, 3.0).unwrap();
    let oracle = serialize_spectrum(&generate_box_spectrum_auto(&geom, 100, 0).unwrap());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), oracle);
}

#[test]
fn incomplete_generation_fails_loudly() {
    let (code, _, stderr) = run(&[
        "generate",
        "--a",
        "1",
        "--b",
        "10",
        "--count",
        "3",
        "--index-cap",
        "2",
        "-o",
        "-",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("truncation_safe_cutoff"), "{stderr}");
}

#[test]
fn reconstruct_reports_the_benchmark_rectangle() {
    let (code, stdout, stderr) = run(&["reconstruct", bench_path()]);
    assert_eq!(code, 0, "{stderr}");
    let report = parse_json(&stdout);

    assert_eq!(report["status"], "ok");
    let a = report["a_hat"].as_f64().unwrap();
    let b = report["b_hat"].as_f64().unwrap();
    assert!((a - 1.0).abs() < 0.002, "a_hat {a}");
    assert!((b - 3.0).abs() / 3.0 < 0.002, "b_hat {b}");
    assert!(report["c_hat"].is_null());
    assert!((report["measure_hat"].as_f64().unwrap() - 3.0).abs() < 0.03);
    assert!((report["aspect_ratio"].as_f64().unwrap() - 1.0 / 3.0).abs() < 0.001);
    assert!(report["pair_score"].as_f64().unwrap() < 0.01);

    let peaks = report["peaks"].as_array().unwrap();
    assert!(!peaks.is_empty());
    for peak in peaks {
        assert!(peak["L"].as_f64().unwrap() > 0.0);
        assert!(peak["power"].as_f64().unwrap() > 0.0);
        assert!(peak["prominence"].as_f64().unwrap() > 0.0);
    }

    assert_eq!(report["fit"]["model"], "three_term");
    assert!((report["fit"]["fraction"].as_f64().unwrap() - 0.2).abs() < 1e-15);
    assert!(report["fit"]["slope"].as_f64().unwrap() > 0.0);
    assert!(report["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn reconstruct_output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let (code_a, json_a, _) = run(&[
        "reconstruct",
        bench_path(),
        "--csv",
        csv_a.to_str().unwrap(),
    ]);
    let (code_b, json_b, _) = run(&[
        "reconstruct",
        bench_path(),
        "--csv",
        csv_b.to_str().unwrap(),
    ]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(json_a, json_b);
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap()
    );
}

#[test]
fn paper_faithful_flags_still_find_the_sides() {
    let (code, stdout, _) = run(&[
        "reconstruct",
        bench_path(),
        "--window",
        "rectangular",
        "--smooth-model",
        "linear",
    ]);
    assert_eq!(code, 0);
    let report = parse_json(&stdout);
    let a = report["a_hat"].as_f64().unwrap();
    let b = report["b_hat"].as_f64().unwrap();
    assert!((a - 1.0).abs() < 0.02, "a_hat {a}");
    assert!((b - 3.0).abs() / 3.0 < 0.02, "b_hat {b}");
    assert_eq!(report["fit"]["model"], "linear");
}

#[test]
fn empty_input_is_a_size_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    let (code, _, stderr) = run(&["reconstruct", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("fewer than 16 eigenvalues"), "{stderr}");
}

#[test]
fn tight_tolerance_exits_three_with_ambiguous_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (code, _, stderr) = run(&[
        "reconstruct",
        bench_path(),
        "--pair-tolerance",
        "1e-7",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "{stderr}");
    let report = parse_json(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(report["status"], "ambiguous");
    assert!(report["a_hat"].is_null());
    let candidates = report["candidates"].as_array().unwrap();
    assert!(!candidates.is_empty() && candidates.len() <= 3);
    for c in candidates {
        assert_eq!(c["lengths"].as_array().unwrap().len(), 2);
        assert!(c["score"].as_f64().unwrap() > 1e-7);
    }
    assert!(report["best_score"].as_f64().unwrap() > 1e-7);
}

fn csv_rows(text: &str) -> Vec<(f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("L,S"));
    lines
        .map(|line| {
            let (l, s) = line.split_once(',').expect("two columns");
            (l.parse().unwrap(), s.parse().unwrap())
        })
        .collect()
}

#[test]
fn length_spectrum_argmax_sits_on_the_fundamental_orbits() {
    let (code, stdout, _) = run(&[
        "length-spectrum",
        bench_path(),
        "--l-min",
        "0.5",
        "--l-max",
        "8",
        "--steps",
        "4096",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&stdout);
    assert_eq!(rows.len(), 4096);

    let global = rows.iter().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
    assert!((global.0 - 2.0).abs() < 0.01, "argmax at {}", global.0);

    let long_side = rows
        .iter()
        .filter(|r| r.0 > 5.0 && r.0 < 6.2)
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    assert!((long_side.0 - 6.0).abs() < 0.02, "peak at {}", long_side.0);
}

#[test]
fn null_signal_yields_numerically_zero_power() {
    // An exactly linear staircase has no oscillatory remainder, so the power
    // curve must vanish at the level of fit rounding noise.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("linear.txt");
    let mut text = String::new();
    for k in 1..=400 {
        text.push_str(&format!("{:.16e}\n", k as f64 / 0.7));
    }
    std::fs::write(&path, text).unwrap();

    let (code, stdout, _) = run(&[
        "length-spectrum",
        path.to_str().unwrap(),
        "--l-min",
        "0.5",
        "--l-max",
        "8",
        "--steps",
        "4096",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&stdout);
    let scale = 400.0_f64 * 400.0;
    assert!(rows.iter().all(|r| r.1 < 1e-6 * scale));
}

#[test]
fn reversed_grid_is_rejected() {
    let (code, _, stderr) = run(&[
        "length-spectrum",
        bench_path(),
        "--l-min",
        "8",
        "--l-max",
        "0.5",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("l_min"), "{stderr}");
}

#[test]
fn svg_plot_marks_every_detected_peak() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("plot.svg");
    let (code, stdout, _) = run(&[
        "reconstruct",
        bench_path(),
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let peaks = parse_json(&stdout)["peaks"].as_array().unwrap().len();

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
    assert_eq!(svg.matches("<circle").count(), peaks);
}

#[test]
fn thread_count_does_not_change_output_bytes() {
    let one = bin()
        .args(["reconstruct", bench_path()])
        .env("SPECTRAL_THREADS", "1")
        .output()
        .unwrap();
    let four = bin()
        .args(["reconstruct", bench_path()])
        .env("SPECTRAL_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn dimension_flag_constraints() {
    let (code, _, stderr) = run(&[
        "generate", "--a", "1", "--b", "1", "--c", "2", "--count", "20", "-o", "-",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--dim 3"), "{stderr}");

    let (code, _, stderr) = run(&[
        "generate", "--a", "1", "--b", "1", "--dim", "3", "--count", "20", "-o", "-",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--c"), "{stderr}");

    // clap rejects out-of-range dimensions on its own, also with code 2.
    let (code, _, _) = run(&[
        "generate", "--a", "1", "--b", "1", "--dim", "4", "--count", "20", "-o", "-",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn invalid_tuning_flags_are_rejected_upfront() {
    for args in [
        vec!["reconstruct", bench_path(), "--fit-start-fraction", "1.5"],
        vec!["reconstruct", bench_path(), "--steps", "10"],
        vec!["reconstruct", bench_path(), "--min-prominence", "2"],
        vec!["reconstruct", bench_path(), "--max-peaks", "0"],
        vec!["reconstruct", bench_path(), "--pair-tolerance", "0"],
        vec!["reconstruct", bench_path(), "--l-min", "-1"],
    ] {
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 2, "args {args:?} gave stderr {stderr}");
    }
}

#[test]
fn dash_reads_standard_input() {
    let text = std::fs::read_to_string(bench_file()).unwrap();
    let mut child = bin()
        .args(["reconstruct", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let report = parse_json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(report["status"], "ok");
}
