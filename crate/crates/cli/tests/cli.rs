use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wgft(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgft"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("failed to launch wgft")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const CONSTANT_WINDOW: &str = r#"
name = "tight"
laplacian = "unnormalized"

[graph]
source = "path"
size = 7

[signal]
kind = "random"
seed = 3

[windows]
kernel = "constant"
pairing = "same-as-analysis"
"#;

#[test]
fn eig_on_two_path() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("two.edges"), "1 2\n").unwrap();
    let out = wgft(
        &[
            "eig",
            "--graph",
            "two.edges",
            "--laplacian",
            "unnormalized",
            "--out",
            "eig",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let values: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 2);
    assert_eq!(values[0], 0.0);
    assert!((values[1] - 2.0).abs() < 1e-12);
    let csv = fs::read_to_string(dir.path().join("eig/eigenvalues.csv")).unwrap();
    assert!(csv.starts_with("mode,eigenvalue\n"));
}

#[test]
fn frame_bounds_of_flat_window_are_tight() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tight.toml"), CONSTANT_WINDOW).unwrap();
    let out = wgft(&["frame-bounds", "--config", "tight.toml"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let a: f64 = row[1].parse().unwrap();
    let b: f64 = row[2].parse().unwrap();
    assert!((a - 7.0).abs() < 1e-10 && (b - 7.0).abs() < 1e-10, "{text}");
}

#[test]
fn windows_check_flags_degenerate_family() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.toml"),
        r#"
name = "bad"
laplacian = "unnormalized"
[graph]
source = "path"
size = 4
[signal]
kind = "impulse"
vertex = 1
[windows]
kernel = "file"
path = "w.csv"
"#,
    )
    .unwrap();
    fs::write(
        dir.path().join("w.csv"),
        "mode,eigenvalue,g1_re,g1_im,gamma1_re,gamma1_im\n0,0,0,0,0,0\n1,0,1,0,0,0\n2,0,0,0,1,0\n3,0,0,0,0,0\n",
    )
    .unwrap();
    let out = wgft(
        &["windows-check", "--config", "bad.toml", "--out", "chk"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("satisfied = false"), "{text}");
    assert!(text.contains("failing_vertices = [1, 2, 3, 4]"), "{text}");
    assert!(dir.path().join("chk/denominators.csv").exists());

    let run = wgft(&["run", "--config", "bad.toml", "--out", "run"], dir.path());
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn run_preset_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = wgft(
        &["run", "--preset", "path-impulse", "--out", "a"],
        dir.path(),
    );
    let b = wgft(
        &["run", "--preset", "path-impulse", "--out", "b"],
        dir.path(),
    );
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(b.status.code(), Some(0));
    let sa = fs::read(dir.path().join("a/summary.toml")).unwrap();
    let sb = fs::read(dir.path().join("b/summary.toml")).unwrap();
    assert_eq!(sa, sb);
    for name in [
        "windows.csv",
        "coefficients.csv",
        "spectrogram_averaged.csv",
        "reconstructed.csv",
    ] {
        assert_eq!(
            fs::read(dir.path().join("a").join(name)).unwrap(),
            fs::read(dir.path().join("b").join(name)).unwrap(),
            "{name}"
        );
    }
    assert!(String::from_utf8_lossy(&sa).contains("passed = true"));
}

#[test]
fn analyze_then_synthesize() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let analyze = wgft(&["analyze", "--preset", "path-chirp", "--out", "x"], p);
    assert_eq!(
        analyze.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&analyze.stderr)
    );
    let synth = wgft(
        &[
            "synthesize",
            "--preset",
            "path-chirp",
            "--coefficients",
            "x/coefficients.csv",
            "--out",
            "x",
        ],
        p,
    );
    assert_eq!(
        synth.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&synth.stderr)
    );
    assert_eq!(
        fs::read_to_string(p.join("x/signal.csv"))
            .unwrap()
            .lines()
            .count(),
        fs::read_to_string(p.join("x/reconstructed.csv"))
            .unwrap()
            .lines()
            .count()
    );

    let sg = wgft(
        &[
            "spectrogram",
            "--coefficients",
            "x/coefficients.csv",
            "--out",
            "x",
        ],
        p,
    );
    assert_eq!(sg.status.code(), Some(0));
    assert!(p.join("x/spectrogram_averaged.pgm").exists());

    // Same graph under the other Laplacian: refused.
    let mismatch = wgft(
        &[
            "synthesize",
            "--preset",
            "path-chirp",
            "--laplacian",
            "unnormalized",
            "--coefficients",
            "x/coefficients.csv",
            "--out",
            "y",
        ],
        p,
    );
    assert_eq!(mismatch.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("different spectral basis"));
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = wgft(&["run", "--preset", "nope"], dir.path());
    assert_eq!(unknown.status.code(), Some(1));
    fs::write(dir.path().join("broken.toml"), "name = 3").unwrap();
    let broken = wgft(&["run", "--config", "broken.toml"], dir.path());
    assert_eq!(broken.status.code(), Some(1));
    fs::write(dir.path().join("split.edges"), "1 2\n3 4\n").unwrap();
    let disconnected = wgft(&["graph-info", "--graph", "split.edges"], dir.path());
    assert_eq!(disconnected.status.code(), Some(1));
    let usage = wgft(&["frobnicate"], dir.path());
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn seed_override_changes_random_runs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tight.toml"), CONSTANT_WINDOW).unwrap();
    let a = wgft(
        &["analyze", "--config", "tight.toml", "--out", "a"],
        dir.path(),
    );
    let b = wgft(
        &[
            "analyze",
            "--config",
            "tight.toml",
            "--seed",
            "99",
            "--out",
            "b",
        ],
        dir.path(),
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(
        fs::read(dir.path().join("a/signal.csv")).unwrap(),
        fs::read(dir.path().join("b/signal.csv")).unwrap()
    );
}
