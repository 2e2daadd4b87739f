//! CLI acceptance: deterministic output regardless of worker count.

use std::path::Path;
use std::process::Command;

fn run_preset(dir: &Path, workers: &str, seed: &str) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_gqsm"))
        .args([
            "--seed",
            seed,
            "--workers",
            workers,
            "--out",
            dir.to_str().unwrap(),
            "preset",
            "--name",
            "fig2",
            "--scale",
            "0.001",
        ])
        .status()
        .expect("failed to launch binary");
    assert!(status.success(), "preset run failed");
    std::fs::read(dir.join("fig2.csv")).expect("preset wrote no CSV")
}

/// Criterion 9: a preset re-run with the same seed is byte-identical for any
/// worker count.
#[test]
fn criterion_09_preset_csv_is_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let single = run_preset(&dir.path().join("w1"), "1", "42");
    let quad = run_preset(&dir.path().join("w4"), "4", "42");
    assert!(!single.is_empty());
    assert_eq!(single, quad, "CSV bytes differ between 1 and 4 workers");

    let repeat = run_preset(&dir.path().join("w4b"), "4", "42");
    assert_eq!(single, repeat, "CSV bytes differ between repeated runs");

    let other_seed = run_preset(&dir.path().join("seed"), "4", "43");
    assert_ne!(single, other_seed, "different seeds must change the data");
    println!("criterion 9 PASS: fig2 preset CSV is byte-identical for 1 and 4 workers");
}
