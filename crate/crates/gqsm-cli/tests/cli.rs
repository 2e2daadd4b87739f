//! End-to-end CLI behavior: exit codes, file outputs, and round trips.

use std::path::Path;
use std::process::{Command, Output};

fn gqsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqsm"))
        .args(args)
        .output()
        .expect("failed to launch binary")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn ami_continuous_writes_schema_complete_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let result = gqsm(&[
        "--seed", "7", "--out", out.to_str().unwrap(),
        "ami-continuous", "--scheme", "qsm", "--ntx", "2", "--nrx", "2", "--k", "1", "--q", "4",
        "--snr", "0,10", "--n-outer", "200",
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = read(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment_id,scheme,design_method,snr_db,i_s,i_a,i_total,stderr,n_outer,n_inner,density_method,wall_time_s,seed"
    );
    assert_eq!(lines.count(), 2);
    assert!(text.contains("ami-continuous,qsm,comb,0,"));
}

#[test]
fn bad_configuration_exits_with_code_2() {
    let result = gqsm(&[
        "ami-continuous", "--scheme", "qsm", "--ntx", "2", "--nrx", "2", "--k", "2", "--q", "4",
    ]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("k = 1"), "stderr: {stderr}");
}

#[test]
fn config_file_validation_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "scheme = gqsm\nn_tx = 2\nn_rx = 2\nk = 3\nq = 4\n").unwrap();
    let result = gqsm(&["--config", cfg.to_str().unwrap(), "ami-continuous"]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains('k'), "stderr must name the field: {stderr}");
}

#[test]
fn missing_input_file_exits_with_code_4() {
    let result = gqsm(&["plot", "--csv", "/nonexistent/x.csv", "--out", "/tmp/x.svg"]);
    assert_eq!(result.status.code(), Some(4));
}

#[test]
fn ap_design_emits_stats_and_pattern_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("aps.txt");
    let result = gqsm(&[
        "--out", out.to_str().unwrap(),
        "ap-design", "--method", "ilp", "--ntx", "8", "--k", "3", "--qpart", "8",
    ]);
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("spread (max - min): 0"), "stdout: {stdout}");
    let text = read(&out);
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().all(|l| l.starts_with("R:{") && l.contains("I:{")));
}

#[test]
fn designed_pattern_file_round_trips_into_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let aps = dir.path().join("aps.txt");
    let design = gqsm(&[
        "--out", aps.to_str().unwrap(),
        "ap-design", "--method", "comb", "--ntx", "4", "--k", "1", "--qpart", "4", "--product",
    ]);
    assert!(design.status.success());
    assert_eq!(read(&aps).lines().count(), 16);

    let out = dir.path().join("sweep.csv");
    let sweep = gqsm(&[
        "--out", out.to_str().unwrap(),
        "ami-continuous", "--scheme", "qsm", "--ntx", "4", "--nrx", "4", "--k", "1", "--q", "16",
        "--snr", "10", "--n-outer", "200", "--ap-file", aps.to_str().unwrap(),
    ]);
    assert!(sweep.status.success(), "{}", String::from_utf8_lossy(&sweep.stderr));
    assert!(read(&out).contains("ami-continuous,qsm,explicit,10,"));
}

#[test]
fn mc_error_emits_the_divergence_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gap.csv");
    let result = gqsm(&[
        "--seed", "3", "--out", out.to_str().unwrap(),
        "mc-error", "--n-inner-list", "10,100", "--snr", "0,20", "--n-outer", "300",
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = read(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "snr_db,n_inner,i_s_mc,i_s_closed,gap");
    assert_eq!(lines.count(), 4);
}

#[test]
fn discrete_sweep_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disc.csv");
    let result = gqsm(&[
        "--out", out.to_str().unwrap(),
        "ami-discrete", "--scheme", "qsm", "--ntx", "4", "--nrx", "4", "--k", "1", "--q", "16",
        "--constellation-order", "4", "--snr", "0,30", "--n-outer", "100",
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = read(&out);
    assert!(text.contains(",discrete,"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn plot_renders_fig2_preset_with_expected_curves() {
    let dir = tempfile::tempdir().unwrap();
    let preset = gqsm(&[
        "--seed", "5", "--out", dir.path().to_str().unwrap(),
        "preset", "--name", "fig2", "--scale", "0.0002",
    ]);
    assert!(preset.status.success(), "{}", String::from_utf8_lossy(&preset.stderr));
    let csv = dir.path().join("fig2.csv");
    let svg_path = dir.path().join("fig2.svg");
    let plot = gqsm(&[
        "--out", svg_path.to_str().unwrap(),
        "plot", "--csv", csv.to_str().unwrap(),
    ]);
    assert!(plot.status.success(), "{}", String::from_utf8_lossy(&plot.stderr));
    let svg = read(&svg_path);
    // SM and QSM each contribute total + I_s + I_A polylines; the discrete
    // run adds a lone total curve.
    assert_eq!(svg.matches("<polyline").count(), 7);
    assert!(svg.contains("SNR (dB)") && svg.contains("AMI (bits)"));
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let result = gqsm(&["preset", "--name", "fig9"]);
    assert_eq!(result.status.code(), Some(2));
}
