//! Canned experiments. Each preset sweeps SNR and writes one CSV in the
//! shared ResultRow schema:
//!
//! * fig1 — Monte Carlo vs closed-form symbol AMI on the fixed (2,2,1) link,
//!   one curve per inner sample size plus the closed-form reference.
//! * fig2 — SM vs QSM at (4,4,1,16), continuous I_s/I_A/total plus the QPSK
//!   discrete curve.
//! * fig3 — GSM (Q=6) vs GQSM (Q=36) at (4,4,2), plus discrete GQSM QPSK.
//! * fig4 — GQSM (8,8,3,64) under the three pattern designs.
//! * fig5 — pairwise AMI differences between those designs (common random
//!   numbers per SNR point).
//!
//! `scale` multiplies the full-size 10^6 outer realizations; discrete curves
//! run at a tenth of that (their per-realization cost is O(M^2)). Wall times
//! are written as 0.0 unless `--timing` is set, so a preset re-run with the
//! same seed is byte-identical for any worker count.

use std::path::{Path, PathBuf};
use std::time::Instant;

use gqsm::rng::derive_seed;
use gqsm::{
    ami_continuous, ami_discrete, build_codebook, build_design, divergence_experiment,
    psk_constellation, AmiEstimate, DensityMethod, DesignMethod, Scheme, SystemConfig,
};

use crate::csvio::{render_csv, ResultRow};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl std::str::FromStr for PresetName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" => Ok(PresetName::Fig1),
            "fig2" => Ok(PresetName::Fig2),
            "fig3" => Ok(PresetName::Fig3),
            "fig4" => Ok(PresetName::Fig4),
            "fig5" => Ok(PresetName::Fig5),
            other => Err(format!("unknown preset '{other}' (expected fig1..fig5)")),
        }
    }
}

impl PresetName {
    fn file_name(self) -> &'static str {
        match self {
            PresetName::Fig1 => "fig1.csv",
            PresetName::Fig2 => "fig2.csv",
            PresetName::Fig3 => "fig3.csv",
            PresetName::Fig4 => "fig4.csv",
            PresetName::Fig5 => "fig5.csv",
        }
    }
}

struct Sizes {
    n_outer: usize,
    n_outer_discrete: usize,
}

fn sizes(scale: f64) -> Result<Sizes, CliError> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(CliError::Config(format!("scale {scale} must lie in (0, 1]")));
    }
    let n_outer = ((1e6 * scale).round() as usize).max(100);
    Ok(Sizes {
        n_outer,
        n_outer_discrete: (n_outer / 10).max(100),
    })
}

fn snr_grid(stop: i32) -> Vec<f64> {
    (0..=stop / 5).map(|i| (i * 5) as f64).collect()
}

fn continuous_rows(
    experiment: &str,
    config_base: &SystemConfig,
    design: DesignMethod,
    snrs: &[f64],
    rows: &mut Vec<ResultRow>,
) -> Result<Vec<AmiEstimate>, CliError> {
    let ap_set = build_design(config_base, design)?;
    let mut estimates = Vec::new();
    for &snr_db in snrs {
        let config = config_base.clone().with_snr_db(snr_db);
        let est = ami_continuous(&config, &ap_set, DensityMethod::ClosedForm)?;
        rows.push(ResultRow::from_continuous(experiment, &config, design, snr_db, &est));
        estimates.push(est);
    }
    Ok(estimates)
}

fn discrete_rows(
    experiment: &str,
    config_base: &SystemConfig,
    design: DesignMethod,
    order: usize,
    snrs: &[f64],
    rows: &mut Vec<ResultRow>,
) -> Result<(), CliError> {
    let mut config = config_base.clone();
    config.constellation_order = Some(order);
    let ap_set = build_design(&config, design)?;
    let codebook = build_codebook(&config, &ap_set, &psk_constellation(order))?;
    for &snr_db in snrs {
        let sigma_n2 = config.sigma_s2 / 10f64.powf(snr_db / 10.0);
        let est = ami_discrete(&codebook, config.n_rx, sigma_n2, config.n_outer, config.master_seed);
        rows.push(ResultRow::from_discrete(experiment, &config, design, snr_db, &est));
    }
    Ok(())
}

fn fig1_rows(seed: u64, n_outer: usize) -> Result<Vec<ResultRow>, CliError> {
    let config = SystemConfig::new(Scheme::Qsm, 2, 2, 1, 4)
        .with_n_outer(n_outer)
        .with_seed(seed);
    let n_inners = [10usize, 100, 1_000, 10_000];
    let snrs = snr_grid(50);
    let table = divergence_experiment(&config, &n_inners, &snrs)?;
    let mut rows = Vec::new();
    let mut closed_done = std::collections::HashSet::new();
    for cell in &table {
        rows.push(ResultRow {
            experiment_id: "fig1".into(),
            scheme: "qsm".into(),
            design_method: "explicit".into(),
            snr_db: cell.snr_db,
            i_s: Some(cell.i_s_mc),
            i_a: None,
            i_total: cell.i_s_mc,
            stderr: cell.i_s_mc_stderr,
            n_outer: n_outer as u64,
            n_inner: cell.n_inner as u64,
            density_method: "mc".into(),
            wall_time_s: 0.0,
            seed,
        });
        if closed_done.insert(cell.snr_db.to_bits()) {
            rows.push(ResultRow {
                experiment_id: "fig1".into(),
                scheme: "qsm".into(),
                design_method: "explicit".into(),
                snr_db: cell.snr_db,
                i_s: Some(cell.i_s_closed),
                i_a: None,
                i_total: cell.i_s_closed,
                stderr: cell.i_s_closed_stderr,
                n_outer: n_outer as u64,
                n_inner: 0,
                density_method: "closed".into(),
                wall_time_s: 0.0,
                seed,
            });
        }
    }
    Ok(rows)
}

/// Shared fig4/fig5 computation: estimates per (design, SNR) with common
/// random numbers across designs at each SNR point.
fn design_comparison(
    experiment: &str,
    seed: u64,
    n_outer: usize,
    rows: &mut Vec<ResultRow>,
    emit_curves: bool,
) -> Result<(), CliError> {
    let designs = [
        DesignMethod::Combinatorial,
        DesignMethod::Equiprobable,
        DesignMethod::Ilp,
    ];
    let snrs = snr_grid(30);
    let mut estimates: Vec<Vec<AmiEstimate>> = Vec::new();
    for &design in &designs {
        let base = SystemConfig::new(Scheme::Gqsm, 8, 8, 3, 64).with_n_outer(n_outer);
        let ap_set = build_design(&base, design)?;
        let mut per_snr = Vec::new();
        for (snr_idx, &snr_db) in snrs.iter().enumerate() {
            let config = base
                .clone()
                .with_snr_db(snr_db)
                .with_seed(derive_seed(seed, &[snr_idx as u64]));
            let est = ami_continuous(&config, &ap_set, DensityMethod::ClosedForm)?;
            if emit_curves {
                rows.push(ResultRow::from_continuous(experiment, &config, design, snr_db, &est));
            }
            per_snr.push(est);
        }
        estimates.push(per_snr);
    }
    if !emit_curves {
        // fig5: pairwise differences, labeled "<a>-<b>" meaning AMI(a) - AMI(b).
        let pairs = [(2usize, 0usize, "ilp-comb"), (1, 0, "equiprob-comb"), (2, 1, "ilp-equiprob")];
        for (snr_idx, &snr_db) in snrs.iter().enumerate() {
            for &(a, b, label) in &pairs {
                let ea = &estimates[a][snr_idx];
                let eb = &estimates[b][snr_idx];
                rows.push(ResultRow {
                    experiment_id: experiment.into(),
                    scheme: "gqsm".into(),
                    design_method: label.into(),
                    snr_db,
                    i_s: Some(ea.i_s_bits - eb.i_s_bits),
                    i_a: Some(ea.i_a_bits - eb.i_a_bits),
                    i_total: ea.i_total_bits - eb.i_total_bits,
                    stderr: (ea.stderr_bits.powi(2) + eb.stderr_bits.powi(2)).sqrt(),
                    n_outer: n_outer as u64,
                    n_inner: 0,
                    density_method: "closed".into(),
                    wall_time_s: 0.0,
                    seed,
                });
            }
        }
    }
    Ok(())
}

pub fn run_preset(
    name: PresetName,
    scale: f64,
    seed: u64,
    out_dir: &Path,
    timing: bool,
) -> Result<Vec<PathBuf>, CliError> {
    let sizes = sizes(scale)?;
    let started = Instant::now();
    let mut rows = Vec::new();

    match name {
        PresetName::Fig1 => {
            rows = fig1_rows(seed, sizes.n_outer)?;
        }
        PresetName::Fig2 => {
            let snrs = snr_grid(40);
            let sm = SystemConfig::new(Scheme::Sm, 4, 4, 1, 4)
                .with_n_outer(sizes.n_outer)
                .with_seed(seed);
            continuous_rows("fig2", &sm, DesignMethod::Combinatorial, &snrs, &mut rows)?;
            let qsm = SystemConfig::new(Scheme::Qsm, 4, 4, 1, 16)
                .with_n_outer(sizes.n_outer)
                .with_seed(seed);
            continuous_rows("fig2", &qsm, DesignMethod::Combinatorial, &snrs, &mut rows)?;
            let qsm_discrete = qsm.clone().with_n_outer(sizes.n_outer_discrete);
            discrete_rows("fig2", &qsm_discrete, DesignMethod::Combinatorial, 4, &snrs, &mut rows)?;
        }
        PresetName::Fig3 => {
            let snrs = snr_grid(40);
            let gsm = SystemConfig::new(Scheme::Gsm, 4, 4, 2, 6)
                .with_n_outer(sizes.n_outer)
                .with_seed(seed);
            continuous_rows("fig3", &gsm, DesignMethod::Combinatorial, &snrs, &mut rows)?;
            let gqsm = SystemConfig::new(Scheme::Gqsm, 4, 4, 2, 36)
                .with_n_outer(sizes.n_outer)
                .with_seed(seed);
            continuous_rows("fig3", &gqsm, DesignMethod::Combinatorial, &snrs, &mut rows)?;
            let gqsm_discrete = gqsm.clone().with_n_outer(sizes.n_outer_discrete);
            discrete_rows("fig3", &gqsm_discrete, DesignMethod::Combinatorial, 4, &snrs, &mut rows)?;
        }
        PresetName::Fig4 => {
            design_comparison("fig4", seed, sizes.n_outer, &mut rows, true)?;
        }
        PresetName::Fig5 => {
            design_comparison("fig5", seed, sizes.n_outer, &mut rows, false)?;
        }
    }

    if timing {
        let elapsed = started.elapsed().as_secs_f64();
        for row in &mut rows {
            row.wall_time_s = elapsed;
        }
    }
    for row in &rows {
        if !row.is_finite() {
            return Err(CliError::Numerical(format!(
                "non-finite estimate in {} at snr_db = {}",
                row.experiment_id, row.snr_db
            )));
        }
    }

    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name.file_name());
    std::fs::write(&path, render_csv(&rows))?;
    Ok(vec![path])
}
