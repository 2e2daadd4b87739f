//! Continuous-input AMI, decomposed into symbol and activation-pattern parts.
//!
//! Per outer realization: draw a pattern uniformly, Gaussian symbols, channel
//! and noise, form y, then evaluate ln p(y | A_i, H) for every pattern in the
//! set. The symbol part is
//!     I_s = E[-log2 p(y | A, H)] - N_r log2(pi e sigma_n^2)
//! and the pattern part
//!     I_A = log2 Q - E[log2 (sum_i p(y | A_i, H) / p(y | A, H))],
//! with the sum taken in the log domain. The outer expectation is always
//! Monte Carlo; only the inner symbol expectation has a closed form.

use std::f64::consts::{E, LN_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::{build_codeword, complex_normal, received_signal, sample_channel, sample_noise, sample_symbols};
use crate::config::SystemConfig;
use crate::density::{log_density_closed, log_density_k1_explicit, log_density_mc};
use crate::error::{Error, Result};
use crate::numerics::{log_sum_exp, mean_and_stderr};
use crate::pattern::{validate_scheme, ApSet};
use crate::rng::{derive_seed, substream, tag};

/// How ln p(y | A, H) is evaluated inside the outer loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    ClosedForm,
    InnerMc,
    K1Explicit,
}

impl DensityMethod {
    pub fn name(self) -> &'static str {
        match self {
            DensityMethod::ClosedForm => "closed",
            DensityMethod::InnerMc => "mc",
            DensityMethod::K1Explicit => "k1",
        }
    }
}

impl std::str::FromStr for DensityMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "closed" => Ok(DensityMethod::ClosedForm),
            "mc" => Ok(DensityMethod::InnerMc),
            "k1" => Ok(DensityMethod::K1Explicit),
            other => Err(format!("unknown density method '{other}'")),
        }
    }
}

/// Continuous AMI estimate in bits; `i_total_bits = i_s_bits + i_a_bits`.
#[derive(Debug, Clone)]
pub struct AmiEstimate {
    pub i_s_bits: f64,
    pub i_a_bits: f64,
    pub i_total_bits: f64,
    /// Standard error of the total.
    pub stderr_bits: f64,
    pub i_s_stderr_bits: f64,
    pub i_a_stderr_bits: f64,
    pub n_outer: usize,
    /// Inner sample size; zero for closed-form evaluators.
    pub n_inner: usize,
    pub density_method: DensityMethod,
}

/// Per-realization (i_s, i_a) contributions in bits for a given draw.
///
/// `drawn` is the index of the transmitted pattern inside `log_densities`,
/// which holds ln p(y | A_i, H) for every pattern of the set. Exposed so the
/// label-invariance of the estimator can be checked directly.
pub fn realization_terms(log_densities: &[f64], drawn: usize, n_rx: usize, sigma_n2: f64) -> (f64, f64) {
    let q = log_densities.len();
    let i_s = -log_densities[drawn] / LN_2 - n_rx as f64 * (PI * E * sigma_n2).log2();
    let i_a = (q as f64).log2() - (log_sum_exp(log_densities) - log_densities[drawn]) / LN_2;
    (i_s, i_a)
}

/// Monte Carlo estimate of I = I_s + I_A for the configured scheme.
pub fn ami_continuous(config: &SystemConfig, ap_set: &ApSet, method: DensityMethod) -> Result<AmiEstimate> {
    validate_scheme(config, ap_set)?;
    if method == DensityMethod::K1Explicit && config.k != 1 {
        return Err(Error::DimensionMismatch(
            "k1 density method requires k = 1".into(),
        ));
    }
    let q = ap_set.len();
    let n_rx = config.n_rx;
    let sigma_eff = config.effective_sigma_s2();
    let sigma_n2 = config.sigma_n2();
    let per_symbol_var = sigma_eff / config.k as f64;
    let outer_seed = derive_seed(config.master_seed, &[tag::OUTER]);
    let inner_seed = derive_seed(config.master_seed, &[tag::INNER]);

    let terms: Vec<(f64, f64)> = (0..config.n_outer)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64)> {
            let mut rng = substream(outer_seed, t as u64);
            let drawn = rng.random_range(0..q);
            let s = sample_symbols(&mut rng, config.k, per_symbol_var);
            let channel = sample_channel(&mut rng, n_rx, config.n_tx, config.channel_mode);
            let noise = sample_noise(&mut rng, n_rx, sigma_n2);
            let x = build_codeword(&ap_set.patterns[drawn], &s)?;
            let y = received_signal(&channel.h, &x, &noise)?;

            let mut log_densities = Vec::with_capacity(q);
            for (i, pattern) in ap_set.patterns.iter().enumerate() {
                let lp = match method {
                    DensityMethod::ClosedForm => {
                        log_density_closed(&y, pattern, &channel.h, sigma_eff, sigma_n2)?
                    }
                    DensityMethod::K1Explicit => {
                        log_density_k1_explicit(&y, pattern, &channel.h, sigma_eff, sigma_n2)?
                    }
                    DensityMethod::InnerMc => {
                        let mut inner = substream(derive_seed(inner_seed, &[t as u64]), i as u64);
                        log_density_mc(
                            &y,
                            pattern,
                            &channel.h,
                            sigma_eff,
                            sigma_n2,
                            config.n_inner,
                            &mut inner,
                        )
                        .log_density
                    }
                };
                log_densities.push(lp);
            }
            Ok(realization_terms(&log_densities, drawn, n_rx, sigma_n2))
        })
        .collect::<Result<Vec<_>>>()?;

    let i_s: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let i_a: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let totals: Vec<f64> = terms.iter().map(|t| t.0 + t.1).collect();
    let (i_s_bits, i_s_stderr) = mean_and_stderr(&i_s);
    let (i_a_bits, i_a_stderr) = mean_and_stderr(&i_a);
    let (_, total_stderr) = mean_and_stderr(&totals);

    Ok(AmiEstimate {
        i_s_bits,
        i_a_bits,
        i_total_bits: i_s_bits + i_a_bits,
        stderr_bits: total_stderr,
        i_s_stderr_bits: i_s_stderr,
        i_a_stderr_bits: i_a_stderr,
        n_outer: config.n_outer,
        n_inner: if method == DensityMethod::InnerMc {
            config.n_inner
        } else {
            0
        },
        density_method: method,
    })
}

/// Ergodic-capacity estimate in bits.
#[derive(Debug, Clone, Copy)]
pub struct CapacityEstimate {
    pub bits: f64,
    pub stderr_bits: f64,
}

/// Monte Carlo ergodic capacity of a k x n_rx MIMO link with i.i.d. CN(0,1)
/// fading: E[log2 det(I + rho/k * H_a H_a^H)].
pub fn mimo_ergodic_capacity(
    k: usize,
    n_rx: usize,
    snr_db: f64,
    n_trials: usize,
    master_seed: u64,
) -> CapacityEstimate {
    assert!(k >= 1 && n_rx >= 1 && n_trials >= 1);
    let scale = 10f64.powf(snr_db / 10.0) / k as f64;
    let base = derive_seed(master_seed, &[tag::CAPACITY]);

    let values: Vec<f64> = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(base, t as u64);
            let h = DMatrix::from_fn(n_rx, k, |_, _| complex_normal(&mut rng, 1.0));
            // det(I_{N_r} + c H H^H) = det(I_k + c H^H H); factor the k x k side.
            let mut gram = h.ad_mul(&h) * Complex::new(scale, 0.0);
            for d in 0..k {
                gram[(d, d)] += Complex::new(1.0, 0.0);
            }
            let chol = nalgebra::Cholesky::new(gram)
                .expect("I + c H^H H is Hermitian positive definite");
            let half_ln_det: f64 = chol.l().diagonal().iter().map(|d| d.norm().ln()).sum();
            2.0 * half_ln_det / LN_2
        })
        .collect();

    let (bits, stderr_bits) = mean_and_stderr(&values);
    CapacityEstimate { bits, stderr_bits }
}
