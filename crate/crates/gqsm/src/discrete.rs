//! Discrete-input AMI of a finite codebook.
//!
//! The estimator averages, over channel and noise realizations, the pairwise
//! log-sum of exp((-||H(x_i - x_j) + n||^2 + ||n||^2) / sigma_n^2). The inner
//! sums run in the log domain with max subtraction; naive exponentiation
//! overflows at high SNR.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex;
use rayon::prelude::*;

use crate::channel::{build_codeword, sample_channel, sample_noise, CMatrix, CVector};
use crate::config::{ChannelMode, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::{log_sum_exp, mean_and_stderr, sorted_sum};
use crate::pattern::ApSet;
use crate::rng::{derive_seed, substream, tag};

/// L-PSK constellation with unit average power: exp(j 2 pi (m + 1/2) / L).
pub fn psk_constellation(order: usize) -> Vec<Complex<f64>> {
    assert!(order >= 2, "PSK order must be at least 2");
    (0..order)
        .map(|m| {
            let angle = 2.0 * PI * (m as f64 + 0.5) / order as f64;
            Complex::new(angle.cos(), angle.sin())
        })
        .collect()
}

/// Finite codebook with uniform prior.
#[derive(Debug, Clone)]
pub struct Codebook {
    pub codewords: Vec<CVector>,
    /// log2 of the codebook size.
    pub rate_bits: f64,
}

impl Codebook {
    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn n_tx(&self) -> usize {
        self.codewords[0].len()
    }
}

/// Builds the Q * L^K codebook over all (pattern, symbol tuple) combinations,
/// power-normalized so the average codeword energy equals `config.sigma_s2`.
///
/// Symbol tuples iterate in row-major digit order (last symbol fastest).
/// Exact duplicate codewords signal a degenerate pattern/constellation
/// combination and are rejected.
pub fn build_codebook(
    config: &SystemConfig,
    ap_set: &ApSet,
    constellation: &[Complex<f64>],
) -> Result<Codebook> {
    config.validate()?;
    let l = constellation.len();
    if l < 2 {
        return Err(Error::InvalidConfig {
            field: "constellation_order",
            message: "need at least two constellation points".into(),
        });
    }
    let k = config.k;
    let tuples = l
        .checked_pow(k as u32)
        .ok_or(Error::InvalidConfig {
            field: "constellation_order",
            message: "L^K overflows".into(),
        })?;
    let m = ap_set.len() * tuples;

    let mut codewords = Vec::with_capacity(m);
    let mut s = CVector::zeros(k);
    for pattern in &ap_set.patterns {
        for t in 0..tuples {
            let mut rem = t;
            for col in (0..k).rev() {
                s[col] = constellation[rem % l];
                rem /= l;
            }
            codewords.push(build_codeword(pattern, &s)?);
        }
    }

    let mean_power: f64 = codewords.iter().map(|x| x.norm_squared()).sum::<f64>() / m as f64;
    if mean_power <= 0.0 {
        return Err(Error::InvalidConfig {
            field: "constellation_order",
            message: "all-zero codebook".into(),
        });
    }
    let scale = Complex::new((config.sigma_s2 / mean_power).sqrt(), 0.0);
    for x in &mut codewords {
        *x *= scale;
    }

    for i in 0..m {
        for j in i + 1..m {
            if codewords[i] == codewords[j] {
                return Err(Error::DuplicateCodeword { first: i, second: j });
            }
        }
    }

    Ok(Codebook {
        codewords,
        rate_bits: (m as f64).log2(),
    })
}

/// Discrete AMI estimate in bits.
#[derive(Debug, Clone)]
pub struct DiscreteAmiEstimate {
    /// Estimate clamped to [0, log2 M].
    pub ami_bits: f64,
    /// Unclamped Monte Carlo mean.
    pub raw_bits: f64,
    pub stderr_bits: f64,
    pub m: usize,
    pub n_outer: usize,
}

fn ami_discrete_impl(
    codebook: &Codebook,
    fixed_channel: Option<&CMatrix>,
    n_rx: usize,
    sigma_n2: f64,
    n_outer: usize,
    master_seed: u64,
) -> DiscreteAmiEstimate {
    assert!(n_outer >= 1);
    assert!(sigma_n2 > 0.0);
    let m = codebook.size();
    let base = derive_seed(master_seed, &[tag::DISCRETE]);

    // Per-realization mean of log2 sum_j exp(eta[i, j]); the i-loop runs in
    // full (exact inner average), and both the j log-sum and the i mean use
    // order-invariant reductions so codebook permutations are bit-neutral.
    let values: Vec<f64> = (0..n_outer)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(base, t as u64);
            let h = match fixed_channel {
                Some(h) => h.clone(),
                None => sample_channel(&mut rng, n_rx, codebook.n_tx(), ChannelMode::Rayleigh).h,
            };
            let noise = sample_noise(&mut rng, n_rx, sigma_n2);
            let hx: Vec<CVector> = codebook.codewords.iter().map(|x| &h * x).collect();
            let noise_energy: f64 = (0..n_rx).map(|r| noise[r].norm_sqr()).sum();

            let mut eta = vec![0.0f64; m];
            let per_i: Vec<f64> = (0..m)
                .map(|i| {
                    for (j, eta_j) in eta.iter_mut().enumerate() {
                        let mut d2 = 0.0;
                        for r in 0..n_rx {
                            let d = hx[i][r] - hx[j][r] + noise[r];
                            d2 += d.norm_sqr();
                        }
                        *eta_j = (noise_energy - d2) / sigma_n2;
                    }
                    log_sum_exp(&eta) / LN_2
                })
                .collect();
            sorted_sum(&per_i) / m as f64
        })
        .collect();

    let (mean_loss, stderr) = mean_and_stderr(&values);
    let raw_bits = codebook.rate_bits - mean_loss;
    DiscreteAmiEstimate {
        ami_bits: raw_bits.clamp(0.0, codebook.rate_bits),
        raw_bits,
        stderr_bits: stderr,
        m,
        n_outer,
    }
}

/// Monte Carlo discrete AMI over Rayleigh channel and noise realizations.
pub fn ami_discrete(
    codebook: &Codebook,
    n_rx: usize,
    sigma_n2: f64,
    n_outer: usize,
    master_seed: u64,
) -> DiscreteAmiEstimate {
    ami_discrete_impl(codebook, None, n_rx, sigma_n2, n_outer, master_seed)
}

/// Discrete AMI with a fixed channel matrix (noise still drawn per
/// realization). Useful for AWGN-style reference checks.
pub fn ami_discrete_fixed(
    codebook: &Codebook,
    h: &CMatrix,
    sigma_n2: f64,
    n_outer: usize,
    master_seed: u64,
) -> DiscreteAmiEstimate {
    ami_discrete_impl(codebook, Some(h), h.nrows(), sigma_n2, n_outer, master_seed)
}
