//! Error model for Monte Carlo evaluation of the log conditional density.
//!
//! The simplified model replaces the inner sum with
//!     Y = -log2(sum_i exp(-X_i^2)),   X_i ~ N(0, sigma_x^2) i.i.d.,
//! whose behavior is governed by X_min^2 = min_i X_i^2 through
//!     X_min^2 / ln 2 - log2 N <= Y <= X_min^2 / ln 2.
//! E[X_min^2] = sigma_x^2 g(N) with g the second moment of the minimum of N
//! unit half-Gaussians, so the bias of the Monte Carlo estimate grows
//! linearly in sigma_x^2, i.e. exponentially in SNR expressed in dB.
//!
//! `divergence_experiment` demonstrates the same effect on the real system by
//! evaluating the symbol AMI with both the Monte Carlo and the closed-form
//! density on shared channel realizations.

use std::f64::consts::{E, LN_2, PI, SQRT_2};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{build_codeword, received_signal, sample_channel, sample_noise, sample_symbols};
use crate::config::SystemConfig;
use crate::density::{log_density_closed, log_density_mc};
use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, log_sum_exp, mean_and_stderr};
use crate::pattern::{ActivationPattern, SinglePartPattern};
use crate::rng::{derive_seed, substream, tag};

/// g(N) = E[T_min^2] for the minimum of N i.i.d. unit half-Gaussians.
///
/// Integrated by parts to avoid differentiating the CDF power:
/// g(N) = integral over [0, inf) of 2 t (1 - Phi(t))^N dt, where
/// 1 - Phi(t) = erfc(t / sqrt(2)); the complementary error function comes
/// from `statrs::function::erf::erfc`. The tail is truncated once
/// (1 - Phi(t))^N drops below 1e-20 and the quadrature runs at an absolute
/// tolerance of 1e-12.
pub fn g_of_n(n: u64) -> f64 {
    assert!(n >= 1);
    let power = n as f64;
    let survival = |t: f64| statrs::function::erf::erfc(t / SQRT_2).powf(power);
    let mut t_max = 1.0;
    while survival(t_max) > 1e-20 && t_max < 60.0 {
        t_max *= 1.5;
    }
    adaptive_simpson(&|t| 2.0 * t * survival(t), 0.0, t_max, 1e-12)
}

/// One draw of the simplified error model.
#[derive(Debug, Clone, Copy)]
pub struct ErrorModelSample {
    /// Y in bits.
    pub y_value: f64,
    pub x_min_sq: f64,
    pub n_samples: usize,
    pub sigma_x2: f64,
}

/// Draws X_1..X_N and evaluates Y through log-sum-exp.
pub fn sample_error_model(n: usize, sigma_x: f64, rng: &mut impl Rng) -> ErrorModelSample {
    assert!(n >= 1);
    assert!(sigma_x > 0.0);
    let mut neg_squares = Vec::with_capacity(n);
    let mut x_min_sq = f64::INFINITY;
    for _ in 0..n {
        let x: f64 = rng.sample::<f64, _>(StandardNormal) * sigma_x;
        let sq = x * x;
        x_min_sq = x_min_sq.min(sq);
        neg_squares.push(-sq);
    }
    ErrorModelSample {
        y_value: -log_sum_exp(&neg_squares) / LN_2,
        x_min_sq,
        n_samples: n,
        sigma_x2: sigma_x * sigma_x,
    }
}

/// One (SNR, N) cell of the divergence table.
#[derive(Debug, Clone, Copy)]
pub struct DivergenceRow {
    pub snr_db: f64,
    pub n_inner: usize,
    pub i_s_mc: f64,
    pub i_s_mc_stderr: f64,
    pub i_s_closed: f64,
    pub i_s_closed_stderr: f64,
    /// i_s_mc - i_s_closed.
    pub gap: f64,
}

/// Symbol-AMI estimates over an SNR grid for several inner sample sizes, with
/// the closed form evaluated on the same outer realizations.
///
/// Requires the (n_tx, n_rx, k) = (2, 2, 1) setup with the fixed pattern pair
/// A_R = [0 1]^T, A_I = [1 0]^T.
pub fn divergence_experiment(
    config: &SystemConfig,
    n_inner_list: &[usize],
    snr_list: &[f64],
) -> Result<Vec<DivergenceRow>> {
    if (config.n_tx, config.n_rx, config.k) != (2, 2, 1) {
        return Err(Error::InvalidConfig {
            field: "n_tx",
            message: "divergence experiment is defined for the (2, 2, 1) setup".into(),
        });
    }
    let pattern = ActivationPattern::new(
        SinglePartPattern::new(2, vec![1])?,
        SinglePartPattern::new(2, vec![0])?,
    )?;
    let sigma_eff = config.effective_sigma_s2();
    let entropy_term = |sigma_n2: f64| config.n_rx as f64 * (PI * E * sigma_n2).log2();

    let mut rows = Vec::new();
    for (snr_idx, &snr_db) in snr_list.iter().enumerate() {
        let sigma_n2 = config.sigma_s2 / 10f64.powf(snr_db / 10.0);
        let outer_seed = derive_seed(config.master_seed, &[tag::OUTER, snr_idx as u64]);

        // (closed, mc per N) for each realization; the same (y, H) feeds every
        // inner sample size so gaps across N are directly comparable.
        let per_t: Vec<(f64, Vec<f64>)> = (0..config.n_outer)
            .into_par_iter()
            .map(|t| -> Result<(f64, Vec<f64>)> {
                let mut rng = substream(outer_seed, t as u64);
                let s = sample_symbols(&mut rng, 1, sigma_eff);
                let channel = sample_channel(&mut rng, 2, 2, config.channel_mode);
                let noise = sample_noise(&mut rng, 2, sigma_n2);
                let x = build_codeword(&pattern, &s)?;
                let y = received_signal(&channel.h, &x, &noise)?;
                let closed = -log_density_closed(&y, &pattern, &channel.h, sigma_eff, sigma_n2)? / LN_2;
                let mc: Vec<f64> = n_inner_list
                    .iter()
                    .map(|&n_inner| {
                        let inner_seed =
                            derive_seed(config.master_seed, &[tag::INNER, snr_idx as u64, n_inner as u64]);
                        let mut inner = substream(inner_seed, t as u64);
                        -log_density_mc(&y, &pattern, &channel.h, sigma_eff, sigma_n2, n_inner, &mut inner)
                            .log_density
                            / LN_2
                    })
                    .collect();
                Ok((closed, mc))
            })
            .collect::<Result<Vec<_>>>()?;

        let closed_vals: Vec<f64> = per_t.iter().map(|r| r.0).collect();
        let (closed_mean, closed_se) = mean_and_stderr(&closed_vals);
        let i_s_closed = closed_mean - entropy_term(sigma_n2);
        for (n_idx, &n_inner) in n_inner_list.iter().enumerate() {
            let mc_vals: Vec<f64> = per_t.iter().map(|r| r.1[n_idx]).collect();
            let (mc_mean, mc_se) = mean_and_stderr(&mc_vals);
            let i_s_mc = mc_mean - entropy_term(sigma_n2);
            rows.push(DivergenceRow {
                snr_db,
                n_inner,
                i_s_mc,
                i_s_mc_stderr: mc_se,
                i_s_closed,
                i_s_closed_stderr: closed_se,
                gap: i_s_mc - i_s_closed,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scheme;
    use approx::assert_abs_diff_eq;

    #[test]
    fn g_of_one_is_the_half_gaussian_second_moment() {
        assert_abs_diff_eq!(g_of_n(1), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn g_decreases_with_n() {
        let g1 = g_of_n(1);
        let g2 = g_of_n(2);
        let g10 = g_of_n(10);
        assert!(g10 < g2 && g2 < g1, "g(10)={g10}, g(2)={g2}, g(1)={g1}");
    }

    #[test]
    fn g_matches_order_statistic_simulation() {
        let draws = 300_000;
        for n in [2usize, 5, 10] {
            let mut rng = substream(41, n as u64);
            let mut mins = Vec::with_capacity(draws);
            for _ in 0..draws {
                let m = (0..n)
                    .map(|_| {
                        let x: f64 = rng.sample(StandardNormal);
                        x * x
                    })
                    .fold(f64::INFINITY, f64::min);
                mins.push(m);
            }
            let (mean, se) = mean_and_stderr(&mins);
            let g = g_of_n(n as u64);
            assert!(
                (mean - g).abs() <= 3.0 * se,
                "n={n}: sim {mean} +- {se}, quadrature {g}"
            );
        }
    }

    #[test]
    fn single_sample_y_is_x_squared_over_ln2() {
        let mut rng = substream(4, 0);
        let sample = sample_error_model(1, 3.0, &mut rng);
        assert_abs_diff_eq!(sample.y_value, sample.x_min_sq / LN_2, epsilon = 1e-12);
    }

    #[test]
    fn sandwich_inequality_holds_per_sample() {
        let mut rng = substream(8, 0);
        for &(n, sigma) in &[(1usize, 1.0), (10, 1.0), (100, 10.0), (10, 100.0)] {
            for _ in 0..5_000 {
                let s = sample_error_model(n, sigma, &mut rng);
                let upper = s.x_min_sq / LN_2;
                let lower = upper - (n as f64).log2();
                assert!(
                    s.y_value <= upper + 1e-9 && s.y_value >= lower - 1e-9,
                    "violation: n={n} sigma={sigma} y={} bounds=({lower}, {upper})",
                    s.y_value
                );
            }
        }
    }

    #[test]
    fn mean_y_sits_in_the_expected_band() {
        // sigma_x = 10, N = 100: E[Y] within the sandwich band in expectation.
        let mut rng = substream(15, 0);
        let n = 100;
        let sigma = 10.0;
        let draws = 20_000;
        let ys: Vec<f64> = (0..draws).map(|_| sample_error_model(n, sigma, &mut rng).y_value).collect();
        let (mean, se) = mean_and_stderr(&ys);
        let center = sigma * sigma * g_of_n(n as u64) / LN_2;
        let lo = center - (n as f64).log2() - 3.0 * se;
        let hi = center + 3.0 * se;
        assert!(mean >= lo && mean <= hi, "mean {mean} outside [{lo}, {hi}]");
    }

    #[test]
    fn divergence_rows_are_accurate_at_low_snr() {
        let config = SystemConfig::new(Scheme::Qsm, 2, 2, 1, 4)
            .with_n_outer(4_000)
            .with_seed(33);
        let rows = divergence_experiment(&config, &[1_000, 10_000], &[0.0]).unwrap();
        for row in &rows {
            assert!(
                row.gap.abs() < 0.05,
                "gap {} at N={} should be small at 0 dB",
                row.gap,
                row.n_inner
            );
        }
    }

    #[test]
    fn divergence_requires_the_fixed_setup() {
        let config = SystemConfig::new(Scheme::Qsm, 4, 4, 1, 16);
        assert!(divergence_experiment(&config, &[10], &[0.0]).is_err());
    }
}
