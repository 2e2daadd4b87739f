//! Conditional received-signal density p(y | A, H) for Gaussian symbols.
//!
//! Three evaluators:
//!
//! * [`log_density_closed`] — exact. Stacking real and imaginary parts turns
//!   ||y - Hx||^2 into ||y~ - Bu||^2 with u = [s_R; s_I], and the 2K-dimensional
//!   Gaussian integral collapses after completing the square:
//!   integral of exp(-u'Pu + 2q'u) du = pi^K det(P)^(-1/2) exp(q'P^(-1)q),
//!   with P = (K/sigma_s^2) I + B'B/sigma_n^2 symmetric positive definite.
//! * [`log_density_k1_explicit`] — the same quantity for K = 1 via two
//!   sequential scalar Gaussian integrals, kept as an independent cross-check.
//! * [`log_density_mc`] — plain Monte Carlo over symbol draws; its error
//!   grows quickly with SNR, which is exactly what the error-model module
//!   quantifies.
//!
//! All log densities are natural logs; conversion to bits happens at the
//! estimator level.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use crate::channel::{CMatrix, CVector};
use crate::error::{Error, Result};
use crate::numerics::log_sum_exp;
use crate::pattern::ActivationPattern;

/// Real-stacked pieces of the completed square.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    /// 2N_r x 2K effective real channel.
    pub b: DMatrix<f64>,
    /// 2K x 2K symmetric positive definite.
    pub p: DMatrix<f64>,
    /// B' y~ / sigma_n^2.
    pub q: DVector<f64>,
    /// [Re y; Im y].
    pub y_stack: DVector<f64>,
}

/// Assembles B, P, q, and y~ for one pattern. `sigma_s2` is the total symbol
/// power; each complex symbol has variance `sigma_s2 / K`.
pub fn quadratic_form(
    y: &CVector,
    pattern: &ActivationPattern,
    h: &CMatrix,
    sigma_s2: f64,
    sigma_n2: f64,
) -> QuadraticForm {
    let n_rx = h.nrows();
    let k = pattern.k();

    let mut b = DMatrix::zeros(2 * n_rx, 2 * k);
    for (col, &antenna) in pattern.real().antennas().iter().enumerate() {
        let column = h.column(antenna);
        for r in 0..n_rx {
            b[(r, col)] = column[r].re;
            b[(n_rx + r, col)] = column[r].im;
        }
    }
    for (col, &antenna) in pattern.imag().antennas().iter().enumerate() {
        let column = h.column(antenna);
        for r in 0..n_rx {
            b[(r, k + col)] = -column[r].im;
            b[(n_rx + r, k + col)] = column[r].re;
        }
    }

    let y_stack = DVector::from_fn(2 * n_rx, |i, _| {
        if i < n_rx {
            y[i].re
        } else {
            y[i - n_rx].im
        }
    });

    let mut p = b.tr_mul(&b) / sigma_n2;
    let prior = k as f64 / sigma_s2;
    for d in 0..2 * k {
        p[(d, d)] += prior;
    }
    let q = b.tr_mul(&y_stack) / sigma_n2;

    QuadraticForm { b, p, q, y_stack }
}

/// Exact ln p(y | A, H) via the quadratic-form Gaussian integral:
///
/// ln p = K ln(K/sigma_s^2) - N_r ln(pi sigma_n^2) - (1/2) ln det P
///        + q' P^(-1) q - ||y~||^2 / sigma_n^2.
pub fn log_density_closed(
    y: &CVector,
    pattern: &ActivationPattern,
    h: &CMatrix,
    sigma_s2: f64,
    sigma_n2: f64,
) -> Result<f64> {
    let n_rx = h.nrows() as f64;
    let k = pattern.k() as f64;
    let qf = quadratic_form(y, pattern, h, sigma_s2, sigma_n2);
    let chol = Cholesky::new(qf.p).ok_or_else(|| {
        Error::Factorization("P is not positive definite; inputs are likely non-finite".into())
    })?;
    let half_ln_det: f64 = chol.l().diagonal().iter().map(|d| d.ln()).sum();
    let solved = chol.solve(&qf.q);
    Ok(k * (k / sigma_s2).ln() - n_rx * (PI * sigma_n2).ln() - half_ln_det + qf.q.dot(&solved)
        - qf.y_stack.norm_squared() / sigma_n2)
}

/// ln p(y | A, H) for K = 1 by integrating out s_R and then s_I analytically.
///
/// With r and m the antennas selected for the real and imaginary parts:
/// p1 = sigma_s^2 ||h_r||^2 + sigma_n^2, p2 = sigma_s^2 ||h_m||^2 + sigma_n^2,
/// alpha = Im<h_r, h_m>, beta = Re<h_r, y>, gamma = -Im<h_m, y>, and
///
/// p = exp(Z2) / (pi^{N_r} sigma_n^{2(N_r-1)} sqrt(p1 p2 - sigma_s^4 alpha^2))
/// Z2 = (sigma_s^2 alpha beta / p1 - gamma)^2
///        / (sigma_n^2 (p2/sigma_s^2 - sigma_s^2 alpha^2 / p1))
///      + sigma_s^2 beta^2 / (p1 sigma_n^2) - ||y||^2 / sigma_n^2.
///
/// Cauchy-Schwarz plus the noise regularization guarantee
/// p1 p2 > sigma_s^4 alpha^2, so the formula is always well defined.
pub fn log_density_k1_explicit(
    y: &CVector,
    pattern: &ActivationPattern,
    h: &CMatrix,
    sigma_s2: f64,
    sigma_n2: f64,
) -> Result<f64> {
    if pattern.k() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "explicit form requires k = 1, got k = {}",
            pattern.k()
        )));
    }
    let n_rx = h.nrows() as f64;
    let col_r = h.column(pattern.real().antennas()[0]);
    let col_m = h.column(pattern.imag().antennas()[0]);

    let p1 = sigma_s2 * col_r.norm_squared() + sigma_n2;
    let p2 = sigma_s2 * col_m.norm_squared() + sigma_n2;
    let alpha = col_r.dotc(&col_m).im;
    let beta = col_r.dotc(y).re;
    let gamma = -col_m.dotc(y).im;

    let discriminant = p1 * p2 - sigma_s2 * sigma_s2 * alpha * alpha;
    debug_assert!(discriminant > 0.0);
    let z2 = {
        let numerator = sigma_s2 * alpha * beta / p1 - gamma;
        let curvature = p2 / sigma_s2 - sigma_s2 * alpha * alpha / p1;
        numerator * numerator / (sigma_n2 * curvature) + sigma_s2 * beta * beta / (p1 * sigma_n2)
            - y.norm_squared() / sigma_n2
    };
    Ok(z2 - n_rx * PI.ln() - (n_rx - 1.0) * sigma_n2.ln() - 0.5 * discriminant.ln())
}

/// Monte Carlo log density with a delta-method standard error.
#[derive(Debug, Clone, Copy)]
pub struct McLogDensity {
    pub log_density: f64,
    pub stderr: f64,
}

/// ln of (1/N) sum_i (pi sigma_n^2)^(-N_r) exp(-||y - H x_i||^2 / sigma_n^2)
/// with x_i built from fresh Gaussian symbols drawn from `rng`.
pub fn log_density_mc(
    y: &CVector,
    pattern: &ActivationPattern,
    h: &CMatrix,
    sigma_s2: f64,
    sigma_n2: f64,
    n_inner: usize,
    rng: &mut impl Rng,
) -> McLogDensity {
    assert!(n_inner >= 1);
    let n_rx = h.nrows();
    let k = pattern.k();
    let per_symbol_var = sigma_s2 / k as f64;
    let half = (per_symbol_var / 2.0).sqrt();

    let cols_r: Vec<_> = pattern.real().antennas().iter().map(|&a| h.column(a)).collect();
    let cols_m: Vec<_> = pattern.imag().antennas().iter().map(|&a| h.column(a)).collect();

    let mut exponents = Vec::with_capacity(n_inner);
    let mut s_re = vec![0.0f64; k];
    let mut s_im = vec![0.0f64; k];
    for _ in 0..n_inner {
        for col in 0..k {
            s_re[col] = rng.sample::<f64, _>(rand_distr::StandardNormal) * half;
            s_im[col] = rng.sample::<f64, _>(rand_distr::StandardNormal) * half;
        }
        let mut d2 = 0.0;
        for r in 0..n_rx {
            let mut d = y[r];
            for col in 0..k {
                let hr = cols_r[col][r];
                let hm = cols_m[col][r];
                // subtract s_R * h_r + j s_I * h_m componentwise
                d -= Complex::new(
                    s_re[col] * hr.re - s_im[col] * hm.im,
                    s_re[col] * hr.im + s_im[col] * hm.re,
                );
            }
            d2 += d.norm_sqr();
        }
        exponents.push(-d2 / sigma_n2);
    }

    let lse = log_sum_exp(&exponents);
    let log_density = lse - (n_inner as f64).ln() - n_rx as f64 * (PI * sigma_n2).ln();

    let stderr = if n_inner < 2 {
        0.0
    } else {
        let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = exponents.iter().map(|&a| (a - max).exp()).collect();
        let mean_w = weights.iter().sum::<f64>() / n_inner as f64;
        let var_w =
            weights.iter().map(|w| (w - mean_w).powi(2)).sum::<f64>() / (n_inner - 1) as f64;
        (var_w / n_inner as f64).sqrt() / mean_w
    };

    McLogDensity { log_density, stderr }
}
