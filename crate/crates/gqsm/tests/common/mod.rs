//! Shared test oracles.
//!
//! These deliberately avoid the library's density machinery: the exponent of
//! the symbol integral is evaluated pointwise from ||y - Hx||^2, and the
//! integral over R^{2K} is taken as nested 1-D quadratures in the log domain,
//! with each level locating its own peak by ternary search. Nothing here
//! touches the real-stacked matrix construction or the Cholesky path under
//! test.

#![allow(dead_code)]

use std::f64::consts::PI;

use gqsm::{ActivationPattern, CMatrix, CVector};
use num_complex::Complex;


/// Quadrature rule for one nesting level.
pub enum Rule {
    /// Adaptive Simpson with the given relative tolerance.
    Simpson(f64),
    /// Fixed Gauss-Legendre panel with the given node count.
    GaussLegendre(usize),
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, 0.0f64);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let flm = f(0.5 * (a + m));
        let frm = f(0.5 * (m + b));
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), abs_tol, 40)
}

/// Nested integrator for ln of the integral of exp(f(u)) over a box.
///
/// `f` must have a strictly concave quadratic form (the symbol integrals
/// do), so every 1-D slice of any partial integral is a Gaussian bump:
/// unimodal for the golden-section peak search, and with a curvature that a
/// central second difference recovers exactly. Each level works in the log
/// domain, so arbitrarily small densities never underflow.
pub struct NestedExpIntegrator<'a> {
    pub exponent: &'a dyn Fn(&[f64]) -> f64,
    pub dim: usize,
    /// Search interval per coordinate.
    pub half_width: f64,
    /// Golden-section iterations per level; must localize the peak to well
    /// under the narrowest conditional standard deviation of the integrand.
    pub golden_iters: usize,
    /// Integration window half-width in conditional standard deviations; the
    /// neglected tail mass is O(exp(-width^2 / 2)) relative.
    pub width_sigmas: f64,
    pub rule: Rule,
}

impl NestedExpIntegrator<'_> {
    /// ln of the integral of exp(f) du over [-half_width, half_width]^dim.
    pub fn ln_integral(&self) -> f64 {
        let mut point = vec![0.0; self.dim];
        self.level(self.dim - 1, &mut point)
    }

    /// ln of the partial integral over coordinates 0..=level, with
    /// point[level+1..] held fixed.
    fn ln_g(&self, level: usize, point: &mut [f64], t: f64) -> f64 {
        point[level] = t;
        if level == 0 {
            (self.exponent)(point)
        } else {
            self.level(level - 1, point)
        }
    }

    fn level(&self, level: usize, point: &mut [f64]) -> f64 {
        // golden-section maximum of the (unimodal) slice
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (-self.half_width, self.half_width);
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let mut f1 = self.ln_g(level, point, x1);
        let mut f2 = self.ln_g(level, point, x2);
        for _ in 0..self.golden_iters {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = self.ln_g(level, point, x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = self.ln_g(level, point, x1);
            }
        }
        let peak_t = 0.5 * (lo + hi);
        let peak_ln = self.ln_g(level, point, peak_t);

        // conditional sigma from the (exact) second difference of the
        // quadratic log-slice
        let h = (2.0 * self.half_width * 1e-3).min((self.half_width - peak_t.abs()).abs() * 0.5 + 1e-12);
        let f_plus = self.ln_g(level, point, peak_t + h);
        let f_minus = self.ln_g(level, point, peak_t - h);
        let curvature = (f_plus - 2.0 * peak_ln + f_minus) / (h * h);
        assert!(curvature < 0.0, "log-slice must be concave at its peak");
        let sigma = (-1.0 / curvature).sqrt();
        let win_lo = (peak_t - self.width_sigmas * sigma).max(-self.half_width);
        let win_hi = (peak_t + self.width_sigmas * sigma).min(self.half_width);

        let ln_value = match &self.rule {
            Rule::Simpson(rel_tol) => {
                let g = |t: f64| {
                    let mut local = point.to_vec();
                    (self.ln_g(level, &mut local, t) - peak_ln).exp()
                };
                let tol = rel_tol * (win_hi - win_lo);
                adaptive_simpson(&g, win_lo, win_hi, tol).ln()
            }
            Rule::GaussLegendre(n) => {
                let (nodes, weights) = gauss_legendre(*n);
                let mid = 0.5 * (win_lo + win_hi);
                let half = 0.5 * (win_hi - win_lo);
                let mut acc = 0.0;
                for (x, w) in nodes.iter().zip(&weights) {
                    let t = mid + half * x;
                    acc += w * (self.ln_g(level, point, t) - peak_ln).exp();
                }
                (acc * half).ln()
            }
        };
        peak_ln + ln_value
    }
}

/// Direct evaluation of the symbol-integral exponent at u = [s_R; s_I]:
/// -K ||u||^2 / sigma_s^2 - ||y - Hx(u)||^2 / sigma_n^2, with x assembled
/// from the pattern's antenna lists.
pub fn symbol_exponent(
    u: &[f64],
    y: &CVector,
    pattern: &ActivationPattern,
    h: &CMatrix,
    sigma_s2: f64,
    sigma_n2: f64,
) -> f64 {
    let k = pattern.k();
    let n_rx = h.nrows();
    debug_assert_eq!(u.len(), 2 * k);
    let mut d2 = 0.0;
    for r in 0..n_rx {
        let mut d = y[r];
        for col in 0..k {
            let hr = h[(r, pattern.real().antennas()[col])];
            let hm = h[(r, pattern.imag().antennas()[col])];
            let (s_re, s_im) = (u[col], u[k + col]);
            d -= Complex::new(s_re * hr.re - s_im * hm.im, s_re * hr.im + s_im * hm.re);
        }
        d2 += d.norm_sqr();
    }
    let prior: f64 = u.iter().map(|v| v * v).sum::<f64>() * k as f64 / sigma_s2;
    -prior - d2 / sigma_n2
}

/// ln p(y | A, H) by nested numeric quadrature of the 2K-dimensional symbol
/// integral. K = 1 uses adaptive Simpson per level; larger K uses fixed
/// Gauss-Legendre panels to keep the nesting affordable.
pub fn log_density_quadrature(
    y: &CVector,
    pattern: &ActivationPattern,
    h: &CMatrix,
    sigma_s2: f64,
    sigma_n2: f64,
) -> f64 {
    let k = pattern.k();
    let n_rx = h.nrows();
    let exponent =
        move |u: &[f64]| symbol_exponent(u, y, pattern, h, sigma_s2, sigma_n2);
    let half_width = 10.0 * (sigma_s2.sqrt() + y.norm());
    // Adaptive Simpson per level is affordable for the 2-D case; the 4-D
    // nesting multiplies per-level cost, so it runs on fixed Gauss-Legendre
    // panels over a tighter window (node spacing relative to the Gaussian
    // width drives the panel error; an exp(-24.5) tail is far below the
    // 1e-6 targets).
    let (rule, golden_iters, width_sigmas) = if k == 1 {
        (Rule::Simpson(1e-10), 30, 9.5)
    } else {
        (Rule::GaussLegendre(36), 24, 7.0)
    };
    let integrator = NestedExpIntegrator {
        exponent: &exponent,
        dim: 2 * k,
        half_width,
        golden_iters,
        width_sigmas,
        rule,
    };
    integrator.ln_integral() + k as f64 * (k as f64 / (PI * sigma_s2)).ln()
        - n_rx as f64 * (PI * sigma_n2).ln()
}

/// Exhaustive minimizer of (spread, sum of squared counts, selection) over
/// all q_part-subsets of the lexicographic candidate patterns.
pub fn brute_force_selection(n_tx: usize, k: usize, q_part: usize) -> (u32, u64, Vec<u32>) {
    let candidates = gqsm::enumerate_single_part_aps(n_tx, k).unwrap();
    let num = candidates.len();
    assert!(q_part >= 1 && q_part <= num);

    let mut best: Option<(u32, u64, Vec<u32>)> = None;
    let mut selection: Vec<u32> = Vec::with_capacity(q_part);
    let mut counts = vec![0u32; n_tx];

    fn recurse(
        start: usize,
        candidates: &[gqsm::SinglePartPattern],
        q_part: usize,
        selection: &mut Vec<u32>,
        counts: &mut Vec<u32>,
        best: &mut Option<(u32, u64, Vec<u32>)>,
    ) {
        if selection.len() == q_part {
            let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
            let sumsq: u64 = counts.iter().map(|&c| (c as u64) * (c as u64)).sum();
            let key = (spread, sumsq, selection.clone());
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        let remaining = q_part - selection.len();
        for idx in start..=candidates.len() - remaining {
            selection.push(idx as u32);
            for &a in candidates[idx].antennas() {
                counts[a] += 1;
            }
            recurse(idx + 1, candidates, q_part, selection, counts, best);
            for &a in candidates[idx].antennas() {
                counts[a] -= 1;
            }
            selection.pop();
        }
    }

    recurse(0, &candidates, q_part, &mut selection, &mut counts, &mut best);
    best.unwrap()
}

/// Mutual information of binary antipodal signaling {+a, -a} on a scalar
/// complex AWGN channel with noise variance sigma_n2, by 1-D quadrature over
/// the real received coordinate (the imaginary part carries no information).
pub fn binary_awgn_mi_bits(a: f64, sigma_n2: f64) -> f64 {
    let var = sigma_n2 / 2.0; // real-part noise variance
    let pdf = |y: f64, mean: f64| (-(y - mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
    let integrand = |y: f64| {
        let p_plus = pdf(y, a);
        let p_minus = pdf(y, -a);
        if p_plus == 0.0 {
            return 0.0;
        }
        p_plus * (2.0 * p_plus / (p_plus + p_minus)).log2()
    };
    let width = 12.0 * var.sqrt();
    adaptive_simpson(&integrand, a - width, a + width, 1e-12)
}
