//! Stable log-sum-exp, order-invariant summation, and adaptive quadrature.

/// log(sum(exp(values))) with max subtraction.
///
/// Values are sorted (ascending) before accumulation, so the result is
/// bit-identical under any permutation of the input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "log_sum_exp of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let max = *sorted.last().unwrap();
    if !max.is_finite() {
        // All -inf (density zero) or a non-finite input; propagate.
        return max;
    }
    let sum: f64 = sorted.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Sum that is invariant to the order of `values` (sorts a copy first).
pub fn sorted_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted.iter().sum()
}

/// Sample mean and standard error of the mean; stderr is 0 for n < 2.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n > 0, "mean of empty slice");
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
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
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    assert!(b >= a);
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, abs_tol, 48)
}
