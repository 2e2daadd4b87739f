//! Channel, noise, and symbol sampling plus codeword construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::ChannelMode;
use crate::error::{Error, Result};
use crate::pattern::ActivationPattern;

pub type CVector = DVector<Complex<f64>>;
pub type CMatrix = DMatrix<Complex<f64>>;

/// One draw of the fading channel.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h: CMatrix,
    pub mode: ChannelMode,
}

/// Circularly symmetric complex Gaussian with the given total variance
/// (real and imaginary parts each carry half).
pub fn complex_normal(rng: &mut impl Rng, variance: f64) -> Complex<f64> {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re * scale, im * scale)
}

/// Draws an N_r x N_t channel with i.i.d. CN(0,1) entries; in diagonal mode
/// the off-diagonal entries are exactly zero.
///
/// Entries are drawn row-major, so a fixed rng state yields a fixed matrix.
pub fn sample_channel(rng: &mut impl Rng, n_rx: usize, n_tx: usize, mode: ChannelMode) -> ChannelRealization {
    let h = match mode {
        ChannelMode::Rayleigh => {
            let entries: Vec<Complex<f64>> = (0..n_rx * n_tx).map(|_| complex_normal(rng, 1.0)).collect();
            // from_vec fills column-major; draw row-major for a stable contract.
            DMatrix::from_fn(n_rx, n_tx, |r, c| entries[r * n_tx + c])
        }
        ChannelMode::DiagonalOfdm => {
            assert_eq!(n_rx, n_tx, "diagonal mode requires a square channel");
            let mut h = CMatrix::zeros(n_rx, n_tx);
            for d in 0..n_rx {
                h[(d, d)] = complex_normal(rng, 1.0);
            }
            h
        }
    };
    ChannelRealization { h, mode }
}

/// Noise vector with i.i.d. CN(0, sigma_n2) entries.
pub fn sample_noise(rng: &mut impl Rng, n_rx: usize, sigma_n2: f64) -> CVector {
    DVector::from_fn(n_rx, |_, _| complex_normal(rng, sigma_n2))
}

/// K classic symbols, i.i.d. CN(0, per_symbol_variance).
pub fn sample_symbols(rng: &mut impl Rng, k: usize, per_symbol_variance: f64) -> CVector {
    DVector::from_fn(k, |_, _| complex_normal(rng, per_symbol_variance))
}

/// Builds the codeword x = A_R Re(s) + j A_I Im(s).
pub fn build_codeword(pattern: &ActivationPattern, s: &CVector) -> Result<CVector> {
    if s.len() != pattern.k() {
        return Err(Error::DimensionMismatch(format!(
            "pattern has k = {} columns but symbol vector has length {}",
            pattern.k(),
            s.len()
        )));
    }
    let mut x = CVector::zeros(pattern.n_tx());
    for (col, &antenna) in pattern.real().antennas().iter().enumerate() {
        x[antenna] += Complex::new(s[col].re, 0.0);
    }
    for (col, &antenna) in pattern.imag().antennas().iter().enumerate() {
        x[antenna] += Complex::new(0.0, s[col].im);
    }
    Ok(x)
}

/// y = Hx + n.
pub fn received_signal(h: &CMatrix, x: &CVector, n: &CVector) -> Result<CVector> {
    if h.ncols() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} columns but codeword has length {}",
            h.ncols(),
            x.len()
        )));
    }
    if h.nrows() != n.len() {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} rows but noise has length {}",
            h.nrows(),
            n.len()
        )));
    }
    Ok(h * x + n)
}
