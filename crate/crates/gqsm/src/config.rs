//! System configuration, scheme definitions, and transmission rates.

use crate::error::{Error, Result};
use crate::pattern::binomial;

/// Index-modulation scheme. QSM and SM fix K = 1; SM and GSM use the same
/// activation pattern for the real and imaginary symbol parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Sm,
    Gsm,
    Qsm,
    Gqsm,
}

impl Scheme {
    /// Quadrature schemes select real and imaginary activations independently.
    pub fn is_quadrature(self) -> bool {
        matches!(self, Scheme::Qsm | Scheme::Gqsm)
    }

    /// Schemes that require `a_real == a_imag` for every pattern.
    pub fn requires_matched_parts(self) -> bool {
        matches!(self, Scheme::Sm | Scheme::Gsm)
    }

    /// Schemes that fix the symbol count K to one.
    pub fn requires_single_symbol(self) -> bool {
        matches!(self, Scheme::Sm | Scheme::Qsm)
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Sm => "sm",
            Scheme::Gsm => "gsm",
            Scheme::Qsm => "qsm",
            Scheme::Gqsm => "gqsm",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sm" => Ok(Scheme::Sm),
            "gsm" => Ok(Scheme::Gsm),
            "qsm" => Ok(Scheme::Qsm),
            "gqsm" => Ok(Scheme::Gqsm),
            other => Err(format!("unknown scheme '{other}'")),
        }
    }
}

/// Channel model. `DiagonalOfdm` zeroes the off-diagonal entries, which turns
/// the system into an idealized I/Q index-modulated OFDM link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMode {
    Rayleigh,
    DiagonalOfdm,
}

/// Full description of one simulation setup.
///
/// `sigma_s2` is the total transmit power; each of the K complex symbols has
/// variance `sigma_s2 / K` so that `E ||x||^2 = sigma_s2`. Setting
/// `halve_symbol_power` switches to the alternative `sigma_s2 / (2K)`
/// convention without touching the reported SNR.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    pub scheme: Scheme,
    pub n_tx: usize,
    pub n_rx: usize,
    pub k: usize,
    pub q: usize,
    pub snr_db: f64,
    pub sigma_s2: f64,
    /// Constellation order L; only meaningful in discrete mode.
    pub constellation_order: Option<usize>,
    pub n_outer: usize,
    pub n_inner: usize,
    pub master_seed: u64,
    pub channel_mode: ChannelMode,
    pub halve_symbol_power: bool,
}

impl SystemConfig {
    pub fn new(scheme: Scheme, n_tx: usize, n_rx: usize, k: usize, q: usize) -> Self {
        SystemConfig {
            scheme,
            n_tx,
            n_rx,
            k,
            q,
            snr_db: 0.0,
            sigma_s2: 1.0,
            constellation_order: None,
            n_outer: 10_000,
            n_inner: 1_000,
            master_seed: 1,
            channel_mode: ChannelMode::Rayleigh,
            halve_symbol_power: false,
        }
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.snr_db = snr_db;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_n_outer(mut self, n_outer: usize) -> Self {
        self.n_outer = n_outer;
        self
    }

    pub fn with_n_inner(mut self, n_inner: usize) -> Self {
        self.n_inner = n_inner;
        self
    }

    /// Noise variance derived from the SNR definition rho = sigma_s^2 / sigma_n^2.
    pub fn sigma_n2(&self) -> f64 {
        self.sigma_s2 / 10f64.powf(self.snr_db / 10.0)
    }

    /// Total symbol power actually used for sampling and densities.
    pub fn effective_sigma_s2(&self) -> f64 {
        if self.halve_symbol_power {
            self.sigma_s2 / 2.0
        } else {
            self.sigma_s2
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tx == 0 {
            return Err(Error::InvalidConfig {
                field: "n_tx",
                message: "must be positive".into(),
            });
        }
        if self.n_rx == 0 {
            return Err(Error::InvalidConfig {
                field: "n_rx",
                message: "must be positive".into(),
            });
        }
        if self.k == 0 || self.k > self.n_tx {
            return Err(Error::InvalidConfig {
                field: "k",
                message: format!("k = {} must satisfy 1 <= k <= n_tx = {}", self.k, self.n_tx),
            });
        }
        if self.scheme.requires_single_symbol() && self.k != 1 {
            return Err(Error::SchemeViolation {
                pattern: None,
                message: format!("scheme {} requires k = 1, got {}", self.scheme.name(), self.k),
            });
        }
        if self.q == 0 {
            return Err(Error::InvalidConfig {
                field: "q",
                message: "at least one activation pattern is required".into(),
            });
        }
        let per_part = binomial(self.n_tx as u64, self.k as u64).ok_or(Error::InvalidConfig {
            field: "n_tx",
            message: "binomial(n_tx, k) overflows".into(),
        })?;
        let max_q = if self.scheme.requires_matched_parts() {
            per_part
        } else {
            per_part.saturating_mul(per_part)
        };
        if self.q as u64 > max_q {
            return Err(Error::InvalidConfig {
                field: "q",
                message: format!("q = {} exceeds the {} candidate patterns", self.q, max_q),
            });
        }
        if self.sigma_s2 <= 0.0 || !self.sigma_s2.is_finite() {
            return Err(Error::InvalidConfig {
                field: "sigma_s2",
                message: "must be positive and finite".into(),
            });
        }
        if !self.sigma_n2().is_finite() || self.sigma_n2() <= 0.0 {
            return Err(Error::InvalidConfig {
                field: "snr_db",
                message: "derived noise variance must be positive and finite".into(),
            });
        }
        if let Some(order) = self.constellation_order {
            if order < 2 || !order.is_power_of_two() {
                return Err(Error::InvalidConfig {
                    field: "constellation_order",
                    message: format!("L = {order} must be a power of two >= 2"),
                });
            }
        }
        if self.channel_mode == ChannelMode::DiagonalOfdm && self.n_rx != self.n_tx {
            return Err(Error::InvalidConfig {
                field: "channel_mode",
                message: "diagonal mode requires n_rx == n_tx".into(),
            });
        }
        if self.n_outer == 0 {
            return Err(Error::InvalidConfig {
                field: "n_outer",
                message: "must be positive".into(),
            });
        }
        Ok(())
    }
}

fn floor_log2(x: u64) -> u32 {
    debug_assert!(x > 0);
    63 - x.leading_zeros()
}

/// Transmission rate in bits per channel use.
///
/// Antenna-index bits come from the number of activation patterns: the full
/// candidate count binom(n_tx, k) by default, or `q_override` when the set is
/// restricted. Quadrature schemes select patterns independently for the real
/// and imaginary parts and so earn the index bits twice.
pub fn transmission_rate(
    scheme: Scheme,
    n_tx: usize,
    k: usize,
    constellation_order: usize,
    q_override: Option<usize>,
) -> Result<u32> {
    if k == 0 || k > n_tx {
        return Err(Error::InvalidConfig {
            field: "k",
            message: format!("k = {k} must satisfy 1 <= k <= n_tx = {n_tx}"),
        });
    }
    if scheme.requires_single_symbol() && k != 1 {
        return Err(Error::SchemeViolation {
            pattern: None,
            message: format!("scheme {} requires k = 1", scheme.name()),
        });
    }
    if constellation_order < 2 || !constellation_order.is_power_of_two() {
        return Err(Error::InvalidConfig {
            field: "constellation_order",
            message: format!("L = {constellation_order} must be a power of two >= 2"),
        });
    }
    let symbol_bits = k as u32 * floor_log2(constellation_order as u64);
    let index_bits = match q_override {
        Some(q) => {
            if q == 0 {
                return Err(Error::InvalidConfig {
                    field: "q",
                    message: "q must be positive".into(),
                });
            }
            floor_log2(q as u64)
        }
        None => {
            let candidates = binomial(n_tx as u64, k as u64).ok_or(Error::InvalidConfig {
                field: "n_tx",
                message: "binomial(n_tx, k) overflows".into(),
            })?;
            let per_part = floor_log2(candidates);
            if scheme.is_quadrature() {
                2 * per_part
            } else {
                per_part
            }
        }
    };
    Ok(symbol_bits + index_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_qsm_4tx_qpsk_is_6_bits() {
        assert_eq!(transmission_rate(Scheme::Qsm, 4, 1, 4, None).unwrap(), 6);
    }

    #[test]
    fn rate_sm_single_antenna_bpsk_is_1_bit() {
        assert_eq!(transmission_rate(Scheme::Sm, 1, 1, 2, None).unwrap(), 1);
    }

    #[test]
    fn rate_gqsm_4tx_k2_qpsk_is_8_bits() {
        // 2*log2(4) + 2*floor(log2 C(4,2)) = 4 + 2*2
        assert_eq!(transmission_rate(Scheme::Gqsm, 4, 2, 4, None).unwrap(), 8);
    }

    #[test]
    fn rate_with_q_override_uses_floor_log2_q() {
        assert_eq!(transmission_rate(Scheme::Gsm, 8, 3, 4, Some(8)).unwrap(), 3 * 2 + 3);
        assert_eq!(transmission_rate(Scheme::Gqsm, 4, 1, 4, Some(16)).unwrap(), 2 + 4);
    }

    #[test]
    fn rate_rejects_bad_arguments() {
        assert!(transmission_rate(Scheme::Gsm, 2, 3, 4, None).is_err());
        assert!(transmission_rate(Scheme::Qsm, 4, 2, 4, None).is_err());
        assert!(transmission_rate(Scheme::Sm, 4, 1, 3, None).is_err());
    }

    #[test]
    fn sigma_n2_follows_snr() {
        let config = SystemConfig::new(Scheme::Qsm, 4, 4, 1, 16).with_snr_db(10.0);
        approx::assert_abs_diff_eq!(config.sigma_n2(), 0.1, epsilon = 1e-12);
        assert!(config.sigma_n2() > 0.0);
    }

    #[test]
    fn validate_rejects_k_greater_than_n_tx() {
        let config = SystemConfig::new(Scheme::Gqsm, 2, 2, 3, 4);
        assert!(config.validate().is_err());
    }

    #[test]
    fn validate_rejects_qsm_with_k2() {
        let config = SystemConfig::new(Scheme::Qsm, 4, 4, 2, 16);
        assert!(matches!(
            config.validate(),
            Err(crate::error::Error::SchemeViolation { .. })
        ));
    }

    #[test]
    fn validate_rejects_oversized_q() {
        // C(4,1)^2 = 16 is the quadrature bound
        let config = SystemConfig::new(Scheme::Qsm, 4, 4, 1, 17);
        assert!(config.validate().is_err());
        // GSM is bounded by C(4,2) = 6
        let config = SystemConfig::new(Scheme::Gsm, 4, 4, 2, 7);
        assert!(config.validate().is_err());
    }

    #[test]
    fn halved_convention_halves_effective_power() {
        let mut config = SystemConfig::new(Scheme::Qsm, 2, 2, 1, 4);
        assert_eq!(config.effective_sigma_s2(), 1.0);
        config.halve_symbol_power = true;
        assert_eq!(config.effective_sigma_s2(), 0.5);
    }
}
