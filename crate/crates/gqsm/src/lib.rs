//! Average mutual information of spatial index modulation over MIMO fading
//! channels.
//!
//! The crate models generalized quadrature spatial modulation and its special
//! cases (SM, GSM, QSM, and diagonal-channel I/Q index modulation), and
//! provides:
//!
//! * the system model: activation patterns, codeword construction, Rayleigh
//!   channel and noise sampling ([`channel`], [`pattern`], [`config`]);
//! * activation-pattern design by lexicographic truncation, greedy
//!   equiprobable selection, and exact branch-and-bound ([`design`]);
//! * discrete-input AMI of arbitrary codebooks ([`discrete`]);
//! * continuous-input AMI split into symbol and pattern parts, with an exact
//!   closed-form conditional density alongside Monte Carlo and explicit K = 1
//!   evaluators ([`continuous`], [`density`]);
//! * the error model explaining why the Monte Carlo density estimate diverges
//!   at high SNR ([`mc_error`]).
//!
//! Every sampling routine draws from counter-based substreams keyed by
//! `(master seed, realization index)`, so estimates are bit-identical for any
//! number of worker threads.

pub mod channel;
pub mod config;
pub mod continuous;
pub mod density;
pub mod design;
pub mod discrete;
pub mod error;
pub mod mc_error;
pub mod numerics;
pub mod pattern;
pub mod rng;

pub use channel::{
    build_codeword, received_signal, sample_channel, sample_noise, sample_symbols, CMatrix,
    CVector, ChannelRealization,
};
pub use config::{transmission_rate, ChannelMode, Scheme, SystemConfig};
pub use continuous::{
    ami_continuous, mimo_ergodic_capacity, AmiEstimate, CapacityEstimate, DensityMethod,
};
pub use density::{
    log_density_closed, log_density_k1_explicit, log_density_mc, McLogDensity, QuadraticForm,
};
pub use design::{
    activation_stats, build_design, combinatorial_design, equiprobable_design, ilp_design,
    joint_ap_set, matched_ap_set, ActivationStats, IlpDesign,
};
pub use discrete::{
    ami_discrete, ami_discrete_fixed, build_codebook, psk_constellation, Codebook,
    DiscreteAmiEstimate,
};
pub use error::{Error, Result};
pub use mc_error::{divergence_experiment, g_of_n, sample_error_model, DivergenceRow, ErrorModelSample};
pub use pattern::{
    binomial, enumerate_single_part_aps, parse_ap_text, validate_scheme, write_ap_text,
    ActivationPattern, ApSet, DesignMethod, SinglePartPattern,
};
