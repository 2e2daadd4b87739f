//! Activation-pattern design: lexicographic truncation, greedy equiprobable
//! selection, and an exact branch-and-bound 0-1 program.
//!
//! All three methods pick `q_part` single-part patterns out of the
//! binom(n_tx, k) candidates. The figure of merit is how evenly the antennas
//! are activated: minimize the count spread (max - min), tie-break on count
//! variance, then on lexicographic selection order. With the total activation
//! count fixed at `q_part * k`, comparing variances is equivalent to comparing
//! sums of squared counts, so the solver works in exact integer arithmetic.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::pattern::{
    binomial, enumerate_single_part_aps, ActivationPattern, ApSet, DesignMethod, SinglePartPattern,
};

/// Antenna-activation tallies for a single-part pattern set.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationStats {
    /// Times each antenna is active across the set, summed over columns.
    pub counts: Vec<u32>,
    /// max(counts) - min(counts).
    pub spread: u32,
    /// counts normalized by q_part * k.
    pub probabilities: Vec<f64>,
}

/// Tallies activations; panics on an empty set.
pub fn activation_stats(patterns: &[SinglePartPattern]) -> ActivationStats {
    assert!(!patterns.is_empty(), "activation_stats of empty set");
    let n_tx = patterns[0].n_tx();
    let mut counts = vec![0u32; n_tx];
    for pattern in patterns {
        for &antenna in pattern.antennas() {
            counts[antenna] += 1;
        }
    }
    let max = *counts.iter().max().unwrap();
    let min = *counts.iter().min().unwrap();
    let total: u32 = counts.iter().sum();
    let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
    ActivationStats {
        counts,
        spread: max - min,
        probabilities,
    }
}

fn spread_of(counts: &[u32]) -> u32 {
    counts.iter().max().unwrap() - counts.iter().min().unwrap()
}

fn sumsq_of(counts: &[u32]) -> u64 {
    counts.iter().map(|&c| (c as u64) * (c as u64)).sum()
}

fn check_q_part(n_tx: usize, k: usize, q_part: usize) -> Result<u64> {
    let max = binomial(n_tx as u64, k as u64).unwrap_or(0);
    if q_part == 0 || q_part as u64 > max {
        return Err(Error::QPartOutOfRange { q_part, max });
    }
    Ok(max)
}

/// First `q_part` patterns in lexicographic order.
pub fn combinatorial_design(n_tx: usize, k: usize, q_part: usize) -> Result<Vec<SinglePartPattern>> {
    check_q_part(n_tx, k, q_part)?;
    let mut all = enumerate_single_part_aps(n_tx, k)?;
    all.truncate(q_part);
    Ok(all)
}

/// Greedy equiprobable selection: repeatedly add the unused pattern that
/// minimizes the resulting count spread, tie-broken on count variance and
/// then on lexicographic order. Deterministic.
pub fn equiprobable_design(n_tx: usize, k: usize, q_part: usize) -> Result<Vec<SinglePartPattern>> {
    check_q_part(n_tx, k, q_part)?;
    let candidates = enumerate_single_part_aps(n_tx, k)?;
    let mut used = vec![false; candidates.len()];
    let mut counts = vec![0u32; n_tx];
    let mut chosen = Vec::with_capacity(q_part);
    for _ in 0..q_part {
        let mut best: Option<(u32, u64, usize)> = None;
        for (idx, candidate) in candidates.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let mut trial = counts.clone();
            for &antenna in candidate.antennas() {
                trial[antenna] += 1;
            }
            let key = (spread_of(&trial), sumsq_of(&trial), idx);
            if best.is_none() || key < best.unwrap() {
                best = Some(key);
            }
        }
        let (_, _, idx) = best.expect("q_part <= candidate count");
        used[idx] = true;
        for &antenna in candidates[idx].antennas() {
            counts[antenna] += 1;
        }
        chosen.push(candidates[idx].clone());
    }
    Ok(chosen)
}

/// Outcome of the exact selection solver.
#[derive(Debug, Clone)]
pub struct IlpDesign {
    pub patterns: Vec<SinglePartPattern>,
    /// True when the search proved optimality before the time budget expired;
    /// false means `patterns` is the best incumbent found so far.
    pub optimal: bool,
}

#[derive(Clone, PartialEq, Eq)]
struct Incumbent {
    spread: u32,
    sumsq: u64,
    selection: Vec<u32>,
}

impl Incumbent {
    fn beats(&self, other: &Incumbent) -> bool {
        (self.spread, self.sumsq, &self.selection) < (other.spread, other.sumsq, &other.selection)
    }
}

/// Exact 0-1 selection of `q_part` candidates minimizing (spread, variance,
/// lexicographic selection), solved by best-first branch and bound.
///
/// The bound combines a ceil/floor counting bound on the spread with a
/// water-filling bound on the sum of squared counts over the remaining
/// selectable patterns per antenna. If `time_budget` runs out the best
/// incumbent is returned with `optimal = false`.
pub fn ilp_design(n_tx: usize, k: usize, q_part: usize, time_budget: Duration) -> Result<IlpDesign> {
    check_q_part(n_tx, k, q_part)?;
    let candidates = enumerate_single_part_aps(n_tx, k)?;
    let num = candidates.len();
    let total_final: u32 = (q_part * k) as u32;

    // suffix[i][a] = how many candidates with index >= i activate antenna a.
    let mut suffix = vec![vec![0u32; n_tx]; num + 1];
    for i in (0..num).rev() {
        let (head, tail) = suffix.split_at_mut(i + 1);
        head[i].copy_from_slice(&tail[0]);
        for &antenna in candidates[i].antennas() {
            head[i][antenna] += 1;
        }
    }

    // Admissible lower bounds on (spread, sumsq) for any completion of
    // `counts` by `t` more patterns drawn from indices >= next.
    let bounds = |counts: &[u32], t: usize, next: usize| -> Option<(u32, u64)> {
        if t == 0 {
            return Some((spread_of(counts), sumsq_of(counts)));
        }
        if t > num - next {
            return None;
        }
        let caps: Vec<u32> = (0..n_tx).map(|a| suffix[next][a].min(t as u32)).collect();
        let need = (t * k) as u32;
        if caps.iter().sum::<u32>() < need {
            return None;
        }
        let max_now = *counts.iter().max().unwrap();
        let lb_max = max_now.max(total_final.div_ceil(n_tx as u32));
        let ub_min = (total_final / n_tx as u32)
            .min((0..n_tx).map(|a| counts[a] + caps[a]).min().unwrap());
        let spread_lb = lb_max.saturating_sub(ub_min);

        // Water-fill `need` unit increments onto the smallest counts, each
        // antenna capped; exact minimizer of the final sum of squares.
        let mut fill: Vec<u32> = counts.to_vec();
        let mut room = caps;
        for _ in 0..need {
            let mut best = usize::MAX;
            for a in 0..n_tx {
                if room[a] > 0 && (best == usize::MAX || fill[a] < fill[best]) {
                    best = a;
                }
            }
            debug_assert!(best != usize::MAX);
            fill[best] += 1;
            room[best] -= 1;
        }
        Some((spread_lb, sumsq_of(&fill)))
    };

    // Seed the incumbent with the greedy solution for strong early pruning.
    let seed_patterns = equiprobable_design(n_tx, k, q_part)?;
    let mut incumbent = {
        let mut counts = vec![0u32; n_tx];
        let mut selection: Vec<u32> = seed_patterns
            .iter()
            .map(|p| candidates.iter().position(|c| c == p).unwrap() as u32)
            .collect();
        selection.sort_unstable();
        for pattern in &seed_patterns {
            for &antenna in pattern.antennas() {
                counts[antenna] += 1;
            }
        }
        Incumbent {
            spread: spread_of(&counts),
            sumsq: sumsq_of(&counts),
            selection,
        }
    };

    #[derive(PartialEq, Eq)]
    struct Node {
        bound: (u32, u64),
        selection: Vec<u32>,
        next: u32,
        counts: Vec<u32>,
    }
    impl Ord for Node {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            (self.bound, &self.selection, self.next).cmp(&(other.bound, &other.selection, other.next))
        }
    }
    impl PartialOrd for Node {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let start = Instant::now();
    let mut optimal = true;
    let mut heap: BinaryHeap<Reverse<Node>> = BinaryHeap::new();
    let root_counts = vec![0u32; n_tx];
    if let Some(bound) = bounds(&root_counts, q_part, 0) {
        heap.push(Reverse(Node {
            bound,
            selection: Vec::new(),
            next: 0,
            counts: root_counts,
        }));
    }

    let worse_than_incumbent = |bound: (u32, u64), inc: &Incumbent| -> bool {
        bound.0 > inc.spread || (bound.0 == inc.spread && bound.1 > inc.sumsq)
    };

    let mut since_clock_check = 0u32;
    while let Some(Reverse(node)) = heap.pop() {
        since_clock_check += 1;
        if since_clock_check >= 512 {
            since_clock_check = 0;
            if start.elapsed() > time_budget {
                optimal = false;
                break;
            }
        }
        if worse_than_incumbent(node.bound, &incumbent) {
            continue;
        }
        let picked = node.selection.len();
        if picked == q_part {
            let candidate = Incumbent {
                spread: node.bound.0,
                sumsq: node.bound.1,
                selection: node.selection,
            };
            if candidate.beats(&incumbent) {
                incumbent = candidate;
            }
            continue;
        }
        let next = node.next as usize;
        if next >= num {
            continue;
        }
        // Include branch.
        let mut counts_inc = node.counts.clone();
        for &antenna in candidates[next].antennas() {
            counts_inc[antenna] += 1;
        }
        if let Some(bound) = bounds(&counts_inc, q_part - picked - 1, next + 1) {
            if !worse_than_incumbent(bound, &incumbent) {
                let mut selection = node.selection.clone();
                selection.push(next as u32);
                heap.push(Reverse(Node {
                    bound,
                    selection,
                    next: (next + 1) as u32,
                    counts: counts_inc,
                }));
            }
        }
        // Exclude branch.
        if let Some(bound) = bounds(&node.counts, q_part - picked, next + 1) {
            if !worse_than_incumbent(bound, &incumbent) {
                heap.push(Reverse(Node {
                    bound,
                    selection: node.selection,
                    next: (next + 1) as u32,
                    counts: node.counts,
                }));
            }
        }
    }

    let patterns = incumbent
        .selection
        .iter()
        .map(|&i| candidates[i as usize].clone())
        .collect();
    Ok(IlpDesign { patterns, optimal })
}

/// Cartesian product of two single-part lists, in row-major order over
/// (real index, imaginary index).
pub fn joint_ap_set(
    real_parts: &[SinglePartPattern],
    imag_parts: &[SinglePartPattern],
    design_method: DesignMethod,
) -> Result<ApSet> {
    if real_parts.is_empty() || imag_parts.is_empty() {
        return Err(Error::DimensionMismatch("empty single-part list".into()));
    }
    let mut patterns = Vec::with_capacity(real_parts.len() * imag_parts.len());
    for real in real_parts {
        for imag in imag_parts {
            patterns.push(ActivationPattern::new(real.clone(), imag.clone())?);
        }
    }
    Ok(ApSet {
        patterns,
        design_method,
        single_part_real: Some(real_parts.to_vec()),
        single_part_imag: Some(imag_parts.to_vec()),
    })
}

/// Pairs each single-part pattern with itself (A_R = A_I), the SM/GSM layout.
pub fn matched_ap_set(parts: &[SinglePartPattern], design_method: DesignMethod) -> Result<ApSet> {
    if parts.is_empty() {
        return Err(Error::DimensionMismatch("empty single-part list".into()));
    }
    let patterns = parts
        .iter()
        .map(|p| ActivationPattern::new(p.clone(), p.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ApSet {
        patterns,
        design_method,
        single_part_real: Some(parts.to_vec()),
        single_part_imag: Some(parts.to_vec()),
    })
}

/// Builds the scheme-appropriate AP set for `config` from a design method.
///
/// Quadrature schemes use the Cartesian product of one designed single-part
/// list with itself, so `config.q` must be a perfect square; SM/GSM use the
/// matched layout with `q_part = q`.
pub fn build_design(config: &SystemConfig, method: DesignMethod) -> Result<ApSet> {
    let q_part = if config.scheme.is_quadrature() {
        let root = (config.q as f64).sqrt().round() as usize;
        if root * root != config.q {
            return Err(Error::InvalidConfig {
                field: "q",
                message: format!(
                    "q = {} is not a perfect square; quadrature designs use q_part^2 joint patterns",
                    config.q
                ),
            });
        }
        root
    } else {
        config.q
    };
    let parts = match method {
        DesignMethod::Combinatorial => combinatorial_design(config.n_tx, config.k, q_part)?,
        DesignMethod::Equiprobable => equiprobable_design(config.n_tx, config.k, q_part)?,
        DesignMethod::Ilp => ilp_design(config.n_tx, config.k, q_part, Duration::from_secs(10))?.patterns,
        DesignMethod::Explicit => {
            return Err(Error::InvalidConfig {
                field: "ap_method",
                message: "explicit sets come from a pattern file, not a design".into(),
            })
        }
    };
    if config.scheme.is_quadrature() {
        joint_ap_set(&parts, &parts, method)
    } else {
        matched_ap_set(&parts, method)
    }
}
