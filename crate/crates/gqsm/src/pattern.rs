//! Activation patterns: which transmit antennas carry the real and imaginary
//! symbol parts.
//!
//! A single-part pattern is a binary N_t x K selection matrix with one-hot
//! columns and pairwise-distinct active rows; it is stored compactly as the
//! sorted list of active antenna indices (column j activates the j-th
//! smallest). A full activation pattern pairs one selection for the real part
//! with one for the imaginary part.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Guard against accidental combinatorial blowup in pattern enumeration.
pub const ENUMERATION_CAP: u64 = 1_000_000;

/// binom(n, k) with overflow checking.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// One-hot N_t x K selection, stored as sorted active antenna indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SinglePartPattern {
    n_tx: usize,
    antennas: Vec<usize>,
}

impl SinglePartPattern {
    /// Builds a pattern from antenna indices; the indices are canonicalized to
    /// ascending order and must be distinct and within range.
    pub fn new(n_tx: usize, mut antennas: Vec<usize>) -> Result<Self> {
        if antennas.is_empty() {
            return Err(Error::DimensionMismatch("pattern selects no antennas".into()));
        }
        antennas.sort_unstable();
        for pair in antennas.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DimensionMismatch(format!(
                    "antenna {} selected twice",
                    pair[0]
                )));
            }
        }
        if *antennas.last().unwrap() >= n_tx {
            return Err(Error::DimensionMismatch(format!(
                "antenna {} out of range for n_tx = {}",
                antennas.last().unwrap(),
                n_tx
            )));
        }
        Ok(SinglePartPattern { n_tx, antennas })
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn k(&self) -> usize {
        self.antennas.len()
    }

    /// Active antenna per column, ascending.
    pub fn antennas(&self) -> &[usize] {
        &self.antennas
    }

    /// Dense 0/1 matrix form, row-major `[row][col]`.
    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.k()]; self.n_tx];
        for (col, &row) in self.antennas.iter().enumerate() {
            m[row][col] = 1;
        }
        m
    }
}

/// Joint activation pattern for the real and imaginary symbol parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActivationPattern {
    real: SinglePartPattern,
    imag: SinglePartPattern,
}

impl ActivationPattern {
    pub fn new(real: SinglePartPattern, imag: SinglePartPattern) -> Result<Self> {
        if real.n_tx() != imag.n_tx() {
            return Err(Error::DimensionMismatch(format!(
                "real part n_tx = {} but imaginary part n_tx = {}",
                real.n_tx(),
                imag.n_tx()
            )));
        }
        if real.k() != imag.k() {
            return Err(Error::DimensionMismatch(format!(
                "real part k = {} but imaginary part k = {}",
                real.k(),
                imag.k()
            )));
        }
        Ok(ActivationPattern { real, imag })
    }

    /// Both parts select the same antennas (the SM/GSM constraint).
    pub fn matched_parts(&self) -> bool {
        self.real == self.imag
    }

    pub fn real(&self) -> &SinglePartPattern {
        &self.real
    }

    pub fn imag(&self) -> &SinglePartPattern {
        &self.imag
    }

    pub fn n_tx(&self) -> usize {
        self.real.n_tx()
    }

    pub fn k(&self) -> usize {
        self.real.k()
    }
}

/// How an AP set was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignMethod {
    Combinatorial,
    Equiprobable,
    Ilp,
    Explicit,
}

impl DesignMethod {
    pub fn name(self) -> &'static str {
        match self {
            DesignMethod::Combinatorial => "comb",
            DesignMethod::Equiprobable => "equiprob",
            DesignMethod::Ilp => "ilp",
            DesignMethod::Explicit => "explicit",
        }
    }
}

impl std::str::FromStr for DesignMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "comb" | "combinatorial" => Ok(DesignMethod::Combinatorial),
            "equiprob" | "equiprobable" => Ok(DesignMethod::Equiprobable),
            "ilp" => Ok(DesignMethod::Ilp),
            "explicit" => Ok(DesignMethod::Explicit),
            other => Err(format!("unknown design method '{other}'")),
        }
    }
}

/// Ordered set of Q joint activation patterns plus construction metadata.
#[derive(Debug, Clone)]
pub struct ApSet {
    pub patterns: Vec<ActivationPattern>,
    pub design_method: DesignMethod,
    /// Single-part lists whose Cartesian product generated `patterns`, when
    /// the set was built that way.
    pub single_part_real: Option<Vec<SinglePartPattern>>,
    pub single_part_imag: Option<Vec<SinglePartPattern>>,
}

impl ApSet {
    pub fn from_patterns(patterns: Vec<ActivationPattern>, design_method: DesignMethod) -> Self {
        ApSet {
            patterns,
            design_method,
            single_part_real: None,
            single_part_imag: None,
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Enumerates all binom(n_tx, k) single-part patterns in lexicographic order
/// of the sorted antenna-index tuple.
pub fn enumerate_single_part_aps(n_tx: usize, k: usize) -> Result<Vec<SinglePartPattern>> {
    if k == 0 || k > n_tx {
        return Err(Error::InvalidConfig {
            field: "k",
            message: format!("k = {k} must satisfy 1 <= k <= n_tx = {n_tx}"),
        });
    }
    let count = binomial(n_tx as u64, k as u64).ok_or(Error::EnumerationCap {
        count: u64::MAX,
        cap: ENUMERATION_CAP,
    })?;
    if count > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            count,
            cap: ENUMERATION_CAP,
        });
    }

    let mut out = Vec::with_capacity(count as usize);
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        out.push(SinglePartPattern {
            n_tx,
            antennas: indices.clone(),
        });
        // Advance to the next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if indices[i] != i + n_tx - k {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// Checks that an AP set satisfies the structural constraints of the scheme in
/// `config`; returns `Ok(())` iff the set passes through unchanged.
pub fn validate_scheme(config: &SystemConfig, ap_set: &ApSet) -> Result<()> {
    config.validate()?;
    if ap_set.len() != config.q {
        return Err(Error::InvalidConfig {
            field: "q",
            message: format!("config q = {} but set holds {} patterns", config.q, ap_set.len()),
        });
    }
    let mut seen: HashSet<&ActivationPattern> = HashSet::with_capacity(ap_set.len());
    for (index, pattern) in ap_set.patterns.iter().enumerate() {
        if pattern.n_tx() != config.n_tx {
            return Err(Error::SchemeViolation {
                pattern: Some(index),
                message: format!("pattern n_tx = {} but config n_tx = {}", pattern.n_tx(), config.n_tx),
            });
        }
        if pattern.k() != config.k {
            return Err(Error::SchemeViolation {
                pattern: Some(index),
                message: format!("pattern k = {} but config k = {}", pattern.k(), config.k),
            });
        }
        if config.scheme.requires_matched_parts() && !pattern.matched_parts() {
            return Err(Error::SchemeViolation {
                pattern: Some(index),
                message: format!("scheme {} requires a_real == a_imag", config.scheme.name()),
            });
        }
        if !seen.insert(pattern) {
            return Err(Error::SchemeViolation {
                pattern: Some(index),
                message: "duplicate activation pattern".into(),
            });
        }
    }
    Ok(())
}

/// Serializes patterns to the text format, one per line: `R:{1,2} I:{3,4}`
/// with 1-based antenna indices.
pub fn write_ap_text(patterns: &[ActivationPattern]) -> String {
    let mut out = String::new();
    for pattern in patterns {
        let fmt = |part: &SinglePartPattern| {
            part.antennas()
                .iter()
                .map(|a| (a + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(out, "R:{{{}}} I:{{{}}}", fmt(pattern.real()), fmt(pattern.imag()));
    }
    out
}

fn parse_part(token: &str, prefix: &str, n_tx: usize, line: usize) -> Result<SinglePartPattern> {
    let body = token
        .strip_prefix(prefix)
        .and_then(|rest| rest.strip_prefix('{'))
        .and_then(|rest| rest.strip_suffix('}'))
        .ok_or_else(|| Error::PatternParse {
            line,
            message: format!("expected `{prefix}{{...}}`, got `{token}`"),
        })?;
    let mut antennas = Vec::new();
    for field in body.split(',') {
        let value: usize = field.trim().parse().map_err(|_| Error::PatternParse {
            line,
            message: format!("invalid antenna index `{field}`"),
        })?;
        if value == 0 {
            return Err(Error::PatternParse {
                line,
                message: "antenna indices are 1-based".into(),
            });
        }
        antennas.push(value - 1);
    }
    SinglePartPattern::new(n_tx, antennas).map_err(|e| Error::PatternParse {
        line,
        message: e.to_string(),
    })
}

/// Parses the text format produced by [`write_ap_text`]; `#` starts a comment
/// and blank lines are skipped.
pub fn parse_ap_text(text: &str, n_tx: usize) -> Result<Vec<ActivationPattern>> {
    let mut patterns = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (r_tok, i_tok) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(r), Some(i), None) => (r, i),
            _ => {
                return Err(Error::PatternParse {
                    line: line_no,
                    message: "expected exactly `R:{...} I:{...}`".into(),
                })
            }
        };
        let real = parse_part(r_tok, "R:", n_tx, line_no)?;
        let imag = parse_part(i_tok, "I:", n_tx, line_no)?;
        patterns.push(ActivationPattern::new(real, imag).map_err(|e| Error::PatternParse {
            line: line_no,
            message: e.to_string(),
        })?);
    }
    Ok(patterns)
}
