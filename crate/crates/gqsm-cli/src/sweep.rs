//! `key = value` configuration files and SNR range expansion.

use std::path::{Path, PathBuf};

use gqsm::{DensityMethod, DesignMethod, Scheme};

use crate::CliError;

/// Parsed sweep settings; everything optional so flags can fill the gaps.
#[derive(Debug, Default, Clone)]
pub struct SweepSpec {
    pub scheme: Option<Scheme>,
    pub n_tx: Option<usize>,
    pub n_rx: Option<usize>,
    pub k: Option<usize>,
    pub q: Option<usize>,
    pub snr: Option<String>,
    pub sigma_s2: Option<f64>,
    pub n_outer: Option<usize>,
    pub n_inner: Option<usize>,
    pub seed: Option<u64>,
    pub density: Option<DensityMethod>,
    pub constellation_order: Option<usize>,
    pub ap_method: Option<DesignMethod>,
    pub ap_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Expands "0:5:40" to {0,5,...,40} or parses a comma list; points must be
/// strictly increasing.
pub fn expand_snr_spec(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    let points: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("bad SNR range `{spec}`; expected start:step:stop"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| format!("bad SNR start `{}`", parts[0]))?;
        let step: f64 = parts[1].trim().parse().map_err(|_| format!("bad SNR step `{}`", parts[1]))?;
        let stop: f64 = parts[2].trim().parse().map_err(|_| format!("bad SNR stop `{}`", parts[2]))?;
        if step <= 0.0 || stop < start {
            return Err(format!("bad SNR range `{spec}`; need step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step).round() as usize + 1;
        (0..count).map(|i| start + step * i as f64).filter(|&v| v <= stop + 1e-9).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad SNR value `{s}`")))
            .collect::<Result<_, _>>()?
    };
    if points.is_empty() {
        return Err("empty SNR list".into());
    }
    for pair in points.windows(2) {
        if pair[1] <= pair[0] {
            return Err("SNR points must be strictly increasing".into());
        }
    }
    Ok(points)
}

fn parse_value<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T, CliError> {
    value.parse::<T>().map_err(|_| {
        CliError::Config(format!("config line {line}: invalid value `{value}` for `{key}`"))
    })
}

/// Parses a `key = value` file with `#` comments. Unknown keys are rejected
/// with the offending line number; field validation errors name the field.
pub fn parse_config(path: &Path) -> Result<SweepSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut spec = SweepSpec::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("config line {line_no}: expected `key = value`"))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "scheme" => spec.scheme = Some(parse_value(value, line_no, key)?),
            "n_tx" => spec.n_tx = Some(parse_value(value, line_no, key)?),
            "n_rx" => spec.n_rx = Some(parse_value(value, line_no, key)?),
            "k" => spec.k = Some(parse_value(value, line_no, key)?),
            "q" => spec.q = Some(parse_value(value, line_no, key)?),
            "snr" => spec.snr = Some(value.to_string()),
            "sigma_s2" => spec.sigma_s2 = Some(parse_value(value, line_no, key)?),
            "n_outer" => spec.n_outer = Some(parse_value(value, line_no, key)?),
            "n_inner" => spec.n_inner = Some(parse_value(value, line_no, key)?),
            "seed" => spec.seed = Some(parse_value(value, line_no, key)?),
            "density" => spec.density = Some(parse_value(value, line_no, key)?),
            "constellation_order" => spec.constellation_order = Some(parse_value(value, line_no, key)?),
            "ap_method" => spec.ap_method = Some(parse_value(value, line_no, key)?),
            "ap_file" => spec.ap_file = Some(PathBuf::from(value)),
            "out" => spec.out = Some(PathBuf::from(value)),
            "workers" => spec.workers = Some(parse_value(value, line_no, key)?),
            other => {
                return Err(CliError::Config(format!(
                    "config line {line_no}: unknown key `{other}`"
                )))
            }
        }
    }
    Ok(spec)
}
