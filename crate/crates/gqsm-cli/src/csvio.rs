//! Result rows and the CSV schema shared by sweeps and presets.
//!
//! Floats are written with Rust's shortest round-trip formatting, so emitted
//! files re-parse to bit-identical values. Cells for quantities a run does not
//! produce (e.g. the I_s/I_A split of a discrete estimate) stay empty.

use gqsm::{AmiEstimate, DesignMethod, DiscreteAmiEstimate, SystemConfig};

pub const HEADER: &str =
    "experiment_id,scheme,design_method,snr_db,i_s,i_a,i_total,stderr,n_outer,n_inner,density_method,wall_time_s,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment_id: String,
    pub scheme: String,
    pub design_method: String,
    pub snr_db: f64,
    pub i_s: Option<f64>,
    pub i_a: Option<f64>,
    pub i_total: f64,
    pub stderr: f64,
    pub n_outer: u64,
    pub n_inner: u64,
    pub density_method: String,
    pub wall_time_s: f64,
    pub seed: u64,
}

impl ResultRow {
    pub fn from_continuous(
        experiment_id: &str,
        config: &SystemConfig,
        design: DesignMethod,
        snr_db: f64,
        est: &AmiEstimate,
    ) -> Self {
        ResultRow {
            experiment_id: experiment_id.to_string(),
            scheme: config.scheme.name().to_string(),
            design_method: design.name().to_string(),
            snr_db,
            i_s: Some(est.i_s_bits),
            i_a: Some(est.i_a_bits),
            i_total: est.i_total_bits,
            stderr: est.stderr_bits,
            n_outer: est.n_outer as u64,
            n_inner: est.n_inner as u64,
            density_method: est.density_method.name().to_string(),
            wall_time_s: 0.0,
            seed: config.master_seed,
        }
    }

    pub fn from_discrete(
        experiment_id: &str,
        config: &SystemConfig,
        design: DesignMethod,
        snr_db: f64,
        est: &DiscreteAmiEstimate,
    ) -> Self {
        ResultRow {
            experiment_id: experiment_id.to_string(),
            scheme: config.scheme.name().to_string(),
            design_method: design.name().to_string(),
            snr_db,
            i_s: None,
            i_a: None,
            i_total: est.ami_bits,
            stderr: est.stderr_bits,
            n_outer: est.n_outer as u64,
            n_inner: 0,
            density_method: "discrete".to_string(),
            wall_time_s: 0.0,
            seed: config.master_seed,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.snr_db.is_finite()
            && self.i_s.is_none_or(f64::is_finite)
            && self.i_a.is_none_or(f64::is_finite)
            && self.i_total.is_finite()
            && self.stderr.is_finite()
            && self.wall_time_s.is_finite()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment_id,
            r.scheme,
            r.design_method,
            r.snr_db,
            fmt_opt(r.i_s),
            fmt_opt(r.i_a),
            r.i_total,
            r.stderr,
            r.n_outer,
            r.n_inner,
            r.density_method,
            r.wall_time_s,
            r.seed
        ));
    }
    out
}

fn parse_opt(field: &str, line: usize, name: &str) -> Result<Option<f64>, String> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| format!("line {line}: bad {name} `{field}`"))
}

fn parse_req<T: std::str::FromStr>(field: &str, line: usize, name: &str) -> Result<T, String> {
    field
        .parse::<T>()
        .map_err(|_| format!("line {line}: bad {name} `{field}`"))
}

/// Parses CSV text in the [`HEADER`] schema; validates column count and that
/// present numeric fields are finite.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == HEADER => {}
        Some((_, header)) => return Err(format!("unexpected header `{header}`")),
        None => return Err("empty file".into()),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(format!("line {line_no}: expected 13 fields, got {}", fields.len()));
        }
        let row = ResultRow {
            experiment_id: fields[0].to_string(),
            scheme: fields[1].to_string(),
            design_method: fields[2].to_string(),
            snr_db: parse_req(fields[3], line_no, "snr_db")?,
            i_s: parse_opt(fields[4], line_no, "i_s")?,
            i_a: parse_opt(fields[5], line_no, "i_a")?,
            i_total: parse_req(fields[6], line_no, "i_total")?,
            stderr: parse_req(fields[7], line_no, "stderr")?,
            n_outer: parse_req(fields[8], line_no, "n_outer")?,
            n_inner: parse_req(fields[9], line_no, "n_inner")?,
            density_method: fields[10].to_string(),
            wall_time_s: parse_req(fields[11], line_no, "wall_time_s")?,
            seed: parse_req(fields[12], line_no, "seed")?,
        };
        if !row.is_finite() {
            return Err(format!("line {line_no}: non-finite numeric field"));
        }
        rows.push(row);
    }
    Ok(rows)
}
