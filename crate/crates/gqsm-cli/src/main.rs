//! Command-line harness: SNR sweeps, pattern design, figure presets, CSV
//! emission, and SVG plotting.

mod csvio;
mod plot;
mod presets;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use gqsm::{
    activation_stats, ami_continuous, ami_discrete, build_codebook, build_design,
    divergence_experiment, parse_ap_text, psk_constellation, validate_scheme, write_ap_text,
    ApSet, DensityMethod, DesignMethod, Scheme, SystemConfig,
};

use csvio::ResultRow;
use presets::PresetName;
use sweep::{expand_snr_spec, parse_config};

/// Errors mapped to process exit codes: 2 config, 3 numerical, 4 I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<gqsm::Error> for CliError {
    fn from(err: gqsm::Error) -> Self {
        match err {
            gqsm::Error::Factorization(m) => CliError::Numerical(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

#[derive(Parser)]
#[command(name = "gqsm", version, about = "Mutual-information simulator for spatial index modulation")]
struct Cli {
    /// Master seed for all Monte Carlo substreams.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads (default: all cores). Results are identical either way.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output file (CSV/SVG/pattern commands) or directory (preset).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Key = value configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ModelArgs {
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    ntx: Option<usize>,
    #[arg(long)]
    nrx: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// SNR points: comma list "0,5,10" or range "start:step:stop".
    #[arg(long)]
    snr: Option<String>,
    #[arg(long)]
    sigma_s2: Option<f64>,
    #[arg(long)]
    n_outer: Option<usize>,
    /// Pattern file in the `R:{..} I:{..}` text format.
    #[arg(long)]
    ap_file: Option<PathBuf>,
    /// Design method when no pattern file is given: comb | equiprob | ilp.
    #[arg(long)]
    ap_method: Option<DesignMethod>,
    /// Use the per-symbol variance convention sigma_s^2 / (2K).
    #[arg(long, default_value_t = false)]
    halve_symbol_power: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Continuous-input AMI sweep (I_s, I_A, total) over SNR.
    AmiContinuous {
        #[command(flatten)]
        model: ModelArgs,
        /// Density evaluator: closed | mc | k1.
        #[arg(long)]
        density: Option<DensityMethod>,
        /// Inner sample size for the mc evaluator.
        #[arg(long)]
        n_inner: Option<usize>,
    },
    /// Discrete-input AMI sweep for a PSK codebook.
    AmiDiscrete {
        #[command(flatten)]
        model: ModelArgs,
        /// PSK constellation order L.
        #[arg(long)]
        constellation_order: Option<usize>,
    },
    /// Design a single-part activation-pattern set and write the text format.
    ApDesign {
        /// comb | equiprob | ilp.
        #[arg(long)]
        method: DesignMethod,
        #[arg(long)]
        ntx: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        qpart: usize,
        /// Also emit the qpart^2 Cartesian-product joint patterns.
        #[arg(long, default_value_t = false)]
        product: bool,
        /// Time budget for the exact solver, in seconds.
        #[arg(long, default_value_t = 10.0)]
        time_budget: f64,
    },
    /// Monte Carlo vs closed-form symbol AMI on the fixed (2,2,1) setup.
    McError {
        /// Inner sample sizes, comma separated.
        #[arg(long, default_value = "10,100,1000,10000")]
        n_inner_list: String,
        #[arg(long, default_value = "0:5:50")]
        snr: String,
        #[arg(long, default_value_t = 10_000)]
        n_outer: usize,
    },
    /// Reproduce a canned experiment (fig1..fig5) at a given scale.
    Preset {
        /// fig1 | fig2 | fig3 | fig4 | fig5.
        #[arg(long)]
        name: PresetName,
        /// Fraction of the full-size run; 0.01 gives 10^4 outer realizations.
        #[arg(long, default_value_t = 0.01)]
        scale: f64,
        /// Record real wall times in the CSV (breaks byte-reproducibility).
        #[arg(long, default_value_t = false)]
        timing: bool,
    },
    /// Render a result CSV as an SVG line plot.
    Plot {
        /// Input CSV produced by the sweep or preset commands.
        #[arg(long)]
        csv: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {err}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

/// Merged settings from defaults, the optional config file, and flags.
struct Effective {
    config: SystemConfig,
    snr_points: Vec<f64>,
    density: DensityMethod,
    ap_file: Option<PathBuf>,
    ap_method: DesignMethod,
    constellation_order: usize,
    out: Option<PathBuf>,
}

fn resolve(
    model: &ModelArgs,
    file: Option<&PathBuf>,
    seed: u64,
    out: Option<PathBuf>,
    density: Option<DensityMethod>,
    n_inner: Option<usize>,
    constellation_order: Option<usize>,
) -> Result<Effective, CliError> {
    let spec = match file {
        Some(path) => Some(parse_config(path)?),
        None => None,
    };
    let base = spec.as_ref();

    let scheme = model
        .scheme
        .or(base.and_then(|s| s.scheme))
        .ok_or_else(|| CliError::Config("missing required field `scheme`".into()))?;
    let n_tx = model
        .ntx
        .or(base.and_then(|s| s.n_tx))
        .ok_or_else(|| CliError::Config("missing required field `n_tx`".into()))?;
    let n_rx = model
        .nrx
        .or(base.and_then(|s| s.n_rx))
        .ok_or_else(|| CliError::Config("missing required field `n_rx`".into()))?;
    let k = model
        .k
        .or(base.and_then(|s| s.k))
        .ok_or_else(|| CliError::Config("missing required field `k`".into()))?;
    let q = model
        .q
        .or(base.and_then(|s| s.q))
        .ok_or_else(|| CliError::Config("missing required field `q`".into()))?;

    let mut config = SystemConfig::new(scheme, n_tx, n_rx, k, q);
    config.master_seed = base.and_then(|s| s.seed).unwrap_or(seed);
    if let Some(s2) = model.sigma_s2.or(base.and_then(|s| s.sigma_s2)) {
        config.sigma_s2 = s2;
    }
    if let Some(n) = model.n_outer.or(base.and_then(|s| s.n_outer)) {
        config.n_outer = n;
    }
    if let Some(n) = n_inner.or(base.and_then(|s| s.n_inner)) {
        config.n_inner = n;
    }
    config.halve_symbol_power = model.halve_symbol_power;
    config.validate().map_err(CliError::from)?;

    let snr_spec = model
        .snr
        .clone()
        .or(base.and_then(|s| s.snr.clone()))
        .unwrap_or_else(|| "0:5:40".to_string());
    let snr_points = expand_snr_spec(&snr_spec).map_err(CliError::Config)?;

    Ok(Effective {
        config,
        snr_points,
        density: density
            .or(base.and_then(|s| s.density))
            .unwrap_or(DensityMethod::ClosedForm),
        ap_file: model.ap_file.clone().or(base.and_then(|s| s.ap_file.clone())),
        ap_method: model
            .ap_method
            .or(base.and_then(|s| s.ap_method))
            .unwrap_or(DesignMethod::Combinatorial),
        constellation_order: constellation_order
            .or(base.and_then(|s| s.constellation_order))
            .unwrap_or(4),
        out: out.or(base.and_then(|s| s.out.clone())),
    })
}

fn load_ap_set(eff: &Effective) -> Result<ApSet, CliError> {
    let set = match &eff.ap_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let patterns = parse_ap_text(&text, eff.config.n_tx).map_err(CliError::from)?;
            ApSet::from_patterns(patterns, DesignMethod::Explicit)
        }
        None => build_design(&eff.config, eff.ap_method).map_err(CliError::from)?,
    };
    validate_scheme(&eff.config, &set).map_err(CliError::from)?;
    Ok(set)
}

fn emit_rows(rows: &[ResultRow], out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = csvio::render_csv(rows);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn check_finite(rows: &[ResultRow]) -> Result<(), CliError> {
    for row in rows {
        if !row.is_finite() {
            return Err(CliError::Numerical(format!(
                "non-finite estimate in row for snr_db = {}",
                row.snr_db
            )));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::AmiContinuous { model, density, n_inner } => {
            let eff = resolve(&model, cli.config.as_ref(), cli.seed, cli.out, density, n_inner, None)?;
            let ap_set = load_ap_set(&eff)?;
            let mut rows = Vec::new();
            for &snr_db in &eff.snr_points {
                let config = eff.config.clone().with_snr_db(snr_db);
                let est = ami_continuous(&config, &ap_set, eff.density).map_err(CliError::from)?;
                rows.push(ResultRow::from_continuous(
                    "ami-continuous",
                    &config,
                    ap_set.design_method,
                    snr_db,
                    &est,
                ));
            }
            check_finite(&rows)?;
            emit_rows(&rows, eff.out.as_ref())
        }
        Command::AmiDiscrete { model, constellation_order } => {
            let eff = resolve(
                &model,
                cli.config.as_ref(),
                cli.seed,
                cli.out,
                None,
                None,
                constellation_order,
            )?;
            let mut config = eff.config.clone();
            config.constellation_order = Some(eff.constellation_order);
            config.validate().map_err(CliError::from)?;
            let ap_set = load_ap_set(&eff)?;
            let constellation = psk_constellation(eff.constellation_order);
            let codebook = build_codebook(&config, &ap_set, &constellation).map_err(CliError::from)?;
            let mut rows = Vec::new();
            for &snr_db in &eff.snr_points {
                let sigma_n2 = config.sigma_s2 / 10f64.powf(snr_db / 10.0);
                let est = ami_discrete(&codebook, config.n_rx, sigma_n2, config.n_outer, config.master_seed);
                rows.push(ResultRow::from_discrete(
                    "ami-discrete",
                    &config,
                    ap_set.design_method,
                    snr_db,
                    &est,
                ));
            }
            check_finite(&rows)?;
            emit_rows(&rows, eff.out.as_ref())
        }
        Command::ApDesign { method, ntx, k, qpart, product, time_budget } => {
            let parts = match method {
                DesignMethod::Combinatorial => gqsm::combinatorial_design(ntx, k, qpart).map_err(CliError::from)?,
                DesignMethod::Equiprobable => gqsm::equiprobable_design(ntx, k, qpart).map_err(CliError::from)?,
                DesignMethod::Ilp => {
                    let design = gqsm::ilp_design(ntx, k, qpart, Duration::from_secs_f64(time_budget))
                        .map_err(CliError::from)?;
                    if !design.optimal {
                        eprintln!("note: time budget exhausted; emitting best incumbent");
                    }
                    design.patterns
                }
                DesignMethod::Explicit => {
                    return Err(CliError::Config("ap-design requires comb, equiprob, or ilp".into()))
                }
            };
            let stats = activation_stats(&parts);
            println!("antenna activation counts: {:?}", stats.counts);
            println!("spread (max - min): {}", stats.spread);
            println!(
                "activation probabilities: [{}]",
                stats
                    .probabilities
                    .iter()
                    .map(|p| format!("{p:.4}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let set = if product {
                gqsm::joint_ap_set(&parts, &parts, method).map_err(CliError::from)?
            } else {
                gqsm::matched_ap_set(&parts, method).map_err(CliError::from)?
            };
            let text = write_ap_text(&set.patterns);
            match cli.out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::McError { n_inner_list, snr, n_outer } => {
            let n_inners: Vec<usize> = n_inner_list
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("bad inner sample size `{s}`"))))
                .collect::<Result<_, _>>()?;
            let snr_points = expand_snr_spec(&snr).map_err(CliError::Config)?;
            let config = SystemConfig::new(Scheme::Qsm, 2, 2, 1, 4)
                .with_n_outer(n_outer)
                .with_seed(cli.seed);
            let rows = divergence_experiment(&config, &n_inners, &snr_points).map_err(CliError::from)?;
            let mut text = String::from("snr_db,n_inner,i_s_mc,i_s_closed,gap\n");
            for row in &rows {
                if !(row.i_s_mc.is_finite() && row.i_s_closed.is_finite()) {
                    return Err(CliError::Numerical(format!(
                        "non-finite symbol AMI at snr_db = {}",
                        row.snr_db
                    )));
                }
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.snr_db, row.n_inner, row.i_s_mc, row.i_s_closed, row.gap
                ));
            }
            match cli.out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Preset { name, scale, timing } => {
            let out_dir = cli.out.unwrap_or_else(|| PathBuf::from("."));
            let files = presets::run_preset(name, scale, cli.seed, &out_dir, timing)?;
            for file in files {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
        Command::Plot { csv } => {
            let out = cli
                .out
                .ok_or_else(|| CliError::Config("plot requires --out <svg>".into()))?;
            plot::emit_plot(&csv, &out)
        }
    }
}
