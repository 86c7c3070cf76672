//! `dfrc` — dictionaries, symbol-error sweeps, angle-robustness studies,
//! beampattern exports and closed-form rate curves for sparse-array
//! radar-communications signaling.
//!
//! Every subcommand accepts `--config <json>` plus per-flag overrides; CSV
//! goes to `--out` or stdout. Exit codes: 0 success, 2 configuration error,
//! 3 infeasible beampattern requirement. `DFRC_THREADS` caps the worker
//! count (0 or unset = all cores).

use clap::{Args, Parser, Subcommand};
use dfrc_core::config::{DictMode, RunConfig};
use dfrc_core::dictionary::{distance_stats, Scheme, SymbolDictionary};
use dfrc_core::pattern::{beampattern, design_minimax_weights, PatternGrid, PhaseProfile};
use dfrc_core::report;
use dfrc_core::signaling::bits_per_symbol;
use dfrc_core::sim::{data_rate, run_angle_robustness, run_ser_sweep, ChannelModel, SimOptions};
use dfrc_core::Error as CoreError;
use num_complex::Complex64;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dfrc", version, about = "Sparse-array DFRC signaling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a symbol dictionary; writes its JSON and a distance-stats CSV.
    BuildDict(BuildDictArgs),
    /// Monte Carlo symbol-error sweep over SNR.
    Simulate(SimulateArgs),
    /// Symbol-error rate versus communication-angle estimation error.
    Robustness(RobustnessArgs),
    /// Beampattern of every codeword in a dictionary.
    Pattern(PatternArgs),
    /// Closed-form error-rate curves.
    Rates(RatesArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ConfigArg {
    fn load(&self) -> Result<RunConfig, CliError> {
        match &self.config {
            Some(path) => RunConfig::from_path(path).map_err(CliError::config),
            None => Ok(RunConfig::default()),
        }
    }
}

#[derive(Args)]
struct BuildDictArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// comm | radar | hybrid | regularized (default: inferred from scheme)
    #[arg(long)]
    mode: Option<String>,
    /// Dictionary size (a power of two).
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, alias = "K")]
    k: Option<usize>,
    /// Output dictionary JSON.
    #[arg(long, default_value = "dictionary.json")]
    out: PathBuf,
    /// Output distance-stats CSV.
    #[arg(long, default_value = "distance_stats.csv")]
    stats: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// SNR grid in dB: `start:step:end` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Bits per symbol (sub-rate of the dictionary).
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    symbols: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Load the dictionary from a JSON file instead of rebuilding it.
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Route symbols through waveform synthesis and matched filtering.
    #[arg(long)]
    timedomain: bool,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RobustnessArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Angle-error standard deviations in degrees: `start:step:end` or comma list.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 200)]
    symbols_per_trial: u64,
    /// Operating SNR in dB.
    #[arg(long, default_value_t = 10.0)]
    snr_db: f64,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PatternArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Reporting grid step in degrees.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Cap on the number of codewords to export.
    #[arg(long)]
    max_codewords: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RatesArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// selection | hybrid | regularized
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "K", alias = "k")]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error wrapper deciding the process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(err: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            message: err.to_string(),
        }
    }

    fn from_core(err: CoreError) -> Self {
        let code = match &err {
            CoreError::InfeasibleSidelobe { .. } | CoreError::NotEnoughFeasibleSubarrays { .. } => {
                3
            }
            CoreError::Io(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }

    fn io(err: std::io::Error) -> Self {
        Self {
            code: 1,
            message: err.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        Self::from_core(err)
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::BuildDict(args) => build_dict(args),
        Command::Simulate(args) => simulate(args),
        Command::Robustness(args) => robustness(args),
        Command::Pattern(args) => pattern(args),
        Command::Rates(args) => rates(args),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |t: &str| CliError::config(format!("cannot parse grid `{t}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let start: f64 = parts[0].trim().parse().map_err(|_| bad(text))?;
        let step: f64 = parts[1].trim().parse().map_err(|_| bad(text))?;
        let end: f64 = parts[2].trim().parse().map_err(|_| bad(text))?;
        if step <= 0.0 || end < start {
            return Err(bad(text));
        }
        let mut grid = Vec::new();
        let mut x = start;
        while x <= end + 1e-9 {
            grid.push(x);
            x += step;
        }
        return Ok(grid);
    }
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad(text)))
        .collect()
}

fn parse_mode(text: &str) -> Result<DictMode, CliError> {
    match text {
        "comm" => Ok(DictMode::Comm),
        "radar" => Ok(DictMode::Radar),
        "hybrid" => Ok(DictMode::Hybrid),
        "regularized" => Ok(DictMode::Regularized),
        other => Err(CliError::config(format!("unknown dictionary mode `{other}`"))),
    }
}

fn parse_scheme(text: &str) -> Result<Scheme, CliError> {
    match text {
        "selection" => Ok(Scheme::Selection),
        "hybrid" => Ok(Scheme::Hybrid),
        "regularized" => Ok(Scheme::Regularized),
        other => Err(CliError::config(format!("unknown scheme `{other}`"))),
    }
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => Ok(Box::new(
            std::fs::File::create(p).map_err(CliError::io)?,
        )),
        None => Ok(Box::new(std::io::stdout())),
    }
}

fn load_dictionary(
    cfg: &RunConfig,
    explicit: &Option<PathBuf>,
) -> Result<SymbolDictionary, CliError> {
    match explicit {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::io)?;
            Ok(SymbolDictionary::from_json(&text)?)
        }
        None => Ok(cfg.dictionary(None)?),
    }
}

fn build_dict(args: BuildDictArgs) -> Result<(), CliError> {
    let mut cfg = args.config.load()?;
    if let Some(m) = args.m {
        cfg.geometry.m = m;
    }
    if let Some(k) = args.k {
        cfg.k = Some(k);
    }
    if let Some(size) = args.size {
        cfg.dictionary.size = size;
    }
    let mode = match &args.mode {
        Some(text) => parse_mode(text)?,
        None => cfg.effective_mode(),
    };
    let dict = cfg.build_dictionary(mode, None)?;
    let stats = distance_stats(&dict)?;

    std::fs::write(&args.out, dict.to_json()?).map_err(CliError::io)?;
    let mut stats_out = std::fs::File::create(&args.stats).map_err(CliError::io)?;
    report::write_distance_stats_csv(&stats, &mut stats_out).map_err(CliError::io)?;

    eprintln!(
        "dictionary: scheme={} M={} K={} size={} min_d2={:.6} max_d2={:.6} -> {}",
        dict.scheme(),
        dict.m(),
        dict.k(),
        dict.len(),
        stats.global_min,
        stats.global_max,
        args.out.display()
    );
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let mut cfg = args.config.load()?;
    if let Some(snr) = &args.snr {
        cfg.snr_grid_db = parse_grid(snr)?;
    }
    if let Some(bits) = args.bits {
        cfg.bits_per_symbol = Some(bits);
    }
    if let Some(symbols) = args.symbols {
        cfg.num_symbols = symbols;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let dict = load_dictionary(&cfg, &args.dict)?;
    let scheme_cfg = cfg.scheme_config(dict)?;
    let channel = ChannelModel::new(Complex64::new(1.0, 0.0), 1.0)?;
    let opts = SimOptions {
        time_domain: args.timedomain,
        ..SimOptions::default()
    };
    let result = run_ser_sweep(&scheme_cfg, &cfg.monte_carlo(), &channel, &opts)?;
    eprintln!(
        "scheme={} bits={} data_rate={} bps",
        result.scheme,
        result.bits,
        data_rate(&scheme_cfg)?
    );
    let mut out = out_writer(&args.out)?;
    report::write_sweep_csv(&result, &mut out).map_err(CliError::io)?;
    Ok(())
}

fn robustness(args: RobustnessArgs) -> Result<(), CliError> {
    let mut cfg = args.config.load()?;
    if let Some(sigma) = &args.sigma {
        cfg.sigma_grid_deg = parse_grid(sigma)?;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(bits) = args.bits {
        cfg.bits_per_symbol = Some(bits);
    }
    let dict = load_dictionary(&cfg, &args.dict)?;
    let scheme_cfg = cfg.scheme_config(dict)?;
    let channel = ChannelModel::for_snr_db(args.snr_db);
    let result = run_angle_robustness(
        &scheme_cfg,
        &cfg.sigma_grid_deg,
        cfg.trials,
        args.symbols_per_trial,
        &channel,
        cfg.seed,
        &SimOptions::default(),
    )?;
    let mut out = out_writer(&args.out)?;
    report::write_robustness_csv(&result, &mut out).map_err(CliError::io)?;
    Ok(())
}

fn pattern(args: PatternArgs) -> Result<(), CliError> {
    let cfg = args.config.load()?;
    let dict = load_dictionary(&cfg, &args.dict)?;
    let geometry = cfg.array_geometry()?;
    let receive = cfg.receive_array()?;
    let grid = cfg.optimization_grid()?;
    let eps = cfg.sidelobe_linear();
    let angles = PatternGrid::full_span(args.step);
    let sector = (
        cfg.mainlobe.min_deg.to_radians(),
        cfg.mainlobe.max_deg.to_radians(),
    );
    let count = args.max_codewords.unwrap_or(dict.len()).min(dict.len());

    let mut out = out_writer(&args.out)?;
    report::write_pattern_header(&mut out).map_err(CliError::io)?;
    for entry in &dict.entries()[..count] {
        let (w, _rho) = design_minimax_weights(
            &entry.sub,
            &geometry,
            &receive,
            &grid,
            eps * 0.85,
            PhaseProfile::default(),
        )?;
        let gains = beampattern(&w, &entry.sub, &geometry, &receive, &angles)?;
        let peak = angles
            .iter()
            .zip(&gains)
            .filter(|(&a, _)| a >= sector.0 && a <= sector.1)
            .map(|(_, &g)| g)
            .fold(0.0f64, f64::max);
        report::write_pattern_rows(entry.bit_index, &angles, &gains, peak, &mut out)
            .map_err(CliError::io)?;
    }
    Ok(())
}

fn rates(args: RatesArgs) -> Result<(), CliError> {
    let mut cfg = args.config.load()?;
    if let Some(text) = &args.scheme {
        cfg.scheme = parse_scheme(text)?;
    }
    if let Some(m) = args.m {
        cfg.geometry.m = m;
    }
    if let Some(k) = args.k {
        cfg.k = Some(k);
    }
    if let Some(snr) = &args.snr {
        cfg.snr_grid_db = parse_grid(snr)?;
    }
    let m = cfg.geometry.m;
    let k = cfg.subarray_size();
    eprintln!(
        "scheme={} M={m} K={k} bits_per_symbol={}",
        cfg.scheme,
        bits_per_symbol(cfg.scheme, m, k)?
    );
    let mut out = out_writer(&args.out)?;
    report::write_rates_csv(cfg.scheme, m, k, &cfg.snr_grid_db, &mut out)?;
    Ok(())
}
