//! Seeded Monte Carlo experiments: symbol-error sweeps over SNR and the
//! angle-robustness study.
//!
//! Noise is injected at the matched-filter output, which is the sufficient
//! statistic of the channel; the optional time-domain path synthesizes the
//! pulse, adds white noise per fast-time sample and matched-filters it, to
//! validate that shortcut. Every symbol draws its randomness from a counter
//! stream keyed by (seed, point, symbol), so parallel and serial runs agree
//! bit-exactly and error counts merge by plain addition.

use crate::dictionary::Scheme;
use crate::error::{Error, Result};
use crate::exec;
use crate::rng::CounterRng;
use crate::signaling::{
    bits_per_symbol, comm_observation, decode_nearest_index, regularized_error_rates,
    selection_ser_bound, SchemeConfig,
};
use crate::waveform::{matched_filter, WaveformBank};
use num_complex::Complex64;

/// Complex channel gain and per-branch complex noise variance;
/// `rho = |alpha|^2 / noise_var`.
#[derive(Debug, Clone, Copy)]
pub struct ChannelModel {
    alpha: Complex64,
    noise_var: f64,
}

impl ChannelModel {
    pub fn new(alpha: Complex64, noise_var: f64) -> Result<Self> {
        if alpha.norm_sqr() == 0.0 {
            return Err(Error::ZeroChannelGain);
        }
        if noise_var < 0.0 || !noise_var.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise variance {noise_var}"
            )));
        }
        Ok(Self { alpha, noise_var })
    }

    /// Unit gain at the given per-branch SNR (dB).
    pub fn for_snr_db(snr_db: f64) -> Self {
        let rho = 10f64.powf(snr_db / 10.0);
        Self {
            alpha: Complex64::new(1.0, 0.0),
            noise_var: 1.0 / rho,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    pub fn snr_linear(&self) -> f64 {
        self.alpha.norm_sqr() / self.noise_var
    }
}

/// Monte Carlo knobs for an SNR sweep.
#[derive(Debug, Clone)]
pub struct MonteCarloConfig {
    pub snr_grid_db: Vec<f64>,
    pub num_symbols: u64,
    pub seed: u64,
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidParameter("empty SNR grid".into()));
        }
        if self.snr_grid_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite SNR point".into()));
        }
        if self.num_symbols == 0 {
            return Err(Error::InvalidParameter("num_symbols must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    SnrDb,
    SigmaDeg,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub x: f64,
    pub symbols: u64,
    pub symbol_errors: u64,
    pub bit_errors: u64,
    pub theory_bound: f64,
}

impl SweepPoint {
    pub fn ser(&self) -> f64 {
        self.symbol_errors as f64 / self.symbols as f64
    }

    pub fn ber(&self, bits: u32) -> f64 {
        self.bit_errors as f64 / (self.symbols as f64 * bits as f64)
    }
}

/// Per-point error counts of one sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub scheme: Scheme,
    pub bits: u32,
    pub axis: SweepAxis,
    /// Operating SNR of an angle sweep; `None` for SNR sweeps.
    pub fixed_snr_db: Option<f64>,
    pub trials: Option<u64>,
    pub points: Vec<SweepPoint>,
}

/// Execution options shared by the sweep drivers.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub threads: Option<usize>,
    /// Route symbols through waveform synthesis and matched filtering instead
    /// of injecting noise at the filter output.
    pub time_domain: bool,
    /// Fast-time samples per pulse for the time-domain path.
    pub samples_per_pulse: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            threads: None,
            time_domain: false,
            samples_per_pulse: 64,
        }
    }
}

fn theory_bound(scheme: Scheme, rho: f64, m: usize, k: usize) -> Result<f64> {
    match scheme {
        Scheme::Selection | Scheme::Hybrid => selection_ser_bound(rho, m, k),
        Scheme::Regularized => Ok(regularized_error_rates(rho, k)?.1),
    }
}

fn decode_index(cfg: &SchemeConfig, y: &[Complex64], alpha: Complex64) -> Result<usize> {
    match cfg.scheme() {
        Scheme::Regularized => {
            let bits = crate::signaling::decode_regularized(cfg, y, alpha)?;
            Ok(crate::signaling::bits_to_index(&bits)? as usize)
        }
        _ => decode_nearest_index(cfg, y, alpha),
    }
}

/// Symbol-error sweep over the SNR grid. The channel model supplies the gain;
/// the per-branch noise variance at each point is `|alpha|^2 / rho`.
pub fn run_ser_sweep(
    cfg: &SchemeConfig,
    mc: &MonteCarloConfig,
    channel: &ChannelModel,
    opts: &SimOptions,
) -> Result<SweepResult> {
    mc.validate()?;
    let alpha = channel.alpha();
    let nb = cfg.bits();
    let size = cfg.dictionary().len();
    let k = cfg.branches();
    let m = cfg.geometry().num_antennas();

    // noiseless observations, one per codeword, formed by the contract path
    let observations: Vec<Vec<Complex64>> = (0..size)
        .map(|l| Ok(comm_observation(&cfg.transmit_spec(l)?, cfg, alpha)))
        .collect::<Result<Vec<_>>>()?;
    let bank = if opts.time_domain {
        Some(WaveformBank::build(k, opts.samples_per_pulse)?)
    } else {
        None
    };

    let mut points = Vec::with_capacity(mc.snr_grid_db.len());
    for (pi, &snr_db) in mc.snr_grid_db.iter().enumerate() {
        let rho = 10f64.powf(snr_db / 10.0);
        let sigma2 = alpha.norm_sqr() / rho;
        let (symbol_errors, bit_errors) = exec::fold_counts(mc.num_symbols, opts.threads, |si| {
            let mut rng = CounterRng::keyed(&[mc.seed, pi as u64, si]);
            let tx = rng.bits(nb) as usize;
            let y: Vec<Complex64> = match &bank {
                None => observations[tx]
                    .iter()
                    .map(|&o| o + rng.cscg(sigma2))
                    .collect(),
                Some(bank) => {
                    let mut signal = bank.synthesize(&observations[tx]).expect("branch count");
                    for s in signal.iter_mut() {
                        *s += rng.cscg(sigma2);
                    }
                    matched_filter(&signal, bank).expect("pulse length").into_vec()
                }
            };
            let rx = decode_index(cfg, &y, alpha).expect("decode in sweep");
            if rx == tx {
                (0, 0)
            } else {
                (1, (rx ^ tx).count_ones() as u64)
            }
        });
        points.push(SweepPoint {
            x: snr_db,
            symbols: mc.num_symbols,
            symbol_errors,
            bit_errors,
            theory_bound: theory_bound(cfg.scheme(), rho, m, cfg.dictionary().k())?,
        });
    }
    Ok(SweepResult {
        scheme: cfg.scheme(),
        bits: nb,
        axis: SweepAxis::SnrDb,
        fixed_snr_db: None,
        trials: None,
        points,
    })
}

/// Angle-robustness study: the transmitter encodes and rotates for the
/// configured direction, while each trial's observations use a true angle
/// drawn from `Normal(theta_c, sigma^2)` (sigma in degrees). The receiver
/// decodes against the dictionary built for the configured direction.
pub fn run_angle_robustness(
    cfg: &SchemeConfig,
    sigma_list_deg: &[f64],
    trials: u64,
    symbols_per_trial: u64,
    channel: &ChannelModel,
    seed: u64,
    opts: &SimOptions,
) -> Result<SweepResult> {
    if !matches!(cfg.scheme(), Scheme::Hybrid | Scheme::Regularized) {
        return Err(Error::InvalidParameter(
            "angle robustness compares the hybrid and regularized schemes".into(),
        ));
    }
    if sigma_list_deg.iter().any(|&s| s < 0.0 || !s.is_finite()) {
        return Err(Error::InvalidParameter("negative sigma".into()));
    }
    if trials == 0 || symbols_per_trial == 0 {
        return Err(Error::InvalidParameter(
            "trials and symbols_per_trial must be >= 1".into(),
        ));
    }
    let alpha = channel.alpha();
    let sigma2 = channel.noise_var();
    let nb = cfg.bits();
    let size = cfg.dictionary().len();

    // per-codeword transmit specs, reused across trials
    let specs: Vec<_> = (0..size)
        .map(|l| cfg.transmit_spec(l))
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(sigma_list_deg.len());
    for (pi, &sigma_deg) in sigma_list_deg.iter().enumerate() {
        let (symbol_errors, bit_errors) = exec::fold_counts(trials, opts.threads, |t| {
            let mut angle_rng = CounterRng::keyed(&[seed, pi as u64, t, u64::MAX]);
            let theta_true =
                cfg.theta_c() + (sigma_deg * angle_rng.standard_normal()).to_radians();
            let mut errs = (0u64, 0u64);
            for si in 0..symbols_per_trial {
                let mut rng = CounterRng::keyed(&[seed, pi as u64, t, si]);
                let tx = rng.bits(nb) as usize;
                let y: Vec<Complex64> = cfg
                    .observation_at(&specs[tx], theta_true, alpha)
                    .into_iter()
                    .map(|o| o + rng.cscg(sigma2))
                    .collect();
                let rx = decode_index(cfg, &y, alpha).expect("decode in robustness sweep");
                if rx != tx {
                    errs.0 += 1;
                    errs.1 += (rx ^ tx).count_ones() as u64;
                }
            }
            errs
        });
        let rho = channel.snr_linear();
        points.push(SweepPoint {
            x: sigma_deg,
            symbols: trials * symbols_per_trial,
            symbol_errors,
            bit_errors,
            theory_bound: theory_bound(
                cfg.scheme(),
                rho,
                cfg.geometry().num_antennas(),
                cfg.dictionary().k(),
            )?,
        });
    }
    Ok(SweepResult {
        scheme: cfg.scheme(),
        bits: nb,
        axis: SweepAxis::SigmaDeg,
        fixed_snr_db: Some(10.0 * channel.snr_linear().log10()),
        trials: Some(trials),
        points,
    })
}

/// Information rate in bits per second at full capacity for the scheme.
pub fn data_rate(cfg: &SchemeConfig) -> Result<f64> {
    let nb = bits_per_symbol(
        cfg.scheme(),
        cfg.geometry().num_antennas(),
        cfg.dictionary().k(),
    )?;
    Ok(nb as f64 * cfg.prf_hz())
}
