//! CSV emission: RFC 4180 fields, UTF-8, `\n` line endings, one header row,
//! floating values printed with 9 significant digits. Sweep files carry a
//! leading comment line recording the SNR definition. A rate whose error
//! count is zero is censored as `<1/n` instead of being reported as zero.

use crate::dictionary::{DistanceStats, Scheme};
use crate::error::Result;
use crate::signaling::{exact_bpsk_ber, regularized_error_rates, selection_ser_bound};
use crate::sim::{SweepAxis, SweepResult};
use std::io::Write;

/// 9 significant digits.
pub fn fmt_g9(x: f64) -> String {
    format!("{:.8e}", x)
}

fn rate_field(errors: u64, denom: f64) -> String {
    if errors == 0 {
        format!("<{}", fmt_g9(1.0 / denom))
    } else {
        fmt_g9(errors as f64 / denom)
    }
}

pub const SNR_DEFINITION_COMMENT: &str =
    "# snr definition: rho = |alpha_ch|^2 / sigma^2 per matched-filter branch; snr_db = 10*log10(rho)";

/// SNR sweep: `scheme,bits,snr_db,symbols,symbol_errors,ser,ber,theory_bound`.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: &mut W) -> std::io::Result<()> {
    assert_eq!(result.axis, SweepAxis::SnrDb);
    out.write_all(SNR_DEFINITION_COMMENT.as_bytes())?;
    out.write_all(b"\n")?;
    out.write_all(b"scheme,bits,snr_db,symbols,symbol_errors,ser,ber,theory_bound\n")?;
    for p in &result.points {
        let line = format!(
            "{},{},{},{},{},{},{},{}\n",
            result.scheme,
            result.bits,
            fmt_g9(p.x),
            p.symbols,
            p.symbol_errors,
            rate_field(p.symbol_errors, p.symbols as f64),
            rate_field(p.bit_errors, p.symbols as f64 * result.bits as f64),
            fmt_g9(p.theory_bound),
        );
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Angle-robustness sweep:
/// `scheme,bits,sigma_deg,snr_db,trials,symbols,symbol_errors,ser,ber`.
pub fn write_robustness_csv<W: Write>(result: &SweepResult, out: &mut W) -> std::io::Result<()> {
    assert_eq!(result.axis, SweepAxis::SigmaDeg);
    out.write_all(SNR_DEFINITION_COMMENT.as_bytes())?;
    out.write_all(b"\n")?;
    out.write_all(b"scheme,bits,sigma_deg,snr_db,trials,symbols,symbol_errors,ser,ber\n")?;
    let snr_db = result.fixed_snr_db.unwrap_or(f64::NAN);
    let trials = result.trials.unwrap_or(0);
    for p in &result.points {
        let line = format!(
            "{},{},{},{},{},{},{},{},{}\n",
            result.scheme,
            result.bits,
            fmt_g9(p.x),
            fmt_g9(snr_db),
            trials,
            p.symbols,
            p.symbol_errors,
            rate_field(p.symbol_errors, p.symbols as f64),
            rate_field(p.bit_errors, p.symbols as f64 * result.bits as f64),
        );
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Closed-form curves: `scheme,M,K,snr_db,ser_bound,ber_bound,ber_exact`.
/// The BER columns are empty for schemes without a per-bit formula.
pub fn write_rates_csv<W: Write>(
    scheme: Scheme,
    m: usize,
    k: usize,
    snr_grid_db: &[f64],
    out: &mut W,
) -> Result<()> {
    out.write_all(SNR_DEFINITION_COMMENT.as_bytes())?;
    out.write_all(b"\n")?;
    out.write_all(b"scheme,M,K,snr_db,ser_bound,ber_bound,ber_exact\n")?;
    for &snr_db in snr_grid_db {
        let rho = 10f64.powf(snr_db / 10.0);
        let line = match scheme {
            Scheme::Regularized => {
                let (ber, ser) = regularized_error_rates(rho, k)?;
                format!(
                    "{},{},{},{},{},{},{}\n",
                    scheme,
                    m,
                    k,
                    fmt_g9(snr_db),
                    fmt_g9(ser),
                    fmt_g9(ber),
                    fmt_g9(exact_bpsk_ber(rho)),
                )
            }
            _ => {
                let ser = selection_ser_bound(rho, m, k)?;
                format!(
                    "{},{},{},{},{},,\n",
                    scheme,
                    m,
                    k,
                    fmt_g9(snr_db),
                    fmt_g9(ser),
                )
            }
        };
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Long-format beampattern rows: `codeword,theta_deg,gain_linear,gain_db`.
/// Gains are normalized to 0 dB at `peak`.
pub fn write_pattern_header<W: Write>(out: &mut W) -> std::io::Result<()> {
    out.write_all(b"codeword,theta_deg,gain_linear,gain_db\n")
}

pub fn write_pattern_rows<W: Write>(
    codeword: usize,
    angles: &[f64],
    gains: &[f64],
    peak: f64,
    out: &mut W,
) -> std::io::Result<()> {
    for (&theta, &g) in angles.iter().zip(gains) {
        let db = 20.0 * (g.max(1e-300) / peak).log10();
        let line = format!(
            "{},{},{},{}\n",
            codeword,
            fmt_g9(theta.to_degrees()),
            fmt_g9(g),
            fmt_g9(db),
        );
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Distance statistics: a comment with the global extremes, then
/// `bit_index,d_min_sq,d_max_sq`.
pub fn write_distance_stats_csv<W: Write>(
    stats: &DistanceStats,
    out: &mut W,
) -> std::io::Result<()> {
    let head = format!(
        "# global_min_sq={} global_max_sq={}\n",
        fmt_g9(stats.global_min),
        fmt_g9(stats.global_max)
    );
    out.write_all(head.as_bytes())?;
    out.write_all(b"bit_index,d_min_sq,d_max_sq\n")?;
    for (i, (mn, mx)) in stats
        .per_symbol_min
        .iter()
        .zip(&stats.per_symbol_max)
        .enumerate()
    {
        let line = format!("{},{},{}\n", i, fmt_g9(*mn), fmt_g9(*mx));
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}
