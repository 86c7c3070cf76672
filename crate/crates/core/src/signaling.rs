//! Bit-block encoding into transmit configurations, matched-filter decoding,
//! and closed-form error-rate expressions.
//!
//! The encoder binds each bit block to a dictionary codeword and emits the
//! selection matrix, optional waveform-antenna permutation, and per-branch
//! phase rotations. The decoder compensates the channel gain and picks the
//! nearest dictionary vector; the regularized scheme also has the per-branch
//! phase-threshold shortcut, which is equivalent to nearest-vector detection
//! over its antipodal dictionary.

use crate::array::{self, PermutationMatrix, PhasePlan, SelectionMatrix};
use crate::dictionary::{bits_per_symbol_value, Scheme, SymbolDictionary};
use crate::error::{Error, Result};
use crate::ArrayGeometry;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Whether transmit branches carry the ambiguity-mitigating phase rotations.
///
/// Disabling rotations reverts the dictionary to direction-dependent steering
/// vectors; at broadside that collapses every codeword to the all-ones vector,
/// so construction logs a warning there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationMode {
    PhasePlan,
    None,
}

/// A configured signaling scheme: geometry, communication direction, active
/// (possibly sub-rate) dictionary, and the rotation plan.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    scheme: Scheme,
    geometry: ArrayGeometry,
    theta_c: f64,
    dictionary: SymbolDictionary,
    prf_hz: f64,
    plan: PhasePlan,
    rotation: RotationMode,
    decode_refs: Vec<Vec<Complex64>>,
}

/// Everything the transmitter wires up for one pulse.
#[derive(Debug, Clone)]
pub struct TransmitSpec {
    pub selection: SelectionMatrix,
    pub perm: Option<PermutationMatrix>,
    /// Per-branch unit rotations, aligned with the (possibly permuted)
    /// waveform order.
    pub rotations: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy)]
pub struct DecodeDiagnostics {
    pub winner: usize,
    /// Euclidean distance of the compensated observation to the winner.
    pub distance: f64,
    /// Gap to the runner-up distance.
    pub margin: f64,
}

impl SchemeConfig {
    /// Builds a scheme configuration. `bits` selects a sub-rate: selection and
    /// hybrid dictionaries keep their first `2^bits` entries — dictionary
    /// order is the priority order, so a greedy max-min dictionary yields its
    /// max-min prefix and a ripple-ranked dictionary its smallest-ripple
    /// subarrays — while the regularized scheme replicates each information
    /// bit over `K / bits` subgroups.
    pub fn new(
        geometry: ArrayGeometry,
        theta_c: f64,
        dictionary: SymbolDictionary,
        bits: Option<u32>,
        prf_hz: f64,
        rotation: RotationMode,
    ) -> Result<Self> {
        if !(theta_c.abs() <= PI / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "communication direction {theta_c} rad outside +-pi/2"
            )));
        }
        if !(prf_hz > 0.0) {
            return Err(Error::InvalidParameter("prf must be positive".into()));
        }
        if dictionary.m() != geometry.num_antennas() {
            return Err(Error::LengthMismatch {
                expected: geometry.num_antennas(),
                got: dictionary.m(),
            });
        }
        let nb_full = dictionary.nb();
        let b = bits.unwrap_or(nb_full);
        if b == 0 || b > nb_full {
            return Err(Error::InvalidParameter(format!(
                "bits per symbol {b} outside 1..={nb_full}"
            )));
        }
        let active = if b == nb_full {
            dictionary
        } else {
            match dictionary.scheme() {
                Scheme::Selection | Scheme::Hybrid => dictionary.prefix(1usize << b)?,
                Scheme::Regularized => replicate_regularized(&dictionary, b)?,
            }
        };
        if rotation == RotationMode::None && theta_c.abs() < 1e-12 {
            log::warn!(
                "broadside direction with rotations disabled: antenna selection \
                 carries no information"
            );
        }
        let plan = array::phase_rotation_plan(&geometry, theta_c);
        let mut cfg = Self {
            scheme: active.scheme(),
            geometry,
            theta_c,
            dictionary: active,
            prf_hz,
            plan,
            rotation,
            decode_refs: Vec::new(),
        };
        cfg.decode_refs = match rotation {
            RotationMode::PhasePlan => cfg
                .dictionary
                .entries()
                .iter()
                .map(|e| e.vector.clone())
                .collect(),
            RotationMode::None => (0..cfg.dictionary.len())
                .map(|l| {
                    let spec = cfg.transmit_spec(l)?;
                    Ok(cfg.observation_at(&spec, cfg.theta_c, Complex64::new(1.0, 0.0)))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(cfg)
    }

    /// Shorthand with phase rotations enabled.
    pub fn with_rotation(
        geometry: ArrayGeometry,
        theta_c: f64,
        dictionary: SymbolDictionary,
        bits: Option<u32>,
        prf_hz: f64,
    ) -> Result<Self> {
        Self::new(geometry, theta_c, dictionary, bits, prf_hz, RotationMode::PhasePlan)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn theta_c(&self) -> f64 {
        self.theta_c
    }

    /// The active dictionary (already re-ordered/replicated for sub-rates).
    pub fn dictionary(&self) -> &SymbolDictionary {
        &self.dictionary
    }

    pub fn prf_hz(&self) -> f64 {
        self.prf_hz
    }

    /// Active bits per symbol.
    pub fn bits(&self) -> u32 {
        self.dictionary.nb()
    }

    pub fn branches(&self) -> usize {
        self.dictionary.k()
    }

    /// Transmit wiring for the codeword at `index`.
    pub fn transmit_spec(&self, index: usize) -> Result<TransmitSpec> {
        let entry = self.dictionary.entry(index)?;
        let m = self.geometry.num_antennas();
        let selection = SelectionMatrix::from_subarray(&entry.sub, m)?;
        let k = entry.sub.k();
        let antenna_of = |branch: usize| -> usize {
            match &entry.perm {
                Some(q) => entry.sub.indices()[q.mapping()[branch]],
                None => entry.sub.indices()[branch],
            }
        };
        let rotations: Vec<Complex64> = match (self.scheme, self.rotation) {
            (_, RotationMode::None) => vec![Complex64::new(1.0, 0.0); k],
            (Scheme::Regularized, RotationMode::PhasePlan) => {
                let step = self.geometry.phase_step(self.theta_c);
                (0..k)
                    .map(|i| {
                        let p = antenna_of(i);
                        let bit_pi = if p % 2 == 1 { PI } else { 0.0 };
                        Complex64::from_polar(1.0, bit_pi - step * p as f64)
                    })
                    .collect()
            }
            (_, RotationMode::PhasePlan) => {
                (0..k).map(|i| self.plan.unit(antenna_of(i))).collect()
            }
        };
        Ok(TransmitSpec {
            selection,
            perm: entry.perm.clone(),
            rotations,
        })
    }

    /// Noiseless matched-filter observation of a transmit spec seen from
    /// direction `theta` with channel gain `alpha`.
    pub fn observation_at(&self, spec: &TransmitSpec, theta: f64, alpha: Complex64) -> Vec<Complex64> {
        let step = self.geometry.phase_step(theta);
        let k = spec.rotations.len();
        (0..k)
            .map(|i| {
                let antenna = match &spec.perm {
                    Some(q) => spec.selection.selected(q.mapping()[i]),
                    None => spec.selection.selected(i),
                };
                alpha * spec.rotations[i] * Complex64::from_polar(1.0, step * antenna as f64)
            })
            .collect()
    }

    fn decode_ref(&self, index: usize) -> &[Complex64] {
        &self.decode_refs[index]
    }
}

/// Replicated sub-rate dictionary for the regularized scheme: `bits` info
/// bits, each driving `K / bits` adjacent subgroups.
fn replicate_regularized(full: &SymbolDictionary, bits: u32) -> Result<SymbolDictionary> {
    let k = full.k();
    if k % bits as usize != 0 {
        return Err(Error::InvalidParameter(format!(
            "cannot spread {bits} bits over {k} subgroups evenly"
        )));
    }
    let span = k / bits as usize;
    let size = 1usize << bits;
    let mut entries = Vec::with_capacity(size);
    for idx in 0..size {
        // expand info bits to the full subgroup pattern, then reuse the full
        // dictionary's entry for it
        let mut expanded = 0usize;
        for j in 0..k {
            let info_bit = (idx >> (bits as usize - 1 - j / span)) & 1;
            expanded = (expanded << 1) | info_bit;
        }
        let mut cw = full.entry(expanded)?.clone();
        cw.bit_index = idx;
        entries.push(cw);
    }
    SymbolDictionary::from_parts(Scheme::Regularized, full.m(), k, entries)
}

/// Bits per symbol of each scheme at full capacity:
/// selection `floor(log2 C(M,K))`, hybrid `floor(log2(C(M,K) K!))`,
/// regularized `K`.
pub fn bits_per_symbol(scheme: Scheme, m: usize, k: usize) -> Result<u32> {
    bits_per_symbol_value(scheme, m, k)
}

/// Encodes an MSB-first bit block into a transmit configuration.
pub fn encode(cfg: &SchemeConfig, bits: &[u8]) -> Result<TransmitSpec> {
    let nb = cfg.bits() as usize;
    if bits.len() != nb {
        return Err(Error::BitLengthMismatch {
            expected: nb,
            got: bits.len(),
        });
    }
    let index = bits_to_index(bits)? as usize;
    cfg.transmit_spec(index)
}

/// Noiseless matched-filter observation at the configured direction:
/// `alpha * diag(rotations) * (perm o selection of a(theta_c))`.
pub fn comm_observation(
    spec: &TransmitSpec,
    cfg: &SchemeConfig,
    channel_gain: Complex64,
) -> Vec<Complex64> {
    cfg.observation_at(spec, cfg.theta_c(), channel_gain)
}

/// Nearest-codeword index for a compensated observation.
pub fn decode_nearest_index(
    cfg: &SchemeConfig,
    y: &[Complex64],
    channel_gain: Complex64,
) -> Result<usize> {
    if channel_gain.norm_sqr() == 0.0 {
        return Err(Error::ZeroChannelGain);
    }
    if y.len() != cfg.branches() {
        return Err(Error::LengthMismatch {
            expected: cfg.branches(),
            got: y.len(),
        });
    }
    let inv = Complex64::new(1.0, 0.0) / channel_gain;
    let compensated: Vec<Complex64> = y.iter().map(|v| v * inv).collect();
    let mut winner = 0usize;
    let mut best = f64::INFINITY;
    for l in 0..cfg.dictionary().len() {
        let d = sq_dist(&compensated, cfg.decode_ref(l));
        if d < best {
            best = d;
            winner = l;
        }
    }
    Ok(winner)
}

/// Nearest-codeword decode with diagnostics. Ties go to the lowest bit index.
pub fn decode_nearest(
    cfg: &SchemeConfig,
    y: &[Complex64],
    channel_gain: Complex64,
) -> Result<(Vec<u8>, DecodeDiagnostics)> {
    if channel_gain.norm_sqr() == 0.0 {
        return Err(Error::ZeroChannelGain);
    }
    if y.len() != cfg.branches() {
        return Err(Error::LengthMismatch {
            expected: cfg.branches(),
            got: y.len(),
        });
    }
    let inv = Complex64::new(1.0, 0.0) / channel_gain;
    let compensated: Vec<Complex64> = y.iter().map(|v| v * inv).collect();
    let mut winner = 0usize;
    let mut best = f64::INFINITY;
    let mut second = f64::INFINITY;
    for l in 0..cfg.dictionary().len() {
        let d = sq_dist(&compensated, cfg.decode_ref(l));
        if d < best {
            second = best;
            best = d;
            winner = l;
        } else if d < second {
            second = d;
        }
    }
    let diagnostics = DecodeDiagnostics {
        winner,
        distance: best.sqrt(),
        margin: second.sqrt() - best.sqrt(),
    };
    Ok((index_to_bits(winner as u64, cfg.bits()), diagnostics))
}

/// Regularized decode: info bit g is 0 when the summed real part of the
/// compensated branches in its subgroup span is positive. Equivalent to
/// nearest-vector detection over the antipodal dictionary.
pub fn decode_regularized(
    cfg: &SchemeConfig,
    y: &[Complex64],
    channel_gain: Complex64,
) -> Result<Vec<u8>> {
    if cfg.scheme() != Scheme::Regularized {
        return Err(Error::SchemeMismatch {
            expected: Scheme::Regularized.to_string(),
            got: cfg.scheme().to_string(),
        });
    }
    if channel_gain.norm_sqr() == 0.0 {
        return Err(Error::ZeroChannelGain);
    }
    let k = cfg.branches();
    if y.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: y.len(),
        });
    }
    let bits = cfg.bits() as usize;
    let span = k / bits;
    let inv = Complex64::new(1.0, 0.0) / channel_gain;
    let mut out = Vec::with_capacity(bits);
    for g in 0..bits {
        let score: f64 = y[g * span..(g + 1) * span]
            .iter()
            .map(|v| (v * inv).re)
            .sum();
        out.push(if score >= 0.0 { 0 } else { 1 });
    }
    Ok(out)
}

#[inline]
fn sq_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dr = x.re - y.re;
        let di = x.im - y.im;
        acc += dr * dr + di * di;
    }
    acc
}

// ---------------------------------------------------------------------------
// Closed-form error rates
// ---------------------------------------------------------------------------

/// Per-branch symbol error of M-ary PSK at angular separation `gamma`:
/// `erfc(sqrt(rho) sin(gamma / 2))`, clamped to [0, 1].
pub fn mpsk_symbol_error(rho: f64, gamma: f64) -> Result<f64> {
    if rho < 0.0 {
        return Err(Error::NegativeSnr(rho));
    }
    if !(gamma > 0.0 && gamma < std::f64::consts::TAU) {
        return Err(Error::InvalidParameter(format!(
            "angular separation {gamma} outside (0, 2 pi)"
        )));
    }
    Ok(libm::erfc(rho.sqrt() * (gamma / 2.0).sin()).clamp(0.0, 1.0))
}

/// Symbol-error upper bound of the selection scheme:
/// `1 - (1 - Q(rho, 2 pi / M))^K`.
pub fn selection_ser_bound(rho: f64, m: usize, k: usize) -> Result<f64> {
    let q = mpsk_symbol_error(rho, std::f64::consts::TAU / m as f64)?;
    Ok(1.0 - (1.0 - q).powi(k as i32))
}

/// Regularized-scheme `(BER, SER)` bound: `BER = erfc(sqrt(rho))` (the
/// antipodal separation term equals one) and `SER = 1 - (1 - BER)^K`.
pub fn regularized_error_rates(rho: f64, k: usize) -> Result<(f64, f64)> {
    if rho < 0.0 {
        return Err(Error::NegativeSnr(rho));
    }
    let ber = libm::erfc(rho.sqrt()).clamp(0.0, 1.0);
    Ok((ber, 1.0 - (1.0 - ber).powi(k as i32)))
}

/// Exact antipodal detection probability, `0.5 erfc(sqrt(rho))`, reported
/// alongside the bound above.
pub fn exact_bpsk_ber(rho: f64) -> f64 {
    0.5 * libm::erfc(rho.sqrt())
}

pub fn index_to_bits(index: u64, nb: u32) -> Vec<u8> {
    (0..nb).rev().map(|b| ((index >> b) & 1) as u8).collect()
}

pub fn bits_to_index(bits: &[u8]) -> Result<u64> {
    let mut acc = 0u64;
    for &b in bits {
        if b > 1 {
            return Err(Error::InvalidParameter(format!("bit value {b}")));
        }
        acc = (acc << 1) | b as u64;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{
        build_regularized_dictionary, greedy_maxmin_dictionary, permute_augment,
    };
    use crate::rng::CounterRng;
    use crate::waveform::{matched_filter, WaveformBank};

    fn geometry() -> ArrayGeometry {
        ArrayGeometry::new(16, 0.25).unwrap()
    }

    fn theta_c() -> f64 {
        array::maximal_spread_angle(&geometry()).unwrap()
    }

    fn selection_cfg(bits: Option<u32>) -> SchemeConfig {
        let dict = greedy_maxmin_dictionary(16, 8, 256).unwrap();
        SchemeConfig::with_rotation(geometry(), theta_c(), dict, bits, 10_000.0).unwrap()
    }

    #[test]
    fn bits_per_symbol_values() {
        assert_eq!(bits_per_symbol(Scheme::Selection, 16, 8).unwrap(), 13);
        assert_eq!(bits_per_symbol(Scheme::Hybrid, 16, 8).unwrap(), 28);
        assert_eq!(bits_per_symbol(Scheme::Regularized, 16, 8).unwrap(), 8);
    }

    #[test]
    fn zero_block_encodes_first_codeword() {
        let cfg = selection_cfg(None);
        let spec = encode(&cfg, &[0; 8]).unwrap();
        let obs = comm_observation(&spec, &cfg, Complex64::new(1.0, 0.0));
        let want = &cfg.dictionary().entries()[0].vector;
        for (a, b) in obs.iter().zip(want) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn observation_scales_linearly_with_gain() {
        let cfg = selection_cfg(None);
        let spec = cfg.transmit_spec(57).unwrap();
        let alpha = Complex64::from_polar(2.0, PI / 3.0);
        let obs = comm_observation(&spec, &cfg, alpha);
        let unit = comm_observation(&spec, &cfg, Complex64::new(1.0, 0.0));
        for (a, b) in obs.iter().zip(&unit) {
            assert!((a - alpha * b).norm() < 1e-12);
        }
    }

    #[test]
    fn noiseless_roundtrip_all_schemes_all_codewords() {
        let gains = [
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(2.0, PI / 3.0),
            Complex64::new(-0.3, 1.7),
        ];
        let selection = selection_cfg(None);
        let hybrid = {
            let base = greedy_maxmin_dictionary(16, 8, 256).unwrap();
            let dict = permute_augment(&base).unwrap();
            SchemeConfig::with_rotation(geometry(), theta_c(), dict, None, 10_000.0).unwrap()
        };
        let regularized = {
            let dict = build_regularized_dictionary(8).unwrap();
            SchemeConfig::with_rotation(geometry(), theta_c(), dict, None, 10_000.0).unwrap()
        };
        for cfg in [&selection, &hybrid, &regularized] {
            for &alpha in &gains {
                for idx in 0..cfg.dictionary().len() {
                    let spec = cfg.transmit_spec(idx).unwrap();
                    let y = comm_observation(&spec, cfg, alpha);
                    let got = decode_nearest_index(cfg, &y, alpha).unwrap();
                    assert_eq!(got, idx, "scheme {:?} alpha {alpha}", cfg.scheme());
                }
            }
        }
    }

    #[test]
    fn decode_tolerates_perturbations_within_half_min_distance() {
        let cfg = selection_cfg(Some(4));
        let stats = crate::dictionary::distance_stats(cfg.dictionary()).unwrap();
        let radius = 0.45 * stats.global_min.sqrt();
        let alpha = Complex64::new(1.0, 0.0);
        let mut rng = CounterRng::keyed(&[23]);
        for idx in 0..cfg.dictionary().len() {
            let spec = cfg.transmit_spec(idx).unwrap();
            let mut y = comm_observation(&spec, &cfg, alpha);
            // random direction scaled just inside the decision radius
            let mut pert: Vec<Complex64> = (0..y.len())
                .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            let norm: f64 = pert.iter().map(|p| p.norm_sqr()).sum::<f64>().sqrt();
            for p in pert.iter_mut() {
                *p *= radius / norm;
            }
            for (v, p) in y.iter_mut().zip(&pert) {
                *v += p;
            }
            assert_eq!(decode_nearest_index(&cfg, &y, alpha).unwrap(), idx);
        }
    }

    #[test]
    fn equidistant_observation_goes_to_lower_index() {
        let cfg = selection_cfg(Some(1));
        let a = &cfg.dictionary().entries()[0].vector;
        let b = &cfg.dictionary().entries()[1].vector;
        let midpoint: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let (bits, diag) = decode_nearest(&cfg, &midpoint, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(diag.winner, 0);
        assert_eq!(bits, vec![0]);
        assert!(diag.margin.abs() < 1e-9);
    }

    #[test]
    fn decode_invariant_under_joint_gain_scaling() {
        let cfg = selection_cfg(Some(4));
        let mut rng = CounterRng::keyed(&[31]);
        for trial in 0..40 {
            let idx = (trial * 7) % 16;
            let spec = cfg.transmit_spec(idx).unwrap();
            let mut y = comm_observation(&spec, &cfg, Complex64::new(1.0, 0.0));
            for v in y.iter_mut() {
                *v += Complex64::new(rng.standard_normal(), rng.standard_normal()) * 0.4;
            }
            let base = decode_nearest_index(&cfg, &y, Complex64::new(1.0, 0.0)).unwrap();
            let alpha = Complex64::from_polar(0.2 + 3.0 * rng.uniform(), rng.uniform() * 6.0);
            let scaled: Vec<Complex64> = y.iter().map(|v| v * alpha).collect();
            assert_eq!(decode_nearest_index(&cfg, &scaled, alpha).unwrap(), base);
        }
    }

    #[test]
    fn zero_gain_is_rejected() {
        let cfg = selection_cfg(Some(1));
        let y = vec![Complex64::new(0.0, 0.0); 8];
        assert!(matches!(
            decode_nearest(&cfg, &y, Complex64::new(0.0, 0.0)),
            Err(Error::ZeroChannelGain)
        ));
    }

    #[test]
    fn regularized_all_zero_and_all_one_blocks() {
        let dict = build_regularized_dictionary(8).unwrap();
        let cfg =
            SchemeConfig::with_rotation(geometry(), theta_c(), dict, None, 10_000.0).unwrap();
        let alpha = Complex64::from_polar(1.3, 0.4);

        let spec = encode(&cfg, &[0; 8]).unwrap();
        let y = comm_observation(&spec, &cfg, alpha);
        for v in &y {
            assert!((v - alpha).norm() < 1e-10);
        }
        assert_eq!(decode_regularized(&cfg, &y, alpha).unwrap(), vec![0; 8]);

        let spec = encode(&cfg, &[1; 8]).unwrap();
        let y = comm_observation(&spec, &cfg, alpha);
        for v in &y {
            assert!((v + alpha).norm() < 1e-10);
        }
        assert_eq!(decode_regularized(&cfg, &y, alpha).unwrap(), vec![1; 8]);
        // all-one block selects every second antenna with the pi term
        let spec = encode(&cfg, &[1; 8]).unwrap();
        for r in 0..8 {
            assert_eq!(spec.selection.selected(r), 2 * r + 1);
        }
    }

    #[test]
    fn regularized_decode_agrees_with_nearest_under_noise() {
        let dict = build_regularized_dictionary(4).unwrap();
        let cfg = SchemeConfig::with_rotation(
            ArrayGeometry::new(8, 0.25).unwrap(),
            0.3,
            dict,
            None,
            1000.0,
        )
        .unwrap();
        let alpha = Complex64::from_polar(0.9, -1.1);
        let mut rng = CounterRng::keyed(&[47]);
        for trial in 0..100_000u64 {
            let idx = (trial % 16) as usize;
            let spec = cfg.transmit_spec(idx).unwrap();
            let mut y = comm_observation(&spec, &cfg, alpha);
            for v in y.iter_mut() {
                *v += rng.cscg(0.8);
            }
            let fast = decode_regularized(&cfg, &y, alpha).unwrap();
            let (nearest, _) = decode_nearest(&cfg, &y, alpha).unwrap();
            assert_eq!(fast, nearest);
        }
    }

    #[test]
    fn regularized_subrate_replication_patterns() {
        let dict = build_regularized_dictionary(8).unwrap();
        let cfg =
            SchemeConfig::with_rotation(geometry(), theta_c(), dict, Some(2), 10_000.0).unwrap();
        assert_eq!(cfg.bits(), 2);
        assert_eq!(cfg.dictionary().len(), 4);
        // block [1, 0]: first four subgroups take the second antenna
        let spec = encode(&cfg, &[1, 0]).unwrap();
        for r in 0..4 {
            assert_eq!(spec.selection.selected(r), 2 * r + 1);
        }
        for r in 4..8 {
            assert_eq!(spec.selection.selected(r), 2 * r);
        }
        // roundtrip across all four blocks
        let alpha = Complex64::new(0.7, 0.2);
        for idx in 0..4usize {
            let spec = cfg.transmit_spec(idx).unwrap();
            let y = comm_observation(&spec, &cfg, alpha);
            let bits = decode_regularized(&cfg, &y, alpha).unwrap();
            assert_eq!(bits_to_index(&bits).unwrap() as usize, idx);
        }
    }

    #[test]
    fn rotation_disabled_roundtrips_below_first_ambiguity() {
        // without rotations the dictionary is direction-dependent steering;
        // below the first ambiguity angle all codeword vectors stay distinct
        let g = geometry();
        let dict = greedy_maxmin_dictionary(16, 8, 16).unwrap();
        let cfg = SchemeConfig::new(
            g,
            10f64.to_radians(),
            dict,
            None,
            10_000.0,
            RotationMode::None,
        )
        .unwrap();
        let alpha = Complex64::from_polar(1.2, -0.7);
        for idx in 0..16 {
            let spec = cfg.transmit_spec(idx).unwrap();
            assert!(spec
                .rotations
                .iter()
                .all(|r| (r - Complex64::new(1.0, 0.0)).norm() < 1e-15));
            let y = comm_observation(&spec, &cfg, alpha);
            assert_eq!(decode_nearest_index(&cfg, &y, alpha).unwrap(), idx);
        }
    }

    #[test]
    fn observation_matches_time_domain_path() {
        let cfg = selection_cfg(None);
        let bank = WaveformBank::build(8, 64).unwrap();
        let alpha = Complex64::from_polar(1.7, 0.9);
        for idx in [0usize, 3, 100, 255] {
            let spec = cfg.transmit_spec(idx).unwrap();
            let direct = comm_observation(&spec, &cfg, alpha);
            // time-domain synthesis: branch coefficients scale the bank rows
            let coeffs: Vec<Complex64> = direct.clone();
            let tx = bank.synthesize(&coeffs).unwrap();
            let filtered = matched_filter(&tx, &bank).unwrap();
            for (a, b) in filtered.branches().iter().zip(&direct) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn formula_values() {
        assert!((mpsk_symbol_error(0.0, PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((mpsk_symbol_error(1.0, PI).unwrap() - 0.15730).abs() < 1e-4);
        assert!(mpsk_symbol_error(1e6, PI).unwrap() < 1e-12);
        assert!(mpsk_symbol_error(-1.0, PI).is_err());
        assert!(mpsk_symbol_error(1.0, 0.0).is_err());

        // K = 1 bound reduces to the branch error
        let q = mpsk_symbol_error(2.0, std::f64::consts::TAU / 16.0).unwrap();
        assert!((selection_ser_bound(2.0, 16, 1).unwrap() - q).abs() < 1e-15);
        assert!((selection_ser_bound(0.0, 16, 8).unwrap() - 1.0).abs() < 1e-12);

        // 1 - 0.99^8 with a branch error of 0.01
        let k8 = 1.0 - 0.99f64.powi(8);
        assert!((k8 - 0.07726).abs() < 1e-5);

        let (ber, ser) = regularized_error_rates(0.0, 8).unwrap();
        assert_eq!(ber, 1.0);
        assert_eq!(ser, 1.0);
        let (ber, _) = regularized_error_rates(1.0, 8).unwrap();
        assert!((ber - 0.15730).abs() < 1e-4);
        let (ber, ser) = regularized_error_rates(2.5, 1).unwrap();
        assert!((ber - ser).abs() < 1e-15);
    }

    #[test]
    fn bounds_are_monotone() {
        let mut last_sel = 1.1;
        let mut last_reg = 1.1;
        for i in 0..30 {
            let rho = 10f64.powf(-2.0 + i as f64 * 0.15);
            let s = selection_ser_bound(rho, 16, 8).unwrap();
            let (_, r) = regularized_error_rates(rho, 8).unwrap();
            assert!(s <= last_sel + 1e-12);
            assert!(r <= last_reg + 1e-12);
            last_sel = s;
            last_reg = r;
        }
        // increasing K raises both
        assert!(
            selection_ser_bound(2.0, 16, 8).unwrap() >= selection_ser_bound(2.0, 16, 4).unwrap()
        );
        let (_, s8) = regularized_error_rates(2.0, 8).unwrap();
        let (_, s4) = regularized_error_rates(2.0, 4).unwrap();
        assert!(s8 >= s4);
    }

    #[test]
    fn bit_helpers_roundtrip() {
        for idx in [0u64, 1, 77, 255] {
            let bits = index_to_bits(idx, 8);
            assert_eq!(bits_to_index(&bits).unwrap(), idx);
        }
        assert_eq!(index_to_bits(5, 4), vec![0, 1, 0, 1]);
        assert!(bits_to_index(&[0, 2]).is_err());
    }

    #[test]
    fn encode_rejects_wrong_length_blocks() {
        let cfg = selection_cfg(Some(4));
        assert!(matches!(
            encode(&cfg, &[0; 5]),
            Err(Error::BitLengthMismatch { .. })
        ));
    }
}
