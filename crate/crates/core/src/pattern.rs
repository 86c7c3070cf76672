//! MIMO virtual-array beampatterns and per-subarray minimax beamforming.
//!
//! The virtual steering vector is the Kronecker product of the transmit
//! subarray steering and the receive steering. The weight designer minimizes
//! the peak mainlobe deviation from a unit-modulus phase target subject to an
//! absolute sidelobe bound, using bisection on the ripple level with cyclic
//! projections onto the constraint discs. Constraints of the returned weights
//! are always re-checked by direct pattern evaluation, never trusted from the
//! solver state.

use crate::array::{ArrayGeometry, ReceiveArray, Subarray};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Angular sampling: a mainlobe sector and a guard-banded sidelobe region,
/// both inside [-90, 90] degrees. Samples of the two regions are disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGrid {
    mainlobe: Vec<f64>,
    sidelobe: Vec<f64>,
    sector: (f64, f64),
    guard: f64,
    step: f64,
}

impl PatternGrid {
    pub fn with_steps(sector_deg: (f64, f64), guard_deg: f64, step_deg: f64) -> Result<Self> {
        let (lo, hi) = sector_deg;
        if !(lo < hi) || lo < -90.0 || hi > 90.0 {
            return Err(Error::InvalidParameter(format!(
                "mainlobe sector [{lo}, {hi}] degrees is invalid"
            )));
        }
        if !(step_deg > 0.0) || guard_deg < 0.0 {
            return Err(Error::InvalidParameter(
                "grid step must be positive and guard nonnegative".into(),
            ));
        }
        let sweep = |a: f64, b: f64| -> Vec<f64> {
            let mut v = Vec::new();
            let mut x = a;
            while x <= b + 1e-9 {
                v.push(x.to_radians());
                x += step_deg;
            }
            v
        };
        let mainlobe = sweep(lo, hi);
        let mut sidelobe = sweep(-90.0, lo - guard_deg);
        sidelobe.extend(sweep(hi + guard_deg, 90.0));
        if mainlobe.is_empty() || sidelobe.is_empty() {
            return Err(Error::InvalidParameter(
                "grid produced an empty mainlobe or sidelobe set".into(),
            ));
        }
        Ok(Self {
            mainlobe,
            sidelobe,
            sector: (lo.to_radians(), hi.to_radians()),
            guard: guard_deg.to_radians(),
            step: step_deg,
        })
    }

    /// Default optimization grid: 0.5 degree sampling, 2 degree guard band.
    pub fn optimization(sector_deg: (f64, f64)) -> Result<Self> {
        Self::with_steps(sector_deg, 2.0, 0.5)
    }

    /// Default reporting grid: 0.1 degree sampling, 2 degree guard band.
    pub fn reporting(sector_deg: (f64, f64)) -> Result<Self> {
        Self::with_steps(sector_deg, 2.0, 0.1)
    }

    pub fn mainlobe(&self) -> &[f64] {
        &self.mainlobe
    }

    pub fn sidelobe(&self) -> &[f64] {
        &self.sidelobe
    }

    pub fn sector(&self) -> (f64, f64) {
        self.sector
    }

    pub fn step_deg(&self) -> f64 {
        self.step
    }

    /// Uniform angle list over [-90, 90] degrees for pattern export.
    pub fn full_span(step_deg: f64) -> Vec<f64> {
        let mut v = Vec::new();
        let mut x = -90.0;
        while x <= 90.0 + 1e-9 {
            v.push((x as f64).to_radians());
            x += step_deg;
        }
        v
    }
}

/// Mainlobe phase target `mu(theta)`.
///
/// `MatchedLinear` tracks the inherent linear phase of the aperture,
/// `exp(j 2 pi x_c sin(theta))` with `x_c` the mean virtual-element position;
/// with one-sided element positions a flat zero-phase target is unreachable
/// over a wide sector, so the matched profile is the default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseProfile {
    Constant(f64),
    MatchedLinear,
    LinearAt { center_wavelengths: f64 },
}

impl Default for PhaseProfile {
    fn default() -> Self {
        PhaseProfile::MatchedLinear
    }
}

impl PhaseProfile {
    fn center(&self, default_center: f64) -> Option<f64> {
        match self {
            PhaseProfile::Constant(_) => None,
            PhaseProfile::MatchedLinear => Some(default_center),
            PhaseProfile::LinearAt { center_wavelengths } => Some(*center_wavelengths),
        }
    }

    fn mu(&self, theta: f64, default_center: f64) -> f64 {
        match self.center(default_center) {
            None => match self {
                PhaseProfile::Constant(c) => *c,
                _ => unreachable!(),
            },
            Some(xc) => TAU * xc * theta.sin(),
        }
    }
}

/// Beamforming weights over the virtual array.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerWeights {
    w: Vec<Complex64>,
}

impl BeamformerWeights {
    pub fn new(w: Vec<Complex64>) -> Self {
        Self { w }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Kronecker product of transmit subarray steering and receive steering:
/// entry `k*N + n` is `a_k * b_n`.
pub fn virtual_steering(
    sub: &Subarray,
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    theta: f64,
) -> Result<Vec<Complex64>> {
    sub.check_against(geometry)?;
    let a = crate::array::subarray_steering(geometry, sub, theta)?;
    let b = receive.steering(theta);
    let mut c = Vec::with_capacity(a.len() * b.len());
    for ak in a.iter() {
        for bn in b.iter() {
            c.push(ak * bn);
        }
    }
    Ok(c)
}

/// `B(theta) = |w^H c(theta)|` over the given angles.
pub fn beampattern(
    w: &BeamformerWeights,
    sub: &Subarray,
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    angles: &[f64],
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(angles.len());
    for &theta in angles {
        let c = virtual_steering(sub, geometry, receive, theta)?;
        if c.len() != w.len() {
            return Err(Error::LengthMismatch {
                expected: c.len(),
                got: w.len(),
            });
        }
        out.push(dot_conj(&c, w.as_slice()).norm());
    }
    Ok(out)
}

/// Gains normalized to 0 dB at `peak`.
pub fn to_db(gains: &[f64], peak: f64) -> Vec<f64> {
    gains
        .iter()
        .map(|g| 20.0 * (g.max(1e-300) / peak).log10())
        .collect()
}

/// Sidelobe verification on a reporting grid: the worst sidelobe sample
/// relative to the mainlobe peak, in dB.
pub fn worst_sidelobe_db(
    w: &BeamformerWeights,
    sub: &Subarray,
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    grid: &PatternGrid,
) -> Result<f64> {
    let main = beampattern(w, sub, geometry, receive, grid.mainlobe())?;
    let side = beampattern(w, sub, geometry, receive, grid.sidelobe())?;
    let peak = main.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::InvalidParameter("zero mainlobe peak".into()));
    }
    let worst = side.iter().cloned().fold(0.0f64, f64::max);
    Ok(20.0 * (worst.max(1e-300) / peak).log10())
}

/// Solver knobs for the minimax design. The defaults trade a ~1e-4 ripple
/// resolution against the cost of ranking thousands of subarrays.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub feasibility_tol: f64,
    pub ripple_tol: f64,
    pub max_bisections: usize,
    pub sweeps_per_level: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            ripple_tol: 3e-4,
            max_bisections: 30,
            sweeps_per_level: 160,
        }
    }
}

#[inline]
fn dot_conj(row: &[Complex64], w: &[Complex64]) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (c, x) in row.iter().zip(w) {
        re += c.re * x.re + c.im * x.im;
        im += c.re * x.im - c.im * x.re;
    }
    Complex64::new(re, im)
}

#[inline]
fn add_scaled(row: &[Complex64], alpha: Complex64, w: &mut [Complex64]) {
    for (c, x) in row.iter().zip(w) {
        x.re += c.re * alpha.re - c.im * alpha.im;
        x.im += c.re * alpha.im + c.im * alpha.re;
    }
}

/// Flat storage of the disc constraints `|<c_r, w> - target_r| <= bound_r`:
/// mainlobe rows first (bound = ripple), then sidelobe rows (bound = eps,
/// zero target), then optional per-block norm caps.
struct DiscProblem {
    rows: Vec<Complex64>,
    dim: usize,
    n_main: usize,
    n_side: usize,
    targets: Vec<Complex64>,
    ripple: f64,
    eps: f64,
    row_norm_sq: f64,
    caps: Vec<f64>,
    block: usize,
}

impl DiscProblem {
    #[inline]
    fn row(&self, r: usize) -> &[Complex64] {
        &self.rows[r * self.dim..(r + 1) * self.dim]
    }

    /// One cyclic sweep of projections; returns the largest pre-projection
    /// violation seen.
    fn sweep(&self, w: &mut [Complex64]) -> f64 {
        let mut worst = 0.0f64;
        let n_rows = self.n_main + self.n_side;
        for r in 0..n_rows {
            let row = &self.rows[r * self.dim..(r + 1) * self.dim];
            let g = dot_conj(row, w);
            let (v, bound) = if r < self.n_main {
                (g - self.targets[r], self.ripple)
            } else {
                (g, self.eps)
            };
            let av = v.norm();
            if av > bound {
                worst = worst.max(av - bound);
                let alpha = v * ((bound / av - 1.0) / self.row_norm_sq);
                add_scaled(row, alpha, w);
            }
        }
        if !self.caps.is_empty() {
            for (m, &cap) in self.caps.iter().enumerate() {
                let blk = &mut w[m * self.block..(m + 1) * self.block];
                let norm = blk.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                if norm > cap {
                    worst = worst.max(norm - cap);
                    let scale = if norm > 0.0 { cap / norm } else { 0.0 };
                    for x in blk {
                        *x *= scale;
                    }
                }
            }
        }
        worst
    }

    fn set_ripple(&mut self, rho: f64) {
        self.ripple = rho;
    }

    /// Largest mainlobe deviation and sidelobe level of `w`, measured directly.
    fn measure(&self, w: &[Complex64]) -> (f64, f64) {
        let mut main_dev = 0.0f64;
        let mut side = 0.0f64;
        for r in 0..self.n_main {
            main_dev = main_dev.max((dot_conj(self.row(r), w) - self.targets[r]).norm());
        }
        for r in self.n_main..self.n_main + self.n_side {
            side = side.max(dot_conj(self.row(r), w).norm());
        }
        (main_dev, side)
    }

    fn caps_violation(&self, w: &[Complex64]) -> f64 {
        let mut worst = 0.0f64;
        for (m, &cap) in self.caps.iter().enumerate() {
            let blk = &w[m * self.block..(m + 1) * self.block];
            let norm = blk.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max((norm - cap).max(0.0));
        }
        worst
    }
}

fn build_rows(
    receive: &ReceiveArray,
    angles: &[f64],
    geometry: &ArrayGeometry,
    positions: &[usize],
    rows: &mut Vec<Complex64>,
) {
    for &theta in angles {
        let step = geometry.phase_step(theta);
        let b = receive.steering(theta);
        for &p in positions {
            let a = Complex64::from_polar(1.0, step * p as f64);
            for bn in b.iter() {
                rows.push(a * bn);
            }
        }
    }
}

fn assemble(
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    eps: f64,
    profile: PhaseProfile,
    positions: &[usize],
    caps: Vec<f64>,
) -> DiscProblem {
    let n = receive.len();
    let dim = positions.len() * n;
    let mut rows = Vec::with_capacity((grid.mainlobe().len() + grid.sidelobe().len()) * dim);
    build_rows(receive, grid.mainlobe(), geometry, positions, &mut rows);
    build_rows(receive, grid.sidelobe(), geometry, positions, &mut rows);

    let d = geometry.spacing();
    let mean_tx = positions.iter().map(|&p| p as f64 * d).sum::<f64>() / positions.len() as f64;
    let mean_rx = receive.positions().iter().sum::<f64>() / n as f64;
    let center = mean_tx + mean_rx;

    let targets: Vec<Complex64> = grid
        .mainlobe()
        .iter()
        .map(|&theta| Complex64::from_polar(1.0, -profile.mu(theta, center)))
        .collect();

    DiscProblem {
        rows,
        dim,
        n_main: grid.mainlobe().len(),
        n_side: grid.sidelobe().len(),
        targets,
        ripple: 1.0,
        eps,
        row_norm_sq: dim as f64,
        caps,
        block: n,
    }
}

fn run_design(mut prob: DiscProblem, opts: &SolverOptions) -> Result<(Vec<Complex64>, f64)> {
    if prob.eps <= 0.0 {
        return Err(Error::InfeasibleSidelobe {
            eps_linear: prob.eps,
        });
    }
    let dim = prob.dim;
    // w = 0 is always feasible at rho = 1: unit deviation on the mainlobe,
    // zero sidelobes, zero block norms
    let mut w_best = vec![Complex64::new(0.0, 0.0); dim];
    let mut rho_best = 1.0f64;
    let mut lo = 0.0f64;
    let mut w = w_best.clone();

    for _ in 0..opts.max_bisections {
        if rho_best - lo <= opts.ripple_tol {
            break;
        }
        let mid = 0.5 * (rho_best + lo);
        prob.set_ripple(mid);
        let mut feasible = false;
        for _ in 0..opts.sweeps_per_level {
            if prob.sweep(&mut w) <= opts.feasibility_tol {
                feasible = true;
                break;
            }
        }
        if feasible {
            let (main_dev, _) = prob.measure(&w);
            w_best.copy_from_slice(&w);
            rho_best = main_dev.min(mid);
        } else {
            lo = mid;
            // keep w as warm start; it sits near the infeasible level set
        }
    }

    if rho_best > 0.999 {
        return Err(Error::InfeasibleSidelobe {
            eps_linear: prob.eps,
        });
    }
    let (main_dev, side) = prob.measure(&w_best);
    debug_assert!(side <= prob.eps + 1e-6);
    debug_assert!(prob.caps_violation(&w_best) <= 1e-6);
    let _ = side;
    Ok((w_best, main_dev))
}

/// Minimax weights for a fixed subarray: minimizes the peak mainlobe
/// deviation from the unit-modulus phase target subject to
/// `|w^H c(theta)| <= sidelobe_eps` on the sidelobe grid.
pub fn design_minimax_weights(
    sub: &Subarray,
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    sidelobe_eps: f64,
    profile: PhaseProfile,
) -> Result<(BeamformerWeights, f64)> {
    design_minimax_weights_with(sub, geometry, receive, grid, sidelobe_eps, profile, &SolverOptions::default())
}

pub fn design_minimax_weights_with(
    sub: &Subarray,
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    sidelobe_eps: f64,
    profile: PhaseProfile,
    opts: &SolverOptions,
) -> Result<(BeamformerWeights, f64)> {
    sub.check_against(geometry)?;
    let prob = assemble(
        geometry,
        receive,
        grid,
        sidelobe_eps,
        profile,
        sub.indices(),
        Vec::new(),
    );
    let (w, rho) = run_design(prob, opts)?;
    Ok((BeamformerWeights::new(w), rho))
}

/// Relaxed-selection variant over the full candidate grid: weights span all
/// `M` antenna blocks and block `m` is norm-capped by `caps[m]`.
pub fn design_minimax_weights_capped(
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    sidelobe_eps: f64,
    profile: PhaseProfile,
    caps: &[f64],
) -> Result<(BeamformerWeights, f64)> {
    let m = geometry.num_antennas();
    if caps.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: caps.len(),
        });
    }
    let d = geometry.spacing();
    let cap_sum: f64 = caps.iter().sum();
    let positions: Vec<usize> = (0..m).collect();
    let mut prob = assemble(
        geometry,
        receive,
        grid,
        sidelobe_eps,
        profile,
        &positions,
        caps.to_vec(),
    );
    // weighted aperture center for the phase target
    if cap_sum > 0.0 {
        let mean_tx = caps
            .iter()
            .enumerate()
            .map(|(i, &z)| z * i as f64 * d)
            .sum::<f64>()
            / cap_sum;
        let mean_rx = receive.positions().iter().sum::<f64>() / receive.len() as f64;
        let center = mean_tx + mean_rx;
        for (t, &theta) in prob.targets[..prob.n_main].iter_mut().zip(grid.mainlobe()) {
            *t = Complex64::from_polar(1.0, -profile.mu(theta, center));
        }
    }
    let (w, rho) = run_design(prob, &SolverOptions::default())?;
    Ok((BeamformerWeights::new(w), rho))
}

/// Achieved minimax mainlobe ripple of a subarray, used for dictionary ranking.
pub fn ripple_metric(
    sub: &Subarray,
    geometry: &ArrayGeometry,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    sidelobe_eps: f64,
) -> Result<f64> {
    design_minimax_weights(sub, geometry, receive, grid, sidelobe_eps, PhaseProfile::default())
        .map(|(_, rho)| rho)
}
