//! Sequential convex programming for symbol subset selection.
//!
//! The boolean antenna-selection vector is relaxed to `[0,1]^M` with
//! `1'z = K`, and the concave boolean-promoting penalty `z'(z - 1)` is
//! linearized around the previous iterate, giving a convex subproblem per
//! round. Subproblems are solved by projected first-order iterations; a round
//! whose solution is boolean (every entry within 1e-6 of 0 or 1) terminates
//! the loop. Output quality is anchored by exhaustive oracles at toy scale,
//! not by solver internals; callers retry with fresh random initializations
//! when a run fails to go boolean.

use super::{Codeword, TIE_EPS};
use crate::array::Subarray;
use crate::error::{Error, Result};
use crate::pattern::{
    design_minimax_weights, design_minimax_weights_capped, PatternGrid, PhaseProfile,
};
use crate::{ArrayGeometry, ReceiveArray};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct ScpOptions {
    /// Trade-off between the selection objective and the boolean penalty.
    pub mu: f64,
    /// Outer linearization rounds before giving up.
    pub max_iter: usize,
    /// Iterations of the inner projected first-order solver.
    pub inner_iters: usize,
    /// An entry counts as boolean when within this of 0 or 1.
    pub boolean_tol: f64,
}

impl Default for ScpOptions {
    fn default() -> Self {
        Self {
            mu: 1.0,
            max_iter: 60,
            inner_iters: 1500,
            boolean_tol: 1e-6,
        }
    }
}

/// Euclidean projection onto `{0 <= z <= 1, sum z = k}` by bisection on the
/// shift in `clamp(v - lambda, 0, 1)`.
pub(crate) fn project_capped_simplex(v: &[f64], k: f64) -> Vec<f64> {
    let sum_at = |lambda: f64| -> f64 {
        v.iter().map(|&x| (x - lambda).clamp(0.0, 1.0)).sum::<f64>()
    };
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if sum_at(mid) > k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    v.iter().map(|&x| (x - lambda).clamp(0.0, 1.0)).collect()
}

fn is_boolean(z: &[f64], k: usize, tol: f64) -> bool {
    let mut ones = 0usize;
    for &x in z {
        if x > 1.0 - tol {
            ones += 1;
        } else if x > tol {
            return false;
        }
    }
    ones == k
}

fn snap_support(z: &[f64]) -> Vec<usize> {
    z.iter()
        .enumerate()
        .filter(|(_, &x)| x > 0.5)
        .map(|(i, _)| i)
        .collect()
}

fn random_feasible<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let v: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
    project_capped_simplex(&v, k as f64)
}

/// Inner solver of the communication subproblem: maximize
/// `min_l (2K - 2 <z_l, z>) + <lin, z>` over the capped simplex by projected
/// supergradient ascent with best-point tracking.
fn solve_comm_subproblem(
    chosen: &[Vec<f64>],
    lin: &[f64],
    k: usize,
    start: &[f64],
    iters: usize,
) -> Vec<f64> {
    let m = start.len();
    let objective = |z: &[f64]| -> f64 {
        let nu = chosen
            .iter()
            .map(|zl| {
                2.0 * k as f64 - 2.0 * zl.iter().zip(z).map(|(a, b)| a * b).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        let linear: f64 = lin.iter().zip(z).map(|(a, b)| a * b).sum();
        if chosen.is_empty() {
            linear
        } else {
            nu + linear
        }
    };
    let mut z = start.to_vec();
    let mut best = z.clone();
    let mut best_val = objective(&z);
    for j in 0..iters {
        // supergradient of the active minimum plus the linear part
        let mut grad = lin.to_vec();
        if !chosen.is_empty() {
            let mut active = 0usize;
            let mut val = f64::INFINITY;
            for (l, zl) in chosen.iter().enumerate() {
                let d = 2.0 * k as f64
                    - 2.0 * zl.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
                if d < val {
                    val = d;
                    active = l;
                }
            }
            for (g, a) in grad.iter_mut().zip(&chosen[active]) {
                *g -= 2.0 * a;
            }
        }
        let step = 0.5 / ((j + 1) as f64).sqrt();
        let trial: Vec<f64> = z.iter().zip(&grad).map(|(x, g)| x + step * g).collect();
        z = project_capped_simplex(&trial, k as f64);
        let val = objective(&z);
        if val > best_val {
            best_val = val;
            best = z.clone();
        }
    }
    // prefer an equally good vertex when one is in reach
    let rounded = {
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| best[b].partial_cmp(&best[a]).unwrap().then(a.cmp(&b)));
        let mut r = vec![0.0; m];
        for &i in idx.iter().take(k) {
            r[i] = 1.0;
        }
        r
    };
    if objective(&rounded) >= best_val - TIE_EPS {
        rounded
    } else {
        best
    }
}

/// One round of symbol selection under the communication metric: from a random
/// feasible start, alternates subproblem solves with penalty re-linearization
/// until the selection vector goes boolean, then maps it to a codeword.
pub fn scp_comm_select<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    already_chosen: &[Codeword],
    opts: &ScpOptions,
    rng: &mut R,
) -> Result<Codeword> {
    if k == 0 || k > m {
        return Err(Error::SubsetTooLarge { k, m });
    }
    if opts.mu < 0.0 {
        return Err(Error::InvalidParameter("mu must be nonnegative".into()));
    }
    let chosen: Vec<Vec<f64>> = already_chosen
        .iter()
        .map(|cw| {
            let mut z = vec![0.0; m];
            for &i in cw.sub.indices() {
                z[i] = 1.0;
            }
            z
        })
        .collect();

    let mut z = random_feasible(m, k, rng);
    for _ in 0..opts.max_iter {
        let lin: Vec<f64> = z.iter().map(|&zi| opts.mu * (2.0 * zi - 1.0)).collect();
        z = solve_comm_subproblem(&chosen, &lin, k, &z, opts.inner_iters);
        if is_boolean(&z, k, opts.boolean_tol) {
            let sub = Subarray::new(snap_support(&z))?;
            return Codeword::selection(sub, m, already_chosen.len());
        }
    }
    Err(Error::NonBooleanSelection(opts.max_iter))
}

/// One round of symbol selection under the radar metric: alternates the
/// relaxed minimax weight design (blocks norm-capped by `z`) with a projected
/// penalty step on `z` that uses the realized block usage as the constraint
/// sensitivity. A boolean outcome is re-designed on its own subarray to report
/// the achieved mainlobe ripple.
pub fn scp_radar_select<R: Rng + ?Sized>(
    geometry: &ArrayGeometry,
    k: usize,
    receive: &ReceiveArray,
    grid: &PatternGrid,
    sidelobe_eps: f64,
    opts: &ScpOptions,
    rng: &mut R,
) -> Result<(Codeword, f64)> {
    let m = geometry.num_antennas();
    if k == 0 || k > m {
        return Err(Error::SubsetTooLarge { k, m });
    }
    let n = receive.len();
    let mut z = random_feasible(m, k, rng);
    for _ in 0..opts.max_iter {
        let (w, _rho) = design_minimax_weights_capped(
            geometry,
            receive,
            grid,
            sidelobe_eps,
            PhaseProfile::default(),
            &z,
        )?;
        let usage: Vec<f64> = (0..m)
            .map(|b| {
                w.as_slice()[b * n..(b + 1) * n]
                    .iter()
                    .map(|x| x.norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        let trial: Vec<f64> = z
            .iter()
            .zip(&usage)
            .map(|(&zi, &ui)| zi + 0.7 * (opts.mu * (2.0 * zi - 1.0) + ui))
            .collect();
        z = project_capped_simplex(&trial, k as f64);
        if is_boolean(&z, k, opts.boolean_tol) {
            let sub = Subarray::new(snap_support(&z))?;
            let (_, rho) = design_minimax_weights(
                &sub,
                geometry,
                receive,
                grid,
                sidelobe_eps,
                PhaseProfile::default(),
            )?;
            let cw = Codeword::selection(sub, m, 0)?;
            return Ok((cw, rho));
        }
    }
    Err(Error::NonBooleanSelection(opts.max_iter))
}
