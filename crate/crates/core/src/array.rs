//! Transmit-array geometry, steering vectors, antenna selection and
//! waveform-antenna permutation matrices, angular-ambiguity analysis, and the
//! ambiguity-mitigating phase rotations.
//!
//! Angles are radians everywhere in this crate; positions and spacings are in
//! wavelengths. Candidate antenna `m` of a uniform grid sits at position
//! `m * d` (0-based), so the phase it contributes toward direction `theta` is
//! `2*pi*d*m*sin(theta)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Uniform grid of `M` candidate transmit antennas spaced `d` wavelengths apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    num_antennas: usize,
    spacing: f64,
}

impl ArrayGeometry {
    pub fn new(num_antennas: usize, spacing_wavelengths: f64) -> Result<Self> {
        if num_antennas < 2 {
            return Err(Error::InvalidGeometry(format!(
                "need at least 2 candidate antennas, got {num_antennas}"
            )));
        }
        if !(spacing_wavelengths > 0.0) || !spacing_wavelengths.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "spacing must be positive, got {spacing_wavelengths}"
            )));
        }
        Ok(Self {
            num_antennas,
            spacing: spacing_wavelengths,
        })
    }

    pub fn num_antennas(&self) -> usize {
        self.num_antennas
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Phase advance between adjacent candidate antennas toward `theta`.
    pub fn phase_step(&self, theta: f64) -> f64 {
        TAU * self.spacing * theta.sin()
    }
}

/// Receive array: `N` antennas at strictly increasing positions (wavelengths).
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiveArray {
    positions: Vec<f64>,
}

impl ReceiveArray {
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidGeometry(
                "receive array needs at least one antenna".into(),
            ));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGeometry(
                "receive positions must be strictly increasing".into(),
            ));
        }
        Ok(Self { positions })
    }

    /// Uniform linear receive array starting at position zero.
    pub fn ula(n: usize, spacing_wavelengths: f64) -> Result<Self> {
        if n == 0 || !(spacing_wavelengths > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "invalid receive ULA: n={n}, spacing={spacing_wavelengths}"
            )));
        }
        Self::new((0..n).map(|i| i as f64 * spacing_wavelengths).collect())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn steering(&self, theta: f64) -> SteeringVector {
        let s = theta.sin();
        SteeringVector::from_phases(self.positions.iter().map(|&p| TAU * p * s))
    }
}

/// Strictly increasing subset of `K` candidate antenna indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subarray {
    indices: Vec<usize>,
}

impl Subarray {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::UnorderedSubarray);
        }
        if indices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::UnorderedSubarray);
        }
        Ok(Self { indices })
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn max_index(&self) -> usize {
        *self.indices.last().expect("non-empty")
    }

    pub fn check_against(&self, geometry: &ArrayGeometry) -> Result<()> {
        let m = geometry.num_antennas();
        if self.max_index() >= m {
            return Err(Error::IndexOutOfRange {
                index: self.max_index(),
                m,
            });
        }
        Ok(())
    }
}

/// K x M binary selection matrix with exactly one 1 per row and at most one
/// per column. Rows follow ascending antenna order; reordering across
/// waveforms is kept in a separate [`PermutationMatrix`], never folded in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMatrix {
    cols: Vec<usize>,
    m: usize,
}

impl SelectionMatrix {
    pub fn from_subarray(sub: &Subarray, m: usize) -> Result<Self> {
        if sub.max_index() >= m {
            return Err(Error::IndexOutOfRange {
                index: sub.max_index(),
                m,
            });
        }
        Ok(Self {
            cols: sub.indices().to_vec(),
            m,
        })
    }

    pub fn k(&self) -> usize {
        self.cols.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Column holding the 1 in the given row.
    pub fn selected(&self, row: usize) -> usize {
        self.cols[row]
    }

    /// `P * v` for a length-M vector.
    pub fn apply(&self, full: &[Complex64]) -> Result<Vec<Complex64>> {
        if full.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: full.len(),
            });
        }
        Ok(self.cols.iter().map(|&c| full[c]).collect())
    }

    pub fn dense(&self) -> Vec<Vec<u8>> {
        self.cols
            .iter()
            .map(|&c| {
                let mut row = vec![0u8; self.m];
                row[c] = 1;
                row
            })
            .collect()
    }
}

/// K x K permutation: output slot `i` takes input slot `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationMatrix {
    perm: Vec<usize>,
}

impl PermutationMatrix {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &p in &perm {
            if p >= k || seen[p] {
                return Err(Error::InvalidPermutation);
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            perm: (0..k).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn apply<T: Clone>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.perm.len() {
            return Err(Error::LengthMismatch {
                expected: self.perm.len(),
                got: v.len(),
            });
        }
        Ok(self.perm.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn dense(&self) -> Vec<Vec<u8>> {
        let k = self.perm.len();
        self.perm
            .iter()
            .map(|&p| {
                let mut row = vec![0u8; k];
                row[p] = 1;
                row
            })
            .collect()
    }
}

/// Vector of unit-modulus phase terms an array exhibits toward a direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    entries: Vec<Complex64>,
}

impl SteeringVector {
    /// Builds from explicit entries; every entry must be unit-modulus to 1e-12.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        for e in &entries {
            if (e.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "steering entry has modulus {}",
                    e.norm()
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_phases<I: IntoIterator<Item = f64>>(phases: I) -> Self {
        Self {
            entries: phases
                .into_iter()
                .map(|p| Complex64::new(p.cos(), p.sin()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.entries.iter()
    }
}

impl std::ops::Index<usize> for SteeringVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

/// Per-antenna phase rotations that land the full-array phases on the M-th
/// roots of unity at the communication direction they were built for.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePlan {
    angles: Vec<f64>,
}

impl PhasePlan {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angle(&self, m: usize) -> f64 {
        self.angles[m]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Unit complex rotation for antenna `m`.
    pub fn unit(&self, m: usize) -> Complex64 {
        Complex64::new(self.angles[m].cos(), self.angles[m].sin())
    }

    /// Applies the plan entrywise to a full-array steering vector.
    pub fn apply_full(&self, steering: &SteeringVector) -> Result<SteeringVector> {
        if steering.len() != self.angles.len() {
            return Err(Error::LengthMismatch {
                expected: self.angles.len(),
                got: steering.len(),
            });
        }
        Ok(SteeringVector {
            entries: steering
                .iter()
                .enumerate()
                .map(|(m, &e)| self.unit(m) * e)
                .collect(),
        })
    }

    /// Applies the plan to a subarray steering vector (entry k rotated by the
    /// plan angle of the k-th selected antenna).
    pub fn apply_subarray(&self, sub: &Subarray, steering: &SteeringVector) -> Result<SteeringVector> {
        if steering.len() != sub.k() {
            return Err(Error::LengthMismatch {
                expected: sub.k(),
                got: steering.len(),
            });
        }
        if sub.max_index() >= self.angles.len() {
            return Err(Error::IndexOutOfRange {
                index: sub.max_index(),
                m: self.angles.len(),
            });
        }
        Ok(SteeringVector {
            entries: sub
                .indices()
                .iter()
                .zip(steering.iter())
                .map(|(&m, &e)| self.unit(m) * e)
                .collect(),
        })
    }
}

/// Full M-antenna steering vector toward `theta`.
pub fn steering_vector(geometry: &ArrayGeometry, theta: f64) -> SteeringVector {
    let step = geometry.phase_step(theta);
    SteeringVector::from_phases((0..geometry.num_antennas()).map(|m| step * m as f64))
}

/// Steering vector of the selected subarray: the entrywise pick of the full
/// vector, equal to `P a(theta)` for the canonical selection matrix.
pub fn subarray_steering(
    geometry: &ArrayGeometry,
    sub: &Subarray,
    theta: f64,
) -> Result<SteeringVector> {
    sub.check_against(geometry)?;
    let step = geometry.phase_step(theta);
    Ok(SteeringVector::from_phases(
        sub.indices().iter().map(|&m| step * m as f64),
    ))
}

/// Direction at which the M candidate phases are maximally spread on the unit
/// circle: `asin(1 / (M d))`. Real only when the aperture `M d` reaches one
/// wavelength.
pub fn maximal_spread_angle(geometry: &ArrayGeometry) -> Result<f64> {
    let aperture = geometry.num_antennas() as f64 * geometry.spacing();
    if aperture < 1.0 {
        return Err(Error::NoMaximalSpreadAngle { aperture });
    }
    Ok((1.0 / aperture).asin())
}

/// Directions where two antennas alias to the same phase: all real solutions
/// of `(M - m) d sin(theta) = 1` for `m = 1..M-1`, ascending.
pub fn ambiguity_angles(geometry: &ArrayGeometry) -> Vec<f64> {
    let m = geometry.num_antennas();
    let d = geometry.spacing();
    (1..m)
        .rev()
        .filter_map(|gap| {
            let arg = 1.0 / (gap as f64 * d);
            (arg <= 1.0).then(|| arg.asin())
        })
        .collect()
}

/// Phase rotations making the effective full-array constellation the M-th
/// roots of unity at `theta_c`:
/// `phi_m = 2 pi m / M - 2 pi d m sin(theta_c)` for 0-based `m`.
pub fn phase_rotation_plan(geometry: &ArrayGeometry, theta_c: f64) -> PhasePlan {
    let m = geometry.num_antennas();
    let step = geometry.phase_step(theta_c);
    PhasePlan {
        angles: (0..m)
            .map(|i| TAU * i as f64 / m as f64 - step * i as f64)
            .collect(),
    }
}

/// Post-rotation symbol of a subarray: entry k is `exp(j 2 pi l_k / M)` for
/// the k-th selected index. Independent of the direction the rotation plan
/// was built for.
pub fn rotated_symbol(sub: &Subarray, m: usize) -> Result<SteeringVector> {
    if sub.max_index() >= m {
        return Err(Error::IndexOutOfRange {
            index: sub.max_index(),
            m,
        });
    }
    Ok(SteeringVector::from_phases(
        sub.indices().iter().map(|&l| TAU * l as f64 / m as f64),
    ))
}
