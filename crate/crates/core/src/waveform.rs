//! Discrete orthonormal waveform bank and matched filtering.
//!
//! The bank rows are the first `K` rows of the `Ns`-point unitary DFT, so they
//! are orthonormal by construction and deterministic for a given `(K, Ns)`.
//! Any orthonormal bank is observationally equivalent after matched filtering,
//! which is why the simulator may inject noise directly at the filter output;
//! the time-domain path here exists to validate that shortcut.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// `K` orthonormal discrete waveforms of `Ns` fast-time samples each,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformBank {
    samples: Vec<Complex64>,
    k: usize,
    ns: usize,
}

/// One complex value per waveform branch after matched filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedFilterOutput {
    branches: Vec<Complex64>,
}

impl MatchedFilterOutput {
    pub fn branches(&self) -> &[Complex64] {
        &self.branches
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }
}

impl WaveformBank {
    /// Builds the deterministic bank: row k sample n is
    /// `exp(j 2 pi k n / Ns) / sqrt(Ns)`.
    pub fn build(k: usize, ns: usize) -> Result<Self> {
        if k == 0 || ns < k {
            return Err(Error::BankTooShort { k, ns });
        }
        let scale = 1.0 / (ns as f64).sqrt();
        let mut samples = Vec::with_capacity(k * ns);
        for row in 0..k {
            for n in 0..ns {
                // reduce k*n mod Ns before the trig call to keep phases accurate
                let idx = (row * n) % ns;
                let ph = TAU * idx as f64 / ns as f64;
                samples.push(Complex64::from_polar(scale, ph));
            }
        }
        Ok(Self { samples, k, ns })
    }

    pub fn num_waveforms(&self) -> usize {
        self.k
    }

    pub fn samples_per_pulse(&self) -> usize {
        self.ns
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.samples[k * self.ns..(k + 1) * self.ns]
    }

    /// Gram matrix `G[i][j] = <row_i, row_j>` (row-major k x k).
    pub fn gram(&self) -> Vec<Complex64> {
        let mut g = Vec::with_capacity(self.k * self.k);
        for i in 0..self.k {
            for j in 0..self.k {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, b) in self.row(i).iter().zip(self.row(j)) {
                    acc += a * b.conj();
                }
                g.push(acc);
            }
        }
        g
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let g = self.gram();
        let mut worst = 0.0f64;
        for i in 0..self.k {
            for j in 0..self.k {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[i * self.k + j] - want).norm());
            }
        }
        worst
    }

    /// Scales row k by `rotations[k]`; orthonormality is preserved.
    pub fn rotate(&self, rotations: &[Complex64]) -> Result<WaveformBank> {
        if rotations.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: rotations.len(),
            });
        }
        if rotations.iter().any(|r| (r.norm() - 1.0).abs() > 1e-9) {
            return Err(Error::NonUnitRotation);
        }
        let mut samples = Vec::with_capacity(self.samples.len());
        for row in 0..self.k {
            for s in self.row(row) {
                samples.push(rotations[row] * s);
            }
        }
        Ok(WaveformBank {
            samples,
            k: self.k,
            ns: self.ns,
        })
    }

    /// Time-domain superposition `sum_k coeffs[k] * row_k`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if coeffs.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: coeffs.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.ns];
        for (c, row) in coeffs.iter().zip(0..self.k) {
            for (o, s) in out.iter_mut().zip(self.row(row)) {
                *o += c * s;
            }
        }
        Ok(out)
    }
}

/// Branch k is the inner product of `received` with the conjugate of row k.
pub fn matched_filter(received: &[Complex64], bank: &WaveformBank) -> Result<MatchedFilterOutput> {
    if received.len() != bank.samples_per_pulse() {
        return Err(Error::LengthMismatch {
            expected: bank.samples_per_pulse(),
            got: received.len(),
        });
    }
    let branches = (0..bank.num_waveforms())
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (r, s) in received.iter().zip(bank.row(k)) {
                acc += r * s.conj();
            }
            acc
        })
        .collect();
    Ok(MatchedFilterOutput { branches })
}
