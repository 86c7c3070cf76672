//! Counter-based random streams for reproducible parallel Monte Carlo.
//!
//! Every stream is a pure function of its key, so a draw for
//! (seed, sweep point, symbol) is identical no matter which thread computes it
//! or in which order the symbols are processed.

use num_complex::Complex64;
use std::f64::consts::TAU;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed counter generator (splitmix64 output function over a Weyl sequence).
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    ctr: u64,
}

impl CounterRng {
    /// Derives an independent stream from a list of key parts, e.g.
    /// `[seed, point_index, symbol_index]`.
    pub fn keyed(parts: &[u64]) -> Self {
        let mut key = 0x243f_6a88_85a3_08d3;
        for (i, p) in parts.iter().enumerate() {
            key = splitmix(key ^ p.wrapping_add(GAMMA.wrapping_mul(i as u64 + 1)));
        }
        Self { key, ctr: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.ctr = self.ctr.wrapping_add(1);
        splitmix(self.key.wrapping_add(GAMMA.wrapping_mul(self.ctr)))
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform on (0, 1]; safe under a logarithm.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Standard normal (Box-Muller).
    pub fn standard_normal(&mut self) -> f64 {
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        r * (TAU * self.uniform()).cos()
    }

    /// Circularly symmetric complex Gaussian with E|n|^2 = var.
    pub fn cscg(&mut self, var: f64) -> Complex64 {
        let mag = (-var * self.uniform_open().ln()).sqrt();
        Complex64::from_polar(mag, TAU * self.uniform())
    }

    /// `nb` uniform random bits packed into the low end of a u64.
    pub fn bits(&mut self, nb: u32) -> u64 {
        debug_assert!(nb <= 64);
        if nb == 64 {
            self.next_u64()
        } else {
            self.next_u64() & ((1u64 << nb) - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = CounterRng::keyed(&[42, 3, 17]);
        let mut b = CounterRng::keyed(&[42, 3, 17]);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_keys_give_distinct_streams() {
        let mut a = CounterRng::keyed(&[42, 3, 17]);
        let mut b = CounterRng::keyed(&[42, 3, 18]);
        let va: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let vb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(va, vb);
    }

    #[test]
    fn normal_moments() {
        let mut rng = CounterRng::keyed(&[7]);
        let n = 200_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x = rng.standard_normal();
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn cscg_power_and_circularity() {
        let mut rng = CounterRng::keyed(&[11]);
        let n = 200_000;
        let var = 2.5;
        let mut p = 0.0;
        let mut z = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let s = rng.cscg(var);
            p += s.norm_sqr();
            z += s * s;
        }
        assert!((p / n as f64 - var).abs() < 0.05 * var);
        // pseudo-variance of a circular complex Gaussian vanishes
        assert!((z / n as f64).norm() < 0.05 * var);
    }

    #[test]
    fn bits_are_masked() {
        let mut rng = CounterRng::keyed(&[5]);
        for _ in 0..100 {
            assert!(rng.bits(13) < (1 << 13));
        }
    }
}
