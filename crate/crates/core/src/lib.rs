//! Sparse transmit-array signaling for joint MIMO radar-communications
//! platforms.
//!
//! A radar with `M` candidate antennas switches `K` of them onto orthogonal
//! waveforms each pulse; the selected configuration (and optionally the
//! waveform-antenna pairing) is itself the communication symbol. This crate
//! covers the full pipeline at desk scale:
//!
//! * [`array`] — geometry, steering vectors, selection/permutation matrices,
//!   angular-ambiguity analysis and the mitigating phase rotations;
//! * [`waveform`] — orthonormal waveform banks and matched filtering;
//! * [`dictionary`] — symbol dictionary construction (greedy max-min,
//!   SCP relaxation, beampattern-ripple ranking, permutation augmentation,
//!   regularized subgroups) with JSON persistence;
//! * [`signaling`] — encode/decode and closed-form error rates;
//! * [`pattern`] — virtual-array beampatterns and minimax beamforming;
//! * [`sim`] — seeded Monte Carlo sweeps (reproducible under any worker
//!   count) and [`report`] for the CSV outputs;
//! * [`config`] — the JSON run configuration used by the CLI.
//!
//! Data-parallel loops run on rayon with the `parallel` feature (default) and
//! fall back to sequential execution without it; results are identical.

pub mod array;
pub mod config;
pub mod dictionary;
pub mod error;
pub mod exec;
pub mod pattern;
pub mod report;
pub mod rng;
pub mod signaling;
pub mod sim;
pub mod waveform;

pub use array::{ArrayGeometry, ReceiveArray, Subarray};
pub use error::{Error, Result};
