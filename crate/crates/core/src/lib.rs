//! Models for a solid-state quantum-memory node with a telecom interface:
//! comb-structured absorption spectra and echo propagation, the laser lock
//! chain that keeps the converted signal on resonance, sum-frequency
//! conversion bookkeeping, single-photon counting statistics, and multiplexed
//! entanglement-rate estimates.

pub mod config;
pub mod conversion;
pub mod counting;
pub mod error;
pub mod lockchain;
pub mod propagation;
pub mod pulse;
pub mod rate;
pub mod report;
pub mod spectrum;

pub use error::{Error, Result};
