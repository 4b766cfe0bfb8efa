//! Entanglement distribution rates for a multiplexed memory link.
//!
//! One elementary link spans two nodes that each send a converted photon
//! half way; a pair registers only when both arrive. The memory stores
//! many temporal and spectral modes per reload cycle, so the per-cycle
//! success probability is aggregated over the mode count before any rate
//! is formed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-trial slot cap for the chain simulation.
pub const MAX_SLOTS_PER_TRIAL: u64 = 1_000_000;

/// Inclusion-exclusion over link subsets is exponential; cap the width.
pub const MAX_EXACT_LINKS: usize = 20;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    /// Node separation for one elementary link.
    pub length_km: f64,
    pub loss_db_per_km: f64,
    /// Telecom-to-memory conversion, photon-number terms.
    pub conversion_efficiency: f64,
    /// Storage-and-recall efficiency of the memory.
    pub memory_efficiency: f64,
    /// Detection-path transmission times detector quantum efficiency.
    pub detector_efficiency: f64,
    /// Success probability of one entanglement swap.
    pub swap_success: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            length_km: 10.0,
            loss_db_per_km: 0.2,
            conversion_efficiency: 0.279,
            memory_efficiency: 0.079,
            detector_efficiency: 6.8 / 7.9,
            swap_success: 0.5,
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.length_km.is_finite() && self.length_km > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "link length must be positive, got {} km",
                self.length_km
            )));
        }
        if !(self.loss_db_per_km.is_finite() && self.loss_db_per_km >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "fiber loss must be non-negative, got {} dB/km",
                self.loss_db_per_km
            )));
        }
        for (label, v) in [
            ("conversion efficiency", self.conversion_efficiency),
            ("memory efficiency", self.memory_efficiency),
            ("detector efficiency", self.detector_efficiency),
            ("swap success", self.swap_success),
        ] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(Error::InvalidParameter(format!(
                    "{label} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Transmission of half the link in the fiber.
    pub fn half_link_transmission(&self) -> f64 {
        10f64.powf(-self.loss_db_per_km * (self.length_km / 2.0) / 10.0)
    }

    /// Probability that one photon reaches the midpoint, is converted,
    /// stored and detected.
    pub fn single_photon_probability(&self) -> f64 {
        self.half_link_transmission()
            * self.conversion_efficiency
            * self.memory_efficiency
            * self.detector_efficiency
    }

    /// Probability one mode heralds the elementary link: both photons make it.
    pub fn link_success_probability(&self) -> f64 {
        self.single_photon_probability().powi(2)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiplexPlan {
    /// Duration of one stored mode; sets the temporal packing.
    pub mode_duration_s: f64,
    /// Memory reload rate; one multiplexed attempt per cycle.
    pub cycle_rate_hz: f64,
    /// Bandwidth of a single photon mode.
    pub mode_bandwidth_hz: f64,
    /// Total acceptance bandwidth of the memory.
    pub total_bandwidth_hz: f64,
}

impl Default for MultiplexPlan {
    fn default() -> Self {
        MultiplexPlan {
            mode_duration_s: 100.0e-9,
            cycle_rate_hz: 50.0e3,
            mode_bandwidth_hz: 100.0e6,
            total_bandwidth_hz: 1.0e9,
        }
    }
}

impl MultiplexPlan {
    pub fn validate(&self) -> Result<()> {
        for (label, v) in [
            ("mode duration", self.mode_duration_s),
            ("cycle rate", self.cycle_rate_hz),
            ("mode bandwidth", self.mode_bandwidth_hz),
            ("total bandwidth", self.total_bandwidth_hz),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{label} must be positive, got {v}")));
            }
        }
        if self.temporal_modes() == 0 {
            return Err(Error::InvalidParameter(
                "mode duration exceeds the storage cycle; no temporal mode fits".into(),
            ));
        }
        if self.spectral_modes() == 0 {
            return Err(Error::InvalidParameter(
                "mode bandwidth exceeds the available bandwidth; no spectral mode fits".into(),
            ));
        }
        Ok(())
    }

    /// Modes stacked in time over each storage cycle.
    pub fn temporal_modes(&self) -> u64 {
        (1.0 / self.cycle_rate_hz / self.mode_duration_s).floor() as u64
    }

    /// Modes stacked across the memory bandwidth.
    pub fn spectral_modes(&self) -> u64 {
        (self.total_bandwidth_hz / self.mode_bandwidth_hz).floor() as u64
    }

    pub fn mode_count(&self) -> u64 {
        self.temporal_modes() * self.spectral_modes()
    }
}

/// Rate summary for one elementary link plus a single swap stage.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateReport {
    pub link_success_probability: f64,
    pub temporal_modes: u64,
    pub spectral_modes: u64,
    pub mode_count: u64,
    /// Probability at least one mode succeeds in a cycle.
    pub cycle_success_probability: f64,
    pub attempts_per_s: f64,
    pub link_rate_hz: f64,
    /// Link rate folded with one swap stage.
    pub end_to_end_rate_hz: f64,
}

/// Success probability aggregated over independent modes.
pub fn any_mode_success(p_mode: f64, modes: u64) -> f64 {
    1.0 - (1.0 - p_mode).powi(modes.min(i32::MAX as u64) as i32)
}

pub fn multiplexed_rate(link: &LinkConfig, plan: &MultiplexPlan) -> Result<RateReport> {
    link.validate()?;
    plan.validate()?;
    let p = link.link_success_probability();
    let modes = plan.mode_count();
    let q = any_mode_success(p, modes);
    let link_rate = plan.cycle_rate_hz * q;
    Ok(RateReport {
        link_success_probability: p,
        temporal_modes: plan.temporal_modes(),
        spectral_modes: plan.spectral_modes(),
        mode_count: modes,
        cycle_success_probability: q,
        attempts_per_s: plan.cycle_rate_hz,
        link_rate_hz: link_rate,
        end_to_end_rate_hz: link_rate * link.swap_success,
    })
}

/// How intermediate links wait for each other in a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainPolicy {
    /// No storage between cycles: every link must herald in the same slot.
    SameSlot,
    /// Each link holds its success until the slowest one arrives.
    HoldUntilAll,
}

/// Slot statistics from repeated chain trials.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChainStats {
    pub mean_slots: f64,
    pub stderr_slots: f64,
    pub n_trials: u64,
}

/// Simulates how many slots a chain needs until end-to-end success,
/// drawing each link's herald as an independent Bernoulli event per slot.
pub fn chain_simulate(
    cycle_success: &[f64],
    policy: ChainPolicy,
    n_trials: u64,
    seed: u64,
) -> Result<ChainStats> {
    if cycle_success.is_empty() {
        return Err(Error::InvalidParameter("chain needs at least one link".into()));
    }
    if n_trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    for &q in cycle_success {
        if !(q.is_finite() && q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "per-cycle success must lie in (0, 1], got {q}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum2 = 0.0f64;
    let mut pending = vec![false; cycle_success.len()];
    for _ in 0..n_trials {
        let slots = match policy {
            ChainPolicy::SameSlot => {
                let mut slot = 0u64;
                loop {
                    slot += 1;
                    if slot > MAX_SLOTS_PER_TRIAL {
                        return Err(Error::NumericalGuard(format!(
                            "chain trial exceeded {MAX_SLOTS_PER_TRIAL} slots; success probability too small"
                        )));
                    }
                    if cycle_success.iter().all(|&q| rng.gen::<f64>() < q) {
                        break slot;
                    }
                }
            }
            ChainPolicy::HoldUntilAll => {
                for p in pending.iter_mut() {
                    *p = true;
                }
                let mut remaining = pending.len();
                let mut slot = 0u64;
                while remaining > 0 {
                    slot += 1;
                    if slot > MAX_SLOTS_PER_TRIAL {
                        return Err(Error::NumericalGuard(format!(
                            "chain trial exceeded {MAX_SLOTS_PER_TRIAL} slots; success probability too small"
                        )));
                    }
                    for (p, &q) in pending.iter_mut().zip(cycle_success) {
                        if *p && rng.gen::<f64>() < q {
                            *p = false;
                            remaining -= 1;
                        }
                    }
                }
                slot
            }
        };
        let s = slots as f64;
        sum += s;
        sum2 += s * s;
    }
    let n = n_trials as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    Ok(ChainStats { mean_slots: mean, stderr_slots: (var / n).sqrt(), n_trials })
}

/// Exact expected slots when every link must herald in the same slot:
/// a geometric wait with the product probability.
pub fn expected_slots_same_slot(cycle_success: &[f64]) -> Result<f64> {
    validate_probs(cycle_success)?;
    let p: f64 = cycle_success.iter().product();
    Ok(1.0 / p)
}

/// Exact expected slots when links hold their heralds: the mean of the
/// maximum of independent geometric waits, by inclusion-exclusion over
/// link subsets.
pub fn expected_slots_hold_all(cycle_success: &[f64]) -> Result<f64> {
    validate_probs(cycle_success)?;
    let n = cycle_success.len();
    if n > MAX_EXACT_LINKS {
        return Err(Error::InvalidParameter(format!(
            "exact chain expectation limited to {MAX_EXACT_LINKS} links, got {n}"
        )));
    }
    let mut total = 0.0f64;
    for mask in 1u32..(1u32 << n) {
        let mut miss = 1.0f64;
        for (i, &q) in cycle_success.iter().enumerate() {
            if mask & (1 << i) != 0 {
                miss *= 1.0 - q;
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign / (1.0 - miss);
    }
    Ok(total)
}

fn validate_probs(qs: &[f64]) -> Result<()> {
    if qs.is_empty() {
        return Err(Error::InvalidParameter("chain needs at least one link".into()));
    }
    for &q in qs {
        if !(q.is_finite() && q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "per-cycle success must lie in (0, 1], got {q}"
            )));
        }
    }
    Ok(())
}
