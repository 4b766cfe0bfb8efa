//! Monte Carlo detection statistics for stored-and-retrieved photons.
//!
//! Trials are independent: each draws a photon number from the source,
//! thins every photon by the survival probability of the propagated field
//! and the detection-path efficiency, places survivors along the output
//! intensity profile, and adds detector dark counts. Trials run in fixed
//! chunks with per-chunk derived seeds, so results are reproducible for a
//! given seed no matter how the chunks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::OpticalPulse;

/// Trials per work unit; results are merged in index order.
pub const TRIAL_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonSource {
    /// Mean photons per trial arriving at the memory input.
    pub mean_photons_per_trial: f64,
}

impl PhotonSource {
    pub fn validate(&self) -> Result<()> {
        if !(self.mean_photons_per_trial.is_finite() && self.mean_photons_per_trial >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mean photon number must be non-negative, got {}",
                self.mean_photons_per_trial
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorModel {
    /// Detection-path transmission times detector quantum efficiency.
    pub efficiency: f64,
    pub dark_rate_per_s: f64,
    /// Histogram bin width.
    pub time_bin_s: f64,
    /// Optional gate; clicks outside it are discarded.
    pub gate_s: Option<(f64, f64)>,
}

impl Default for DetectorModel {
    fn default() -> Self {
        DetectorModel { efficiency: 1.0, dark_rate_per_s: 0.0, time_bin_s: 10.0e-9, gate_s: None }
    }
}

impl DetectorModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.efficiency) || !self.efficiency.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "detector efficiency must lie in [0, 1], got {}",
                self.efficiency
            )));
        }
        if !(self.dark_rate_per_s.is_finite() && self.dark_rate_per_s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dark rate must be non-negative, got {}",
                self.dark_rate_per_s
            )));
        }
        if !(self.time_bin_s.is_finite() && self.time_bin_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time bin must be positive, got {}",
                self.time_bin_s
            )));
        }
        if let Some((lo, hi)) = self.gate_s {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "gate must be an ordered interval, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Detection-time histogram accumulated over all trials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EchoHistogram {
    pub start_s: f64,
    pub bin_s: f64,
    pub counts: Vec<u64>,
    pub n_trials: u64,
}

impl EchoHistogram {
    pub fn total_counts(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn photons_per_trial(&self) -> f64 {
        self.total_counts() as f64 / self.n_trials as f64
    }

    /// Counts in bins whose centers fall inside [lo, hi].
    pub fn window_counts(&self, lo_s: f64, hi_s: f64) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let center = self.start_s + (*i as f64 + 0.5) * self.bin_s;
                (lo_s..=hi_s).contains(&center)
            })
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn photons_per_trial_in(&self, lo_s: f64, hi_s: f64) -> f64 {
        self.window_counts(lo_s, hi_s) as f64 / self.n_trials as f64
    }

    /// Standard error of the per-trial count in a window. Counts are a sum
    /// of rare independent events, so the Poisson form sqrt(N)/n applies.
    pub fn photons_per_trial_stderr_in(&self, lo_s: f64, hi_s: f64) -> f64 {
        (self.window_counts(lo_s, hi_s) as f64).sqrt() / self.n_trials as f64
    }

    /// Memory efficiency estimate: per-trial counts in the echo window over
    /// the mean input photon number. Detection losses stay folded in, as
    /// they would in the measured quantity.
    pub fn efficiency_estimate(&self, lo_s: f64, hi_s: f64, source: &PhotonSource) -> Result<f64> {
        source.validate()?;
        if source.mean_photons_per_trial == 0.0 {
            return Err(Error::InvalidParameter(
                "cannot normalize efficiency by a zero-photon source".into(),
            ));
        }
        Ok(self.photons_per_trial_in(lo_s, hi_s) / source.mean_photons_per_trial)
    }
}

/// Runs `n_trials` storage attempts against a propagated output field.
///
/// `input_energy` is the pulse energy sent at the memory; the ratio of
/// output to input energy is each photon's survival probability, and the
/// output intensity profile is the arrival-time density of the survivors.
pub fn run_experiment(
    input_energy: f64,
    output: &OpticalPulse,
    source: &PhotonSource,
    detector: &DetectorModel,
    n_trials: u64,
    seed: u64,
) -> Result<EchoHistogram> {
    source.validate()?;
    detector.validate()?;
    if !(input_energy.is_finite() && input_energy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "input energy must be positive, got {input_energy}"
        )));
    }
    if n_trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let survival = output.energy() / input_energy;
    if survival > 1.0 + 1.0e-9 {
        return Err(Error::NumericalGuard(format!(
            "output energy exceeds input ({survival}x); the filter must be passive"
        )));
    }
    let p_click = survival.min(1.0) * detector.efficiency;

    let dt = output.dt_s();
    let n_samples = output.len();
    let duration = n_samples as f64 * dt;
    let n_bins = (duration / detector.time_bin_s).ceil() as usize;
    if n_bins == 0 {
        return Err(Error::InvalidParameter("record shorter than one time bin".into()));
    }

    // Arrival-time law: cumulative output intensity, sample-resolved.
    let mut cdf = Vec::with_capacity(n_samples);
    let mut acc = 0.0f64;
    for a in output.envelope() {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let total_weight = acc;

    let (dark_lo, dark_hi) = match detector.gate_s {
        Some((lo, hi)) => (lo.max(output.t0_s()), hi.min(output.t0_s() + duration)),
        None => (output.t0_s(), output.t0_s() + duration),
    };
    let dark_mean = detector.dark_rate_per_s * (dark_hi - dark_lo).max(0.0);

    let n_chunks = n_trials.div_ceil(TRIAL_CHUNK);
    let chunk_histograms: Vec<Vec<u64>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let trials = TRIAL_CHUNK.min(n_trials - chunk * TRIAL_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ (chunk + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let mut counts = vec![0u64; n_bins];
            let source_dist = (source.mean_photons_per_trial > 0.0)
                .then(|| Poisson::new(source.mean_photons_per_trial).unwrap());
            let dark_dist = (dark_mean > 0.0).then(|| Poisson::new(dark_mean).unwrap());
            for _ in 0..trials {
                if let Some(dist) = &source_dist {
                    let photons = dist.sample(&mut rng) as u64;
                    for _ in 0..photons {
                        if total_weight <= 0.0 || rng.gen::<f64>() >= p_click {
                            continue;
                        }
                        let u = rng.gen::<f64>() * total_weight;
                        let idx = cdf.partition_point(|&c| c <= u).min(n_samples - 1);
                        let t = output.t0_s() + (idx as f64 + 0.5) * dt;
                        record_click(&mut counts, output.t0_s(), detector, t, duration);
                    }
                }
                if let Some(dist) = &dark_dist {
                    let clicks = dist.sample(&mut rng) as u64;
                    for _ in 0..clicks {
                        let t = dark_lo + rng.gen::<f64>() * (dark_hi - dark_lo);
                        record_click(&mut counts, output.t0_s(), detector, t, duration);
                    }
                }
            }
            counts
        })
        .collect();

    let mut counts = vec![0u64; n_bins];
    for chunk in chunk_histograms {
        for (total, c) in counts.iter_mut().zip(chunk) {
            *total += c;
        }
    }
    Ok(EchoHistogram { start_s: output.t0_s(), bin_s: detector.time_bin_s, counts, n_trials })
}

fn record_click(counts: &mut [u64], start_s: f64, detector: &DetectorModel, t: f64, duration: f64) {
    if let Some((lo, hi)) = detector.gate_s {
        if t < lo || t > hi {
            return;
        }
    }
    if t < start_s || t >= start_s + duration {
        return;
    }
    let bin = ((t - start_s) / detector.time_bin_s) as usize;
    if bin < counts.len() {
        counts[bin] += 1;
    }
}
