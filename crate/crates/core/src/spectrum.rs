//! Preparation of atomic-frequency-comb absorption spectra.
//!
//! A comb is a set of narrow absorbing teeth spaced by a fixed interval inside
//! a spectrally emptied window. Ions burned back into the window also absorb
//! on a second hyperfine transition, which adds a weaker replica comb at a
//! fixed offset from the main one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperfine structure of the storage transition, expressed as detunings from
/// the optical carrier used to burn the comb.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelScheme {
    /// Detuning of the comb center from the carrier, Hz.
    pub transition_center_hz: f64,
    /// Offset at which burned-back ions absorb on the second excited-state
    /// hyperfine component, Hz.
    pub replica_offset_hz: f64,
    /// Depth of the replica comb relative to the main comb, in [0, 1].
    pub replica_depth_ratio: f64,
    /// Label of the hyperfine class emptied during preparation. Reporting only.
    pub burnback_class: String,
}

impl Default for LevelScheme {
    fn default() -> Self {
        LevelScheme {
            transition_center_hz: 0.0,
            replica_offset_hz: 5.0e6,
            replica_depth_ratio: 0.35,
            burnback_class: "aux-ground-class".to_string(),
        }
    }
}

impl LevelScheme {
    pub fn validate(&self) -> Result<()> {
        if !self.transition_center_hz.is_finite() || !self.replica_offset_hz.is_finite() {
            return Err(Error::InvalidParameter("level offsets must be finite".into()));
        }
        if !(0.0..=1.0).contains(&self.replica_depth_ratio) {
            return Err(Error::InvalidParameter(format!(
                "replica_depth_ratio {} outside [0, 1]",
                self.replica_depth_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToothShape {
    Gaussian,
    Square,
    Lorentzian,
}

/// Comb geometry. Tooth width is stored directly; finesse is the derived
/// interval/width ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AfcParams {
    /// Width of the emptied preparation window, Hz.
    pub window_width_hz: f64,
    /// Tooth spacing, Hz. The echo re-emerges one inverse spacing after input.
    pub comb_interval_hz: f64,
    /// Tooth full width at half maximum, Hz. Must stay below the spacing.
    pub tooth_fwhm_hz: f64,
    /// Optical depth at tooth centers.
    pub peak_od: f64,
    /// Residual optical depth outside the prepared window.
    pub background_od: f64,
    pub tooth_shape: ToothShape,
    /// RMS of the i.i.d. gaussian offset applied to each tooth center, Hz.
    pub tooth_center_jitter_rms_hz: f64,
    /// Seed for the jitter draw; spectra are pure functions of params.
    pub jitter_seed: u64,
    pub n_teeth: u32,
}

/// Peak optical depth reproducing the measured storage efficiency with the
/// default window, tooth width, jitter and replica depth. Fixed by
/// `propagation::calibrate_peak_od` against the 7.9% two-pulse target.
pub const CALIBRATED_PEAK_OD: f64 = 1.338623046875;

/// Tooth-center scatter of the as-prepared nine-tooth comb. Together with
/// [`CALIBRATED_JITTER_SEED`] this reproduces the observed early echo; the
/// seed stands in for the one realization the instrument actually burned.
pub const CALIBRATED_JITTER_RMS_HZ: f64 = 1.0e6;
pub const CALIBRATED_JITTER_SEED: u64 = 3;

impl Default for AfcParams {
    fn default() -> Self {
        AfcParams {
            window_width_hz: 18.0e6,
            comb_interval_hz: 2.0e6,
            tooth_fwhm_hz: 0.8e6,
            peak_od: CALIBRATED_PEAK_OD,
            background_od: 1.0,
            tooth_shape: ToothShape::Gaussian,
            tooth_center_jitter_rms_hz: CALIBRATED_JITTER_RMS_HZ,
            jitter_seed: CALIBRATED_JITTER_SEED,
            n_teeth: 9,
        }
    }
}

impl AfcParams {
    pub fn finesse(&self) -> f64 {
        self.comb_interval_hz / self.tooth_fwhm_hz
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("window_width_hz", self.window_width_hz),
            ("comb_interval_hz", self.comb_interval_hz),
            ("tooth_fwhm_hz", self.tooth_fwhm_hz),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.tooth_fwhm_hz >= self.comb_interval_hz {
            return Err(Error::InvalidParameter(format!(
                "tooth_fwhm_hz {} must be below comb_interval_hz {} (finesse > 1)",
                self.tooth_fwhm_hz, self.comb_interval_hz
            )));
        }
        if self.n_teeth == 0 {
            return Err(Error::InvalidParameter("n_teeth must be at least 1".into()));
        }
        if self.n_teeth as f64 * self.comb_interval_hz > self.window_width_hz {
            return Err(Error::InvalidParameter(format!(
                "{} teeth at {} Hz spacing do not fit the {} Hz window",
                self.n_teeth, self.comb_interval_hz, self.window_width_hz
            )));
        }
        if self.peak_od < 0.0 || self.background_od < 0.0 {
            return Err(Error::InvalidParameter("optical depths must be non-negative".into()));
        }
        if self.tooth_center_jitter_rms_hz < 0.0 {
            return Err(Error::InvalidParameter("jitter rms must be non-negative".into()));
        }
        Ok(())
    }
}

/// Optical depth sampled on a uniform detuning grid.
#[derive(Debug, Clone)]
pub struct AbsorptionSpectrum {
    start_hz: f64,
    step_hz: f64,
    od: Vec<f64>,
    background_od: f64,
    comb_interval_hz: Option<f64>,
    /// Narrowest spectral feature present; propagation grids must resolve it.
    min_feature_hz: f64,
}

impl AbsorptionSpectrum {
    /// Wraps an externally built profile. `min_feature_hz` defaults to eight
    /// grid steps, matching the resolution rule used by `prepare`.
    pub fn from_raw(start_hz: f64, step_hz: f64, od: Vec<f64>, background_od: f64) -> Result<Self> {
        if !(step_hz.is_finite() && step_hz > 0.0) || od.len() < 2 {
            return Err(Error::InvalidParameter("spectrum grid needs a positive step and at least two samples".into()));
        }
        if od.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter("optical depth samples must be finite and non-negative".into()));
        }
        Ok(AbsorptionSpectrum {
            start_hz,
            step_hz,
            od,
            background_od,
            comb_interval_hz: None,
            min_feature_hz: 8.0 * step_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.od.len()
    }

    pub fn is_empty(&self) -> bool {
        self.od.is_empty()
    }

    pub fn step_hz(&self) -> f64 {
        self.step_hz
    }

    pub fn start_hz(&self) -> f64 {
        self.start_hz
    }

    pub fn detuning_hz(&self, i: usize) -> f64 {
        self.start_hz + i as f64 * self.step_hz
    }

    pub fn od(&self) -> &[f64] {
        &self.od
    }

    pub fn background_od(&self) -> f64 {
        self.background_od
    }

    pub fn comb_interval_hz(&self) -> Option<f64> {
        self.comb_interval_hz
    }

    pub fn min_feature_hz(&self) -> f64 {
        self.min_feature_hz
    }

    /// Linear interpolation; detunings beyond the sampled span continue at the
    /// unprepared background depth.
    pub fn sample_od(&self, detuning_hz: f64) -> f64 {
        let x = (detuning_hz - self.start_hz) / self.step_hz;
        if x <= 0.0 || x >= (self.od.len() - 1) as f64 {
            return self.background_od;
        }
        let i = x.floor() as usize;
        let frac = x - i as f64;
        self.od[i] * (1.0 - frac) + self.od[i + 1] * frac
    }
}

fn tooth_profile(shape: ToothShape, offset_hz: f64, fwhm_hz: f64) -> f64 {
    let x = offset_hz / fwhm_hz;
    match shape {
        ToothShape::Gaussian => (-4.0 * std::f64::consts::LN_2 * x * x).exp(),
        ToothShape::Square => {
            if x.abs() <= 0.5 {
                1.0
            } else {
                0.0
            }
        }
        ToothShape::Lorentzian => 1.0 / (1.0 + 4.0 * x * x),
    }
}

/// Smooth step from 0 inside the window to 1 outside, softened over one tooth
/// width so the rebuilt filter stays free of edge ringing.
fn outside_window(detuning_hz: f64, center_hz: f64, width_hz: f64, edge_hz: f64) -> f64 {
    let d = (detuning_hz - center_hz).abs() - 0.5 * width_hz;
    0.5 * (1.0 + (d / edge_hz).tanh())
}

/// Builds the prepared absorption profile: background depth outside the
/// window, teeth of depth `peak_od` spaced by the comb interval inside it,
/// plus the offset replica comb scaled by the replica depth ratio.
pub fn prepare(scheme: &LevelScheme, params: &AfcParams) -> Result<AbsorptionSpectrum> {
    scheme.validate()?;
    params.validate()?;

    let span = 4.0 * params.window_width_hz;
    if scheme.replica_offset_hz.abs() + 0.5 * params.window_width_hz > 0.5 * span {
        return Err(Error::InvalidParameter(format!(
            "replica offset {} Hz falls outside the simulated span",
            scheme.replica_offset_hz
        )));
    }

    let target_step = params.tooth_fwhm_hz / 8.0;
    let n_bins = (span / target_step).ceil() as usize + 1;
    let step = span / (n_bins - 1) as f64;
    let center = scheme.transition_center_hz;
    let start = center - 0.5 * span;

    // Replica teeth ride on the same ions, so they share the main comb's jitter.
    let mut rng = ChaCha8Rng::seed_from_u64(params.jitter_seed);
    let jitter = Normal::new(0.0, params.tooth_center_jitter_rms_hz.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let half_teeth = (params.n_teeth as f64 - 1.0) / 2.0;
    let centers: Vec<f64> = (0..params.n_teeth)
        .map(|k| {
            let offset = if params.tooth_center_jitter_rms_hz > 0.0 {
                jitter.sample(&mut rng)
            } else {
                0.0
            };
            center + (k as f64 - half_teeth) * params.comb_interval_hz + offset
        })
        .collect();

    let edge = params.tooth_fwhm_hz;
    let mut od = vec![0.0; n_bins];
    for (i, v) in od.iter_mut().enumerate() {
        let f = start + i as f64 * step;
        let mut depth = params.background_od * outside_window(f, center, params.window_width_hz, edge);
        let inside = |c: f64| 1.0 - outside_window(c, center, params.window_width_hz, edge);
        for &c in &centers {
            depth += params.peak_od * tooth_profile(params.tooth_shape, f - c, params.tooth_fwhm_hz);
            if scheme.replica_depth_ratio > 0.0 {
                let rc = c + scheme.replica_offset_hz;
                // A replica landing outside the window is part of the background.
                depth += params.peak_od
                    * scheme.replica_depth_ratio
                    * inside(rc)
                    * tooth_profile(params.tooth_shape, f - rc, params.tooth_fwhm_hz);
            }
        }
        *v = depth;
    }

    Ok(AbsorptionSpectrum {
        start_hz: start,
        step_hz: step,
        od,
        background_od: params.background_od,
        comb_interval_hz: Some(params.comb_interval_hz),
        min_feature_hz: params.tooth_fwhm_hz,
    })
}
