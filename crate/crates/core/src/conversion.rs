//! Photon-number accounting for the sum-frequency conversion stage.
//!
//! Device efficiency is measured with classical beams, so it is defined in
//! photon-number terms: output photon rate over input photon rate. Power
//! ratios alone would mix in the energy gained per photon at the shorter
//! wavelength.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299792458.0;
pub const PLANCK_J_S: f64 = 6.62607015e-34;

/// A classical power-meter reading at a known wavelength.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PowerReading {
    pub power_w: f64,
    pub wavelength_m: f64,
}

impl PowerReading {
    pub fn validate(&self) -> Result<()> {
        if !(self.power_w.is_finite() && self.power_w >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power must be non-negative, got {}",
                self.power_w
            )));
        }
        if !(self.wavelength_m.is_finite() && self.wavelength_m > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be positive, got {}",
                self.wavelength_m
            )));
        }
        Ok(())
    }

    /// Photons per second carried by the beam.
    pub fn photon_rate_per_s(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.power_w * self.wavelength_m / (PLANCK_J_S * SPEED_OF_LIGHT_M_PER_S))
    }
}

/// Output wavelength of a sum-frequency stage fed by two beams.
pub fn sum_frequency_wavelength_m(a_m: f64, b_m: f64) -> Result<f64> {
    if !(a_m.is_finite() && a_m > 0.0 && b_m.is_finite() && b_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wavelengths must be positive, got {a_m} and {b_m}"
        )));
    }
    Ok(a_m * b_m / (a_m + b_m))
}

/// Pump wavelength that bridges a given input beam to a given sum-frequency
/// output. The output must sit blue of the input.
pub fn pump_wavelength_m(input_m: f64, output_m: f64) -> Result<f64> {
    if !(input_m.is_finite() && input_m > 0.0 && output_m.is_finite() && output_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wavelengths must be positive, got {input_m} and {output_m}"
        )));
    }
    if output_m >= input_m {
        return Err(Error::InvalidParameter(format!(
            "sum-frequency output {output_m} must be shorter than the input {input_m}"
        )));
    }
    Ok(input_m * output_m / (input_m - output_m))
}

/// Photon-number conversion efficiency from classical readings.
///
/// A ratio above one would mean the stage creates signal photons, which a
/// sum-frequency process cannot do; that indicates a measurement error.
pub fn photon_number_efficiency(input: PowerReading, output: PowerReading) -> Result<f64> {
    let rate_in = input.photon_rate_per_s()?;
    let rate_out = output.photon_rate_per_s()?;
    if rate_in <= 0.0 {
        return Err(Error::InvalidParameter("input beam carries no photons".into()));
    }
    let eta = rate_out / rate_in;
    if eta > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "photon-number efficiency {eta} exceeds unity; check the readings"
        )));
    }
    Ok(eta)
}

/// Mean noise photons falling inside one detection window.
pub fn noise_photons_per_pulse(noise_rate_per_s: f64, window_s: f64) -> Result<f64> {
    if !(noise_rate_per_s.is_finite() && noise_rate_per_s >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise rate must be non-negative, got {noise_rate_per_s}"
        )));
    }
    if !(window_s.is_finite() && window_s > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "detection window must be positive, got {window_s}"
        )));
    }
    Ok(noise_rate_per_s * window_s)
}

/// Signal-to-noise ratio per detection window.
pub fn signal_to_noise(signal_per_pulse: f64, noise_per_pulse: f64) -> Result<f64> {
    if !(signal_per_pulse.is_finite() && signal_per_pulse >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "signal must be non-negative, got {signal_per_pulse}"
        )));
    }
    if !(noise_per_pulse.is_finite()) || noise_per_pulse <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "noise per pulse must be positive, got {noise_per_pulse}"
        )));
    }
    Ok(signal_per_pulse / noise_per_pulse)
}
