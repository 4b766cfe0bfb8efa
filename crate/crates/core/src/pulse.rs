//! Complex pulse envelopes on uniform time grids.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::AfcParams;

/// Hard cap on samples per trace; guards accidental terabyte grids.
pub const MAX_SAMPLES: usize = 1 << 24;

/// Slowly varying envelope relative to a carrier, with the carrier expressed
/// as a detuning from the comb center.
#[derive(Debug, Clone)]
pub struct OpticalPulse {
    t0_s: f64,
    dt_s: f64,
    envelope: Vec<Complex64>,
    carrier_detuning_hz: f64,
}

/// Construction recipe for a gaussian probe. Widths refer to the intensity
/// profile.
#[derive(Debug, Clone)]
pub struct PulseDesign {
    pub fwhm_s: f64,
    pub peak_time_s: f64,
    pub span_s: f64,
    pub dt_s: f64,
    pub energy: f64,
    pub carrier_detuning_hz: f64,
}

impl OpticalPulse {
    pub fn new(t0_s: f64, dt_s: f64, envelope: Vec<Complex64>, carrier_detuning_hz: f64) -> Result<Self> {
        if !(dt_s.is_finite() && dt_s > 0.0) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt_s}")));
        }
        if envelope.len() < 2 {
            return Err(Error::InvalidParameter("pulse needs at least two samples".into()));
        }
        if envelope.len() > MAX_SAMPLES {
            return Err(Error::NumericalGuard(format!(
                "pulse grid of {} samples exceeds the {} cap",
                envelope.len(),
                MAX_SAMPLES
            )));
        }
        Ok(OpticalPulse { t0_s, dt_s, envelope, carrier_detuning_hz })
    }

    pub fn gaussian(design: &PulseDesign) -> Result<Self> {
        let d = design;
        for (name, v) in [("fwhm_s", d.fwhm_s), ("span_s", d.span_s), ("dt_s", d.dt_s), ("energy", d.energy)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if d.peak_time_s < 3.0 * d.fwhm_s {
            return Err(Error::InvalidParameter(
                "peak must sit at least three widths after the grid start to keep a dark lead-in".into(),
            ));
        }
        if d.peak_time_s + 3.0 * d.fwhm_s > d.span_s {
            return Err(Error::InvalidParameter("pulse tail leaves the grid".into()));
        }
        let n = (d.span_s / d.dt_s).round() as usize + 1;
        if n > MAX_SAMPLES {
            return Err(Error::NumericalGuard(format!("grid of {n} samples exceeds the {MAX_SAMPLES} cap")));
        }
        // Intensity fwhm w: |a|^2 = A^2 exp(-4 ln2 ((t-tp)/w)^2), integral A^2 w sqrt(pi/(4 ln2)).
        let ln2 = std::f64::consts::LN_2;
        let norm = (d.energy / (d.fwhm_s * (std::f64::consts::PI / (4.0 * ln2)).sqrt())).sqrt();
        let envelope = (0..n)
            .map(|i| {
                let t = i as f64 * d.dt_s - d.peak_time_s;
                Complex64::new(norm * (-2.0 * ln2 * (t / d.fwhm_s).powi(2)).exp(), 0.0)
            })
            .collect();
        OpticalPulse::new(0.0, d.dt_s, envelope, d.carrier_detuning_hz)
    }

    /// Gaussian probe sized for a given comb: the grid spans several echo
    /// periods and the step resolves both the envelope and the full prepared
    /// spectrum bandwidth. The sample count is rounded up to a power of two.
    pub fn probe_for(params: &AfcParams, fwhm_s: f64, carrier_detuning_hz: f64) -> Result<Self> {
        params.validate()?;
        if !(fwhm_s.is_finite() && fwhm_s > 0.0) {
            return Err(Error::InvalidParameter(format!("fwhm_s must be positive, got {fwhm_s}")));
        }
        let echo = 1.0 / params.comb_interval_hz;
        let peak = 4.0 * fwhm_s;
        let min_span = peak + 5.5 * echo + 2.0 * fwhm_s;
        let dt = (fwhm_s / 32.0).min(1.0 / (8.0 * params.window_width_hz));
        let mut n = ((min_span / dt).ceil() as usize + 1).next_power_of_two();
        if n > MAX_SAMPLES {
            return Err(Error::NumericalGuard(format!("grid of {n} samples exceeds the {MAX_SAMPLES} cap")));
        }
        if n < 64 {
            n = 64;
        }
        let span = (n - 1) as f64 * dt;
        OpticalPulse::gaussian(&PulseDesign {
            fwhm_s,
            peak_time_s: peak,
            span_s: span,
            dt_s: dt,
            energy: 1.0,
            carrier_detuning_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.envelope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envelope.is_empty()
    }

    pub fn t0_s(&self) -> f64 {
        self.t0_s
    }

    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    pub fn span_s(&self) -> f64 {
        (self.envelope.len() - 1) as f64 * self.dt_s
    }

    pub fn time_s(&self, i: usize) -> f64 {
        self.t0_s + i as f64 * self.dt_s
    }

    pub fn envelope(&self) -> &[Complex64] {
        &self.envelope
    }

    pub fn carrier_detuning_hz(&self) -> f64 {
        self.carrier_detuning_hz
    }

    pub fn set_carrier_detuning_hz(&mut self, detuning_hz: f64) {
        self.carrier_detuning_hz = detuning_hz;
    }

    pub fn energy(&self) -> f64 {
        self.envelope.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dt_s
    }

    /// Time of the intensity maximum.
    pub fn peak_time_s(&self) -> f64 {
        let (i, _) = self
            .envelope
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("non-empty envelope");
        self.time_s(i)
    }

    /// Intensity full width at half maximum, with linear interpolation at the
    /// half-power crossings around the global peak.
    pub fn intensity_fwhm_s(&self) -> f64 {
        let p: Vec<f64> = self.envelope.iter().map(|a| a.norm_sqr()).collect();
        let (ipk, &max) = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
        let half = 0.5 * max;
        let mut lo = ipk as f64;
        for i in (0..ipk).rev() {
            if p[i] <= half {
                lo = i as f64 + (half - p[i]) / (p[i + 1] - p[i]);
                break;
            }
            lo = i as f64;
        }
        let mut hi = ipk as f64;
        for i in ipk + 1..p.len() {
            if p[i] <= half {
                hi = i as f64 - (half - p[i]) / (p[i - 1] - p[i]);
                break;
            }
            hi = i as f64;
        }
        (hi - lo) * self.dt_s
    }
}
