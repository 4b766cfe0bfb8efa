//! Linear pulse propagation through a prepared absorption profile.
//!
//! The medium acts as a causal filter: the amplitude response is
//! exp(-od/2) and the phase is reconstructed from the optical depth by a
//! discrete Hilbert transform (cepstral fold), which makes the impulse
//! response minimum-phase. Factors of 2*pi appear only inside that phase
//! construction; everywhere else frequencies are plain Hz.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::pulse::{OpticalPulse, MAX_SAMPLES};
use crate::spectrum::{prepare, AbsorptionSpectrum, AfcParams, LevelScheme};

/// Fraction of output energy tolerated in the trailing 5% of the padded
/// window. Above this the window doubles and the filter reruns: whatever
/// leaks past the end wraps to the front of the trace, so the trailing
/// energy bounds the worst-case acausal contamination.
pub const WRAPAROUND_ENERGY_LIMIT: f64 = 1e-9;

/// Transfer samples aligned with an absorption grid.
#[derive(Debug, Clone)]
pub struct TransferFunction {
    pub start_hz: f64,
    pub step_hz: f64,
    pub h: Vec<Complex64>,
}

/// Minimum-phase spectrum from log-magnitude samples on a periodic grid.
///
/// Folding the real cepstrum onto non-negative quefrencies yields the unique
/// causal phase for the given magnitude. The returned samples keep the exact
/// input magnitude; only the phase comes from the fold.
fn minimum_phase(log_mag: &[f64]) -> Vec<Complex64> {
    let n = log_mag.len();
    let mut planner = FftPlanner::new();
    let inverse = planner.plan_fft_inverse(n);
    let forward = planner.plan_fft_forward(n);

    let mut buf: Vec<Complex64> = log_mag.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }

    // Keep quefrency 0 (and n/2 for even n) once, double 1..n/2, drop the rest.
    let half = n / 2;
    for (i, c) in buf.iter_mut().enumerate() {
        if i == 0 || (n.is_multiple_of(2) && i == half) {
            // unchanged
        } else if i < half || (!n.is_multiple_of(2) && i == half) {
            *c *= 2.0;
        } else {
            *c = Complex64::new(0.0, 0.0);
        }
    }

    forward.process(&mut buf);
    buf.iter()
        .zip(log_mag)
        .map(|(lnh, &a)| Complex64::from_polar(a.exp(), lnh.im))
        .collect()
}

/// Causal transfer function on the spectrum's own grid.
pub fn transfer_function(spec: &AbsorptionSpectrum) -> TransferFunction {
    let log_mag: Vec<f64> = spec.od().iter().map(|&d| -0.5 * d).collect();
    TransferFunction {
        start_hz: spec.start_hz(),
        step_hz: spec.step_hz(),
        h: minimum_phase(&log_mag),
    }
}

fn fft_frequency(i: usize, n: usize, dt: f64) -> f64 {
    let k = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
    k / (n as f64 * dt)
}

/// Filters the pulse through the medium and returns the trace on the input
/// grid. Internally the trace is zero-padded until the frequency sampling
/// resolves the narrowest spectral feature, so late ring-down cannot alias
/// back into the observation window.
pub fn propagate(spec: &AbsorptionSpectrum, pulse: &OpticalPulse) -> Result<OpticalPulse> {
    let n_in = pulse.len();
    if let Some(interval) = spec.comb_interval_hz() {
        let min_span = 5.0 / interval;
        if pulse.span_s() < min_span {
            return Err(Error::InvalidParameter(format!(
                "pulse span {:.3e} s is below the anti-wraparound minimum {:.3e} s for a {:.3e} Hz comb",
                pulse.span_s(),
                min_span,
                interval
            )));
        }
    }

    // Frequency sampling 1/(n dt) must reach an eighth of the finest feature.
    let dt = pulse.dt_s();
    let needed = (8.0 / (spec.min_feature_hz() * dt)).ceil() as usize;
    let mut n = n_in.max(needed).next_power_of_two();
    let carrier = pulse.carrier_detuning_hz();
    let mut planner = FftPlanner::new();

    // Hard-edged teeth ring down slowly, so the first window guess may not
    // hold the whole response; keep doubling until the tail is negligible.
    loop {
        if n > MAX_SAMPLES {
            return Err(Error::NumericalGuard(format!(
                "padded grid of {n} samples exceeds the {MAX_SAMPLES} cap; widen the spectral features or shorten the trace"
            )));
        }

        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        buf[..n_in].copy_from_slice(pulse.envelope());
        planner.plan_fft_forward(n).process(&mut buf);

        let log_mag: Vec<f64> = (0..n)
            .map(|i| -0.5 * spec.sample_od(carrier + fft_frequency(i, n, dt)))
            .collect();
        let h = minimum_phase(&log_mag);
        for (y, hi) in buf.iter_mut().zip(&h) {
            *y *= hi;
        }

        planner.plan_fft_inverse(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }

        let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
        let tail_start = n - (n as f64 * 0.05).ceil() as usize;
        let tail: f64 = buf[tail_start..].iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 || tail <= WRAPAROUND_ENERGY_LIMIT * total {
            buf.truncate(n_in);
            return OpticalPulse::new(pulse.t0_s(), dt, buf, carrier);
        }
        n *= 2;
    }
}

/// Energy bookkeeping for the first echo.
#[derive(Debug, Clone)]
pub struct EchoAnalysis {
    /// Echo-window energy over input energy.
    pub efficiency: f64,
    /// Absolute time of the intensity maximum inside the echo window.
    pub peak_time_s: f64,
    /// Peak time minus the input peak time.
    pub delay_s: f64,
    /// Echo window bounds, absolute time.
    pub window_s: (f64, f64),
    pub output: OpticalPulse,
}

/// Expected echo delay for a given comb interval.
pub fn echo_delay_s(comb_interval_hz: f64) -> Result<f64> {
    if !(comb_interval_hz.is_finite() && comb_interval_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "comb interval must be positive, got {comb_interval_hz}"
        )));
    }
    Ok(1.0 / comb_interval_hz)
}

/// Propagates the pulse and integrates the output intensity over a window of
/// two input widths on either side of the nominal echo time.
pub fn analyze_echo(spec: &AbsorptionSpectrum, pulse: &OpticalPulse) -> Result<EchoAnalysis> {
    let interval = spec.comb_interval_hz().ok_or_else(|| {
        Error::InvalidParameter("spectrum carries no comb interval; echo window undefined".into())
    })?;
    let delay = echo_delay_s(interval)?;
    let output = propagate(spec, pulse)?;

    let in_peak = pulse.peak_time_s();
    let fwhm = pulse.intensity_fwhm_s();
    let half_window = 2.0 * fwhm;
    let lo = in_peak + delay - half_window;
    let hi = in_peak + delay + half_window;
    let t_end = output.time_s(output.len() - 1);
    if hi > t_end {
        return Err(Error::InvalidParameter(format!(
            "echo window ends at {hi:.3e} s but the grid stops at {t_end:.3e} s"
        )));
    }

    let dt = output.dt_s();
    let i_lo = ((lo - output.t0_s()) / dt).ceil().max(0.0) as usize;
    let i_hi = (((hi - output.t0_s()) / dt).floor() as usize).min(output.len() - 1);
    let mut best = (i_lo, 0.0);
    let mut energy = 0.0;
    for i in i_lo..=i_hi {
        let p = output.envelope()[i].norm_sqr();
        energy += p;
        if p > best.1 {
            best = (i, p);
        }
    }
    let efficiency = energy * dt / pulse.energy();
    let peak_time = output.time_s(best.0);

    Ok(EchoAnalysis {
        efficiency,
        peak_time_s: peak_time,
        delay_s: peak_time - in_peak,
        window_s: (lo, hi),
        output,
    })
}

pub fn echo_efficiency(spec: &AbsorptionSpectrum, pulse: &OpticalPulse) -> Result<f64> {
    Ok(analyze_echo(spec, pulse)?.efficiency)
}

/// Deterministic scalar search for the tooth depth that reproduces a target
/// echo efficiency with everything else held fixed.
///
/// Efficiency rises with depth until over-absorption wins, so the search
/// brackets the rising branch with a coarse scan and bisects it. Fails if the
/// target exceeds the reachable maximum.
pub fn calibrate_peak_od(
    scheme: &LevelScheme,
    template: &AfcParams,
    probe_fwhm_s: f64,
    target_efficiency: f64,
) -> Result<(AfcParams, f64)> {
    if !(0.0..1.0).contains(&target_efficiency) {
        return Err(Error::InvalidParameter(format!(
            "target efficiency {target_efficiency} outside (0, 1)"
        )));
    }
    let eta = |d: f64| -> Result<f64> {
        let params = AfcParams { peak_od: d, ..template.clone() };
        let pulse = OpticalPulse::probe_for(&params, probe_fwhm_s, 0.0)?;
        let spec = prepare(scheme, &params)?;
        echo_efficiency(&spec, &pulse)
    };

    // Coarse scan up the rising branch.
    let mut lo = 0.0;
    let mut lo_eta = eta(0.0)?;
    let mut hi = None;
    let mut best = lo_eta;
    let mut d = 0.25;
    while d <= 64.0 {
        let e = eta(d)?;
        if e >= target_efficiency {
            hi = Some(d);
            break;
        }
        if e < best && best >= target_efficiency {
            break;
        }
        if e < 0.5 * best && best > 0.0 && e < target_efficiency {
            // Past the optimum and still short of the target.
            break;
        }
        best = best.max(e);
        lo = d;
        lo_eta = e;
        d *= 2.0;
    }
    let mut hi = hi.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "target efficiency {target_efficiency} unreachable; search peaked at {best:.4}"
        ))
    })?;

    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let e = eta(mid)?;
        if (e - target_efficiency).abs() <= 1e-5 {
            return Ok((AfcParams { peak_od: mid, ..template.clone() }, e));
        }
        if e < target_efficiency {
            lo = mid;
            lo_eta = e;
        } else {
            hi = mid;
        }
    }
    let _ = lo_eta;
    let e = eta(hi)?;
    Ok((AfcParams { peak_od: hi, ..template.clone() }, e))
}

/// Reference probe width used by the calibrated defaults.
pub const DEFAULT_PROBE_FWHM_S: f64 = 90e-9;
