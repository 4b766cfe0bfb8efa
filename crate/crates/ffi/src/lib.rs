//! C ABI over the afclink toolkit.
//!
//! Every entry point takes the experiment description as TOML text (the same
//! schema the `afclink` binary reads), returns an `int` status, and writes its
//! results through out-pointers. Handles returned through `*mut` out-pointers
//! are opaque and must be released with their matching `_free` function.
//! Errors never unwind across the boundary; the thread-local message behind
//! `afclink_last_error_message` describes the most recent failure on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use afclink::config::ExperimentConfig;
use afclink::counting::run_experiment;
use afclink::lockchain::{standard, standard_chain};
use afclink::propagation::analyze_echo;
use afclink::pulse::OpticalPulse;
use afclink::rate::multiplexed_rate;
use afclink::spectrum::{prepare, AbsorptionSpectrum};
use afclink::Error;

/// Call succeeded.
pub const AFCLINK_OK: c_int = 0;
/// I/O failure.
pub const AFCLINK_ERR_IO: c_int = 1;
/// The config text failed to parse or validate.
pub const AFCLINK_ERR_CONFIG: c_int = 2;
/// A numerical guard tripped (grid too coarse, window wraparound, ...).
pub const AFCLINK_ERR_NUMERICAL: c_int = 3;
/// A required pointer argument was NULL.
pub const AFCLINK_ERR_NULL_POINTER: c_int = 4;
/// The implementation panicked; treat the handle state as poisoned.
pub const AFCLINK_ERR_PANIC: c_int = 5;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let cleaned: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).unwrap_or_default();
    });
}

fn fail(code: c_int, message: &str) -> c_int {
    set_error(message);
    code
}

fn fail_with(err: Error) -> c_int {
    fail(err.exit_code() as c_int, &err.to_string())
}

/// Message for the most recent error on this thread, as a NUL-terminated
/// UTF-8 string. Empty until the first failure. The pointer stays valid until
/// the next failing afclink call on the same thread.
#[no_mangle]
pub extern "C" fn afclink_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guarded(f: impl FnOnce() -> c_int) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(AFCLINK_ERR_PANIC, "internal panic"),
    }
}

/// # Safety
/// `text` must be NULL or point at a NUL-terminated string.
unsafe fn parse_config(text: *const c_char) -> Result<ExperimentConfig, c_int> {
    if text.is_null() {
        return Err(fail(AFCLINK_ERR_NULL_POINTER, "config text is NULL"));
    }
    let bytes = unsafe { CStr::from_ptr(text) };
    let toml = bytes
        .to_str()
        .map_err(|_| fail(AFCLINK_ERR_CONFIG, "config text is not valid UTF-8"))?;
    ExperimentConfig::from_toml(toml).map_err(fail_with)
}

fn require<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, c_int> {
    // SAFETY: the caller promised a writable location; only nullness is checkable.
    unsafe { ptr.as_mut() }.ok_or_else(|| fail(AFCLINK_ERR_NULL_POINTER, what))
}

/// Prepared absorption spectrum; opaque.
pub struct AfclinkSpectrum {
    inner: AbsorptionSpectrum,
}

/// Time trace of a filtered pulse; opaque.
pub struct AfclinkTrace {
    inner: OpticalPulse,
}

/// First-echo figures from one deterministic run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AfclinkEchoSummary {
    /// Echo-window energy over input energy.
    pub efficiency: f64,
    /// Absolute time of the echo intensity maximum, seconds.
    pub peak_time_s: f64,
    /// Echo peak minus input peak, seconds.
    pub delay_s: f64,
    /// Start of the accepted echo window, seconds.
    pub window_lo_s: f64,
    /// End of the accepted echo window, seconds.
    pub window_hi_s: f64,
}

/// Monte Carlo photon-counting figures.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AfclinkCountSummary {
    /// Mean detected photons per trial inside the echo window.
    pub photons_per_trial: f64,
    /// Standard error of that mean.
    pub photons_per_trial_stderr: f64,
    /// Memory efficiency estimated back through the loss budget.
    pub efficiency_estimate: f64,
    /// Detected photons summed over the whole trace.
    pub total_counts: u64,
    /// Number of simulated trials.
    pub n_trials: u64,
}

/// Frequency-lock chain figures.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AfclinkLockSummary {
    /// Net detuning left by the engaged chain, Hz. Zero when every loop closes.
    pub residual_detuning_hz: f64,
    /// Peak-to-peak excursion of the monitored beat, Hz.
    pub beat_peak_to_peak_hz: f64,
    /// Fraction of beat samples within +-75 kHz of the mean.
    pub in_band_fraction_75khz: f64,
}

/// Difference-frequency conversion figures.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AfclinkConversionSummary {
    /// Photon-number conversion efficiency.
    pub efficiency: f64,
    /// Noise photons falling inside one pulse window.
    pub noise_photons_per_pulse: f64,
    /// Signal-to-noise ratio for the configured signal level.
    pub signal_to_noise: f64,
    /// Pump wavelength implied by the input and output beams, meters.
    pub pump_wavelength_m: f64,
}

/// Entanglement-distribution rate figures.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AfclinkRateSummary {
    /// Success probability of one link attempt.
    pub link_success_probability: f64,
    /// Temporal times spectral mode count.
    pub mode_count: u64,
    /// Attempt cycles per second.
    pub attempts_per_s: f64,
    /// Heralded link rate, Hz.
    pub link_rate_hz: f64,
    /// End-to-end rate after chaining, Hz.
    pub end_to_end_rate_hz: f64,
    /// Mean slots to ready, from the chain Monte Carlo.
    pub chain_mean_slots: f64,
    /// Mean slots to ready, from exact enumeration.
    pub chain_expected_slots: f64,
}

/// Builds the absorption spectrum described by `config_toml` and hands back
/// an owned handle through `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_new(
    config_toml: *const c_char,
    out: *mut *mut AfclinkSpectrum,
) -> c_int {
    guarded(|| {
        let out = match require(out, "out handle is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        match prepare(&cfg.scheme, &cfg.afc) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(AfclinkSpectrum { inner }));
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Releases a spectrum handle. NULL is ignored.
///
/// # Safety
/// `handle` must come from `afclink_spectrum_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_free(handle: *mut AfclinkSpectrum) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of grid points, or 0 for a NULL handle.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_len(handle: *const AfclinkSpectrum) -> usize {
    unsafe { handle.as_ref() }.map_or(0, |h| h.inner.len())
}

/// Grid spacing in Hz, or NaN for a NULL handle.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_step_hz(handle: *const AfclinkSpectrum) -> f64 {
    unsafe { handle.as_ref() }.map_or(f64::NAN, |h| h.inner.step_hz())
}

/// Detuning of grid point 0 in Hz, or NaN for a NULL handle.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_start_hz(handle: *const AfclinkSpectrum) -> f64 {
    unsafe { handle.as_ref() }.map_or(f64::NAN, |h| h.inner.start_hz())
}

/// Optical depth at grid point `index`, or NaN when the handle is NULL or the
/// index is out of range.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_od(
    handle: *const AfclinkSpectrum,
    index: usize,
) -> f64 {
    unsafe { handle.as_ref() }
        .and_then(|h| h.inner.od().get(index).copied())
        .unwrap_or(f64::NAN)
}

/// Optical depth interpolated at an arbitrary detuning, or NaN for a NULL
/// handle. Detunings outside the stored grid return the background depth.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_spectrum_sample_od(
    handle: *const AfclinkSpectrum,
    detuning_hz: f64,
) -> f64 {
    unsafe { handle.as_ref() }.map_or(f64::NAN, |h| h.inner.sample_od(detuning_hz))
}

fn echo_pieces(cfg: &ExperimentConfig) -> Result<(OpticalPulse, afclink::propagation::EchoAnalysis), Error> {
    let spec = prepare(&cfg.scheme, &cfg.afc)?;
    let pulse = OpticalPulse::probe_for(&cfg.afc, cfg.probe.fwhm_s, cfg.probe.carrier_detuning_hz)?;
    let analysis = analyze_echo(&spec, &pulse)?;
    Ok((pulse, analysis))
}

/// Runs the deterministic echo experiment and fills `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_echo_run(
    config_toml: *const c_char,
    out: *mut AfclinkEchoSummary,
) -> c_int {
    guarded(|| {
        let out = match require(out, "out summary is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        match echo_pieces(&cfg) {
            Ok((_, analysis)) => {
                *out = AfclinkEchoSummary {
                    efficiency: analysis.efficiency,
                    peak_time_s: analysis.peak_time_s,
                    delay_s: analysis.delay_s,
                    window_lo_s: analysis.window_s.0,
                    window_hi_s: analysis.window_s.1,
                };
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Runs the deterministic echo experiment and hands back the filtered time
/// trace as an owned handle through `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_echo_trace_new(
    config_toml: *const c_char,
    out: *mut *mut AfclinkTrace,
) -> c_int {
    guarded(|| {
        let out = match require(out, "out handle is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        match echo_pieces(&cfg) {
            Ok((_, analysis)) => {
                *out = Box::into_raw(Box::new(AfclinkTrace { inner: analysis.output }));
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Releases a trace handle. NULL is ignored.
///
/// # Safety
/// `handle` must come from `afclink_echo_trace_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn afclink_trace_free(handle: *mut AfclinkTrace) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Number of samples, or 0 for a NULL handle.
///
/// # Safety
/// `handle` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_trace_len(handle: *const AfclinkTrace) -> usize {
    unsafe { handle.as_ref() }.map_or(0, |h| h.inner.len())
}

/// Sample spacing in seconds, or NaN for a NULL handle.
///
/// # Safety
/// `handle` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_trace_dt_s(handle: *const AfclinkTrace) -> f64 {
    unsafe { handle.as_ref() }.map_or(f64::NAN, |h| h.inner.dt_s())
}

/// Time of sample 0 in seconds, or NaN for a NULL handle.
///
/// # Safety
/// `handle` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_trace_t0_s(handle: *const AfclinkTrace) -> f64 {
    unsafe { handle.as_ref() }.map_or(f64::NAN, |h| h.inner.t0_s())
}

/// Instantaneous intensity |a|^2 at sample `index`, or NaN when the handle is
/// NULL or the index is out of range.
///
/// # Safety
/// `handle` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn afclink_trace_abs2(handle: *const AfclinkTrace, index: usize) -> f64 {
    unsafe { handle.as_ref() }
        .and_then(|h| h.inner.envelope().get(index).map(|c| c.norm_sqr()))
        .unwrap_or(f64::NAN)
}

/// Runs the single-photon counting Monte Carlo and fills `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_count_run(
    config_toml: *const c_char,
    out: *mut AfclinkCountSummary,
) -> c_int {
    guarded(|| {
        let out = match require(out, "out summary is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        let run = || -> Result<AfclinkCountSummary, Error> {
            let (pulse, analysis) = echo_pieces(&cfg)?;
            let hist = run_experiment(
                pulse.energy(),
                &analysis.output,
                &cfg.counting.source,
                &cfg.counting.detector,
                cfg.counting.n_trials,
                cfg.seed,
            )?;
            let (lo, hi) = analysis.window_s;
            Ok(AfclinkCountSummary {
                photons_per_trial: hist.photons_per_trial_in(lo, hi),
                photons_per_trial_stderr: hist.photons_per_trial_stderr_in(lo, hi),
                efficiency_estimate: hist.efficiency_estimate(lo, hi, &cfg.counting.source)?,
                total_counts: hist.total_counts(),
                n_trials: hist.n_trials as u64,
            })
        };
        match run() {
            Ok(summary) => {
                *out = summary;
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Closes the standard lock chain, simulates the monitored beat, fills `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_lock_run(
    config_toml: *const c_char,
    out: *mut AfclinkLockSummary,
) -> c_int {
    guarded(|| {
        let out = match require(out, "out summary is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        let run = || -> Result<AfclinkLockSummary, Error> {
            let chain = standard_chain(&cfg.chain)?;
            let record = chain.simulate_beat(
                standard::MONITOR_LOCK,
                cfg.beat.duration_s,
                cfg.beat.dt_s,
                cfg.seed,
            )?;
            Ok(AfclinkLockSummary {
                residual_detuning_hz: chain.residual_detuning_hz()?,
                beat_peak_to_peak_hz: record.peak_to_peak_hz(),
                in_band_fraction_75khz: record.in_band_fraction(75.0e3)?,
            })
        };
        match run() {
            Ok(summary) => {
                *out = summary;
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Evaluates the conversion-stage bookkeeping and fills `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_conversion_run(
    config_toml: *const c_char,
    out: *mut AfclinkConversionSummary,
) -> c_int {
    use afclink::conversion::{
        noise_photons_per_pulse, photon_number_efficiency, pump_wavelength_m, signal_to_noise,
        PowerReading,
    };
    guarded(|| {
        let out = match require(out, "out summary is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        let c = &cfg.conversion;
        let input = PowerReading { power_w: c.input_power_w, wavelength_m: c.input_wavelength_m };
        let output = PowerReading { power_w: c.output_power_w, wavelength_m: c.output_wavelength_m };
        let run = || -> Result<AfclinkConversionSummary, Error> {
            let noise = noise_photons_per_pulse(c.noise_rate_cps, c.pulse_window_s)?;
            Ok(AfclinkConversionSummary {
                efficiency: photon_number_efficiency(input, output)?,
                noise_photons_per_pulse: noise,
                signal_to_noise: signal_to_noise(c.signal_photons_per_pulse, noise)?,
                pump_wavelength_m: pump_wavelength_m(c.input_wavelength_m, c.output_wavelength_m)?,
            })
        };
        match run() {
            Ok(summary) => {
                *out = summary;
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Computes multiplexed entanglement-distribution rates and fills `out`.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn afclink_rate_run(
    config_toml: *const c_char,
    out: *mut AfclinkRateSummary,
) -> c_int {
    use afclink::rate::{chain_simulate, expected_slots_hold_all, expected_slots_same_slot, ChainPolicy};
    guarded(|| {
        let out = match require(out, "out summary is NULL") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cfg = match unsafe { parse_config(config_toml) } {
            Ok(cfg) => cfg,
            Err(code) => return code,
        };
        let run = || -> Result<AfclinkRateSummary, Error> {
            let report = multiplexed_rate(&cfg.rate.link, &cfg.rate.plan)?;
            let stats = chain_simulate(
                &cfg.rate.chain_cycle_success,
                cfg.rate.chain_policy,
                cfg.rate.chain_trials,
                cfg.seed,
            )?;
            let oracle = match cfg.rate.chain_policy {
                ChainPolicy::SameSlot => expected_slots_same_slot(&cfg.rate.chain_cycle_success)?,
                ChainPolicy::HoldUntilAll => expected_slots_hold_all(&cfg.rate.chain_cycle_success)?,
            };
            Ok(AfclinkRateSummary {
                link_success_probability: report.link_success_probability,
                mode_count: report.mode_count,
                attempts_per_s: report.attempts_per_s,
                link_rate_hz: report.link_rate_hz,
                end_to_end_rate_hz: report.end_to_end_rate_hz,
                chain_mean_slots: stats.mean_slots,
                chain_expected_slots: oracle,
            })
        };
        match run() {
            Ok(summary) => {
                *out = summary;
                AFCLINK_OK
            }
            Err(e) => fail_with(e),
        }
    })
}
