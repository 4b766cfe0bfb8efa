#ifndef AFCLINK_H
#define AFCLINK_H

/* Generated by cbindgen from the afclink-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Call succeeded.
#define AFCLINK_OK 0

// I/O failure.
#define AFCLINK_ERR_IO 1

// The config text failed to parse or validate.
#define AFCLINK_ERR_CONFIG 2

// A numerical guard tripped (grid too coarse, window wraparound, ...).
#define AFCLINK_ERR_NUMERICAL 3

// A required pointer argument was NULL.
#define AFCLINK_ERR_NULL_POINTER 4

// The implementation panicked; treat the handle state as poisoned.
#define AFCLINK_ERR_PANIC 5

// Prepared absorption spectrum; opaque.
typedef struct AfclinkSpectrum AfclinkSpectrum;

// Time trace of a filtered pulse; opaque.
typedef struct AfclinkTrace AfclinkTrace;

// First-echo figures from one deterministic run.
typedef struct AfclinkEchoSummary {
  // Echo-window energy over input energy.
  double efficiency;
  // Absolute time of the echo intensity maximum, seconds.
  double peak_time_s;
  // Echo peak minus input peak, seconds.
  double delay_s;
  // Start of the accepted echo window, seconds.
  double window_lo_s;
  // End of the accepted echo window, seconds.
  double window_hi_s;
} AfclinkEchoSummary;

// Monte Carlo photon-counting figures.
typedef struct AfclinkCountSummary {
  // Mean detected photons per trial inside the echo window.
  double photons_per_trial;
  // Standard error of that mean.
  double photons_per_trial_stderr;
  // Memory efficiency estimated back through the loss budget.
  double efficiency_estimate;
  // Detected photons summed over the whole trace.
  uint64_t total_counts;
  // Number of simulated trials.
  uint64_t n_trials;
} AfclinkCountSummary;

// Frequency-lock chain figures.
typedef struct AfclinkLockSummary {
  // Net detuning left by the engaged chain, Hz. Zero when every loop closes.
  double residual_detuning_hz;
  // Peak-to-peak excursion of the monitored beat, Hz.
  double beat_peak_to_peak_hz;
  // Fraction of beat samples within +-75 kHz of the mean.
  double in_band_fraction_75khz;
} AfclinkLockSummary;

// Difference-frequency conversion figures.
typedef struct AfclinkConversionSummary {
  // Photon-number conversion efficiency.
  double efficiency;
  // Noise photons falling inside one pulse window.
  double noise_photons_per_pulse;
  // Signal-to-noise ratio for the configured signal level.
  double signal_to_noise;
  // Pump wavelength implied by the input and output beams, meters.
  double pump_wavelength_m;
} AfclinkConversionSummary;

// Entanglement-distribution rate figures.
typedef struct AfclinkRateSummary {
  // Success probability of one link attempt.
  double link_success_probability;
  // Temporal times spectral mode count.
  uint64_t mode_count;
  // Attempt cycles per second.
  double attempts_per_s;
  // Heralded link rate, Hz.
  double link_rate_hz;
  // End-to-end rate after chaining, Hz.
  double end_to_end_rate_hz;
  // Mean slots to ready, from the chain Monte Carlo.
  double chain_mean_slots;
  // Mean slots to ready, from exact enumeration.
  double chain_expected_slots;
} AfclinkRateSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent error on this thread, as a NUL-terminated
// UTF-8 string. Empty until the first failure. The pointer stays valid until
// the next failing afclink call on the same thread.
const char *afclink_last_error_message(void);

// Builds the absorption spectrum described by `config_toml` and hands back
// an owned handle through `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_spectrum_new(const char *config_toml, struct AfclinkSpectrum **out);

// Releases a spectrum handle. NULL is ignored.
//
// # Safety
// `handle` must come from `afclink_spectrum_new` and not be freed twice.
void afclink_spectrum_free(struct AfclinkSpectrum *handle);

// Number of grid points, or 0 for a NULL handle.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
size_t afclink_spectrum_len(const struct AfclinkSpectrum *handle);

// Grid spacing in Hz, or NaN for a NULL handle.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
double afclink_spectrum_step_hz(const struct AfclinkSpectrum *handle);

// Detuning of grid point 0 in Hz, or NaN for a NULL handle.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
double afclink_spectrum_start_hz(const struct AfclinkSpectrum *handle);

// Optical depth at grid point `index`, or NaN when the handle is NULL or the
// index is out of range.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
double afclink_spectrum_od(const struct AfclinkSpectrum *handle, size_t index);

// Optical depth interpolated at an arbitrary detuning, or NaN for a NULL
// handle. Detunings outside the stored grid return the background depth.
//
// # Safety
// `handle` must be NULL or a live spectrum handle.
double afclink_spectrum_sample_od(const struct AfclinkSpectrum *handle, double detuning_hz);

// Runs the deterministic echo experiment and fills `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_echo_run(const char *config_toml, struct AfclinkEchoSummary *out);

// Runs the deterministic echo experiment and hands back the filtered time
// trace as an owned handle through `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_echo_trace_new(const char *config_toml, struct AfclinkTrace **out);

// Releases a trace handle. NULL is ignored.
//
// # Safety
// `handle` must come from `afclink_echo_trace_new` and not be freed twice.
void afclink_trace_free(struct AfclinkTrace *handle);

// Number of samples, or 0 for a NULL handle.
//
// # Safety
// `handle` must be NULL or a live trace handle.
size_t afclink_trace_len(const struct AfclinkTrace *handle);

// Sample spacing in seconds, or NaN for a NULL handle.
//
// # Safety
// `handle` must be NULL or a live trace handle.
double afclink_trace_dt_s(const struct AfclinkTrace *handle);

// Time of sample 0 in seconds, or NaN for a NULL handle.
//
// # Safety
// `handle` must be NULL or a live trace handle.
double afclink_trace_t0_s(const struct AfclinkTrace *handle);

// Instantaneous intensity |a|^2 at sample `index`, or NaN when the handle is
// NULL or the index is out of range.
//
// # Safety
// `handle` must be NULL or a live trace handle.
double afclink_trace_abs2(const struct AfclinkTrace *handle, size_t index);

// Runs the single-photon counting Monte Carlo and fills `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_count_run(const char *config_toml, struct AfclinkCountSummary *out);

// Closes the standard lock chain, simulates the monitored beat, fills `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_lock_run(const char *config_toml, struct AfclinkLockSummary *out);

// Evaluates the conversion-stage bookkeeping and fills `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_conversion_run(const char *config_toml, struct AfclinkConversionSummary *out);

// Computes multiplexed entanglement-distribution rates and fills `out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a writable slot.
int afclink_rate_run(const char *config_toml, struct AfclinkRateSummary *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* AFCLINK_H */
