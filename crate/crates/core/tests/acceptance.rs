//! End-to-end acceptance checks. Each test prints one verdict line; run with
//! `cargo test --test acceptance -- --nocapture` to see them all.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use afclink::config::ExperimentConfig;
use afclink::conversion::{
    noise_photons_per_pulse, photon_number_efficiency, signal_to_noise, PowerReading,
};
use afclink::counting::{run_experiment, DetectorModel, PhotonSource};
use afclink::lockchain::{sfg_sum_check, standard, standard_chain, StandardChainParams};
use afclink::propagation::{analyze_echo, propagate, DEFAULT_PROBE_FWHM_S};
use afclink::pulse::OpticalPulse;
use afclink::rate::{chain_simulate, ChainPolicy, MultiplexPlan};
use afclink::spectrum::{prepare, AfcParams, LevelScheme};

fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:2} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} {name}: {detail}");
}

/// Ideal comb for delay-law checks: dense, narrow, unjittered, no replica.
fn ideal_comb(n_teeth: u32, interval_hz: f64) -> (LevelScheme, AfcParams) {
    let scheme = LevelScheme { replica_depth_ratio: 0.0, ..LevelScheme::default() };
    let params = AfcParams {
        n_teeth,
        comb_interval_hz: interval_hz,
        window_width_hz: (n_teeth as f64 + 1.0) * interval_hz,
        tooth_fwhm_hz: interval_hz / 5.0,
        tooth_center_jitter_rms_hz: 0.0,
        ..AfcParams::default()
    };
    (scheme, params)
}

#[test]
fn criterion_01_echo_delay() {
    let started = Instant::now();
    let (scheme, params) = ideal_comb(21, 2.0e6);
    let spec = prepare(&scheme, &params).unwrap();
    let pulse = OpticalPulse::probe_for(&params, DEFAULT_PROBE_FWHM_S, 0.0).unwrap();
    let analysis = analyze_echo(&spec, &pulse).unwrap();
    let elapsed = started.elapsed();

    let bin = analysis.output.dt_s();
    let err = (analysis.delay_s - 500.0e-9).abs();
    let pass = err <= bin && elapsed.as_secs_f64() < 1.0;
    verdict(
        1,
        "echo delay",
        pass,
        &format!(
            "delay {:.2} ns, target 500 ns, bin {:.2} ns, runtime {:.0} ms",
            analysis.delay_s * 1e9,
            bin * 1e9,
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

#[test]
fn criterion_02_early_echo() {
    let scheme = LevelScheme::default();
    let params = AfcParams::default();
    let spec = prepare(&scheme, &params).unwrap();
    let pulse = OpticalPulse::probe_for(&params, DEFAULT_PROBE_FWHM_S, 0.0).unwrap();
    let delay_ns = analyze_echo(&spec, &pulse).unwrap().delay_s * 1e9;
    let in_band = (380.0..=460.0).contains(&delay_ns);

    // reference: the same comb without tooth scatter
    let quiet = AfcParams { tooth_center_jitter_rms_hz: 0.0, ..params.clone() };
    let spec = prepare(&scheme, &quiet).unwrap();
    let reference_ns = analyze_echo(&spec, &pulse).unwrap().delay_s * 1e9;

    let mut early = 0;
    for seed in 0..100u64 {
        let perturbed = AfcParams { jitter_seed: seed, ..params.clone() };
        let spec = prepare(&scheme, &perturbed).unwrap();
        if analyze_echo(&spec, &pulse).unwrap().delay_s * 1e9 < reference_ns {
            early += 1;
        }
    }

    let pass = in_band && early >= 80;
    verdict(
        2,
        "early echo",
        pass,
        &format!(
            "documented comb {delay_ns:.1} ns in [380, 460]: {in_band}; earlier than the {reference_ns:.1} ns quiet comb for {early}/100 seeds"
        ),
    );
}

#[test]
fn criterion_03_calibrated_efficiencies() {
    let scheme = LevelScheme::default();
    let params = AfcParams::default();
    let spec = prepare(&scheme, &params).unwrap();
    let pulse = OpticalPulse::probe_for(&params, DEFAULT_PROBE_FWHM_S, 0.0).unwrap();
    let analysis = analyze_echo(&spec, &pulse).unwrap();
    let strong_ok = (analysis.efficiency - 0.079).abs() <= 0.005;

    // Single-photon path: same spectrum, leaner detection budget, estimated
    // back from counted clicks.
    let counting = ExperimentConfig::default().counting;
    let hist = run_experiment(
        pulse.energy(),
        &analysis.output,
        &counting.source,
        &counting.detector,
        100_000,
        0,
    )
    .unwrap();
    let (lo, hi) = analysis.window_s;
    let mc_eff = hist.efficiency_estimate(lo, hi, &counting.source).unwrap();
    let mc_ok = (mc_eff - 0.068).abs() <= 0.005;

    verdict(
        3,
        "calibrated efficiencies",
        strong_ok && mc_ok,
        &format!(
            "deterministic {:.4} vs 0.079 +- 0.005; single-photon MC {mc_eff:.4} vs 0.068 +- 0.005",
            analysis.efficiency
        ),
    );
}

#[test]
fn criterion_04_single_photon_statistics() {
    let started = Instant::now();
    let cfg = ExperimentConfig::default();
    let spec = prepare(&cfg.scheme, &cfg.afc).unwrap();
    let pulse = OpticalPulse::probe_for(&cfg.afc, cfg.probe.fwhm_s, 0.0).unwrap();
    let analysis = analyze_echo(&spec, &pulse).unwrap();
    let hist = run_experiment(
        pulse.energy(),
        &analysis.output,
        &cfg.counting.source,
        &cfg.counting.detector,
        10_000,
        cfg.seed,
    )
    .unwrap();
    let elapsed = started.elapsed();

    let (lo, hi) = analysis.window_s;
    let per_trial = hist.photons_per_trial_in(lo, hi);
    let stderr = hist.photons_per_trial_stderr_in(lo, hi);
    let within = (per_trial - 0.040).abs() <= 3.0 * stderr;
    let pass = within && elapsed.as_secs_f64() < 10.0;
    verdict(
        4,
        "single-photon statistics",
        pass,
        &format!(
            "photons/trial {per_trial:.4} vs 0.040, 3 sigma = {:.4}, runtime {:.2} s",
            3.0 * stderr,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_05_conversion_arithmetic() {
    let eta = photon_number_efficiency(
        PowerReading { power_w: 730.0e-6, wavelength_m: 1514.0e-9 },
        PowerReading { power_w: 509.0e-6, wavelength_m: 606.0e-9 },
    )
    .unwrap();
    let eta_ok = (eta - 0.279).abs() <= 0.001;

    let sum = sfg_sum_check(197.9e12, 296.8e12).unwrap();
    let sum_ok = sum == 494.7e12;

    verdict(
        5,
        "conversion arithmetic",
        eta_ok && sum_ok,
        &format!("efficiency {eta:.4} vs 0.279 +- 0.001; 197.9 THz + 296.8 THz == 494.7 THz exactly: {sum_ok}"),
    );
}

#[test]
fn criterion_06_snr_budget() {
    let noise = noise_photons_per_pulse(8.0e2, 100.0e-9).unwrap();
    let noise_ok = (noise - 8.0e-5).abs() < 1e-16;
    let snr = signal_to_noise(0.96, 8.0e-5).unwrap();
    let snr_ok = (snr - 1.2e4).abs() / 1.2e4 < 1e-9;
    verdict(
        6,
        "snr budget",
        noise_ok && snr_ok,
        &format!("noise/pulse {noise:.3e} vs 8e-5; snr {snr:.4e} vs 1.2e4"),
    );
}

#[test]
fn criterion_07_lock_closure() {
    let chain = standard_chain(&StandardChainParams::default()).unwrap();
    let residual = chain.residual_detuning_hz().unwrap();
    let nominal_ok = residual == 0.0;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut closed = 0;
    for _ in 0..1000 {
        let offset = rng.gen_range(1.0e6..500.0e6);
        let p = StandardChainParams {
            burn_shift_hz: rng.gen_range(1.0e6..500.0e6),
            lock_offset_hz: offset,
            signal_trim_hz: offset,
            control_offset_hz: rng.gen_range(-1.0e6..1.0e6),
            telecom_offset_hz: rng.gen_range(-1.0e6..1.0e6),
            pump_offset_hz: rng.gen_range(-1.0e6..1.0e6),
            ..StandardChainParams::default()
        };
        let chain = standard_chain(&p).unwrap();
        if chain.residual_detuning_hz().unwrap() == 0.0 {
            closed += 1;
        }
    }

    verdict(
        7,
        "lock closure",
        nominal_ok && closed == 1000,
        &format!("nominal residual {residual} Hz; {closed}/1000 randomized chains close exactly"),
    );
}

#[test]
fn criterion_08_drift_budget() {
    let chain = standard_chain(&StandardChainParams::default()).unwrap();
    let mut within = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let record = chain.simulate_beat(standard::MONITOR_LOCK, 900.0, 0.1, seed).unwrap();
        let p2p = record.peak_to_peak_hz();
        worst = worst.max(p2p);
        if p2p <= 150.0e3 {
            within += 1;
        }
    }
    verdict(
        8,
        "drift budget",
        within >= 90,
        &format!("{within}/100 fifteen-minute records stay within 150 kHz peak to peak; worst {worst:.0} Hz"),
    );
}

#[test]
fn criterion_09_multiplexing_arithmetic() {
    let plan = MultiplexPlan::default();
    let temporal = plan.temporal_modes();
    let total = plan.mode_count();
    let pass = temporal == 200 && plan.spectral_modes() == 10 && total == 2000 && total > 1000;
    verdict(
        9,
        "multiplexing arithmetic",
        pass,
        &format!("temporal {temporal} vs 200; total {total} vs 2000 > 1000"),
    );
}

/// Naive circular convolution, the O(n^2) time-domain oracle.
fn circular_convolve(h: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let n = h.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..n {
                acc += h[m] * x[(k + n - m) % n];
            }
            acc
        })
        .collect()
}

#[test]
fn criterion_10_property_suite_instances() {
    // passivity on both calibrated and ideal combs
    let mut passivity_ok = true;
    for (scheme, params) in [
        (LevelScheme::default(), AfcParams::default()),
        ideal_comb(21, 2.0e6),
    ] {
        let spec = prepare(&scheme, &params).unwrap();
        let pulse = OpticalPulse::probe_for(&params, DEFAULT_PROBE_FWHM_S, 0.0).unwrap();
        let out = propagate(&spec, &pulse).unwrap();
        passivity_ok &= out.energy() <= pulse.energy() * (1.0 + 1e-12);
    }

    // causality: energy before the input's leading edge
    let params = AfcParams::default();
    let spec = prepare(&LevelScheme::default(), &params).unwrap();
    let pulse = OpticalPulse::probe_for(&params, DEFAULT_PROBE_FWHM_S, 0.0).unwrap();
    let out = propagate(&spec, &pulse).unwrap();
    let edge = pulse.peak_time_s() - 3.0 * pulse.intensity_fwhm_s();
    let total: f64 = out.envelope().iter().map(|c| c.norm_sqr()).sum();
    let before: f64 = out
        .envelope()
        .iter()
        .enumerate()
        .take_while(|(i, _)| out.time_s(*i) < edge)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    let causality = before / total;
    let causality_ok = causality < 1e-6;

    // frequency-domain filtering equals time-domain convolution: push a unit
    // impulse through to read the impulse response off the same padded grid,
    // then convolve by hand
    let (scheme, params) = ideal_comb(3, 2.0e6);
    let spec = prepare(&scheme, &params).unwrap();
    let n = 2048usize;
    let dt = 20.0e-9;
    let mut delta = vec![Complex64::new(0.0, 0.0); n];
    delta[0] = Complex64::new(1.0, 0.0);
    let delta = OpticalPulse::new(0.0, dt, delta, 0.0).unwrap();
    let h = propagate(&spec, &delta).unwrap();

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let (t0, width) = (6.0e-6, 120.0e-9);
    for (i, c) in x.iter_mut().enumerate() {
        let t = i as f64 * dt - t0;
        *c = Complex64::new((-(t / width).powi(2)).exp(), 0.0);
    }
    let input = OpticalPulse::new(0.0, dt, x.clone(), 0.0).unwrap();
    let y_fft = propagate(&spec, &input).unwrap();
    let y_time = circular_convolve(h.envelope(), &x);
    let num: f64 = y_fft
        .envelope()
        .iter()
        .zip(&y_time)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = y_time.iter().map(|c| c.norm_sqr()).sum();
    let l2 = (num / den).sqrt();
    let equivalence_ok = l2 < 1e-6;

    // MC efficiency converges on the deterministic value
    let params = AfcParams::default();
    let spec = prepare(&LevelScheme::default(), &params).unwrap();
    let pulse = OpticalPulse::probe_for(&params, DEFAULT_PROBE_FWHM_S, 0.0).unwrap();
    let analysis = analyze_echo(&spec, &pulse).unwrap();
    let source = PhotonSource { mean_photons_per_trial: 0.59 };
    let hist = run_experiment(
        pulse.energy(),
        &analysis.output,
        &source,
        &DetectorModel::default(),
        100_000,
        11,
    )
    .unwrap();
    let (lo, hi) = analysis.window_s;
    let mc = hist.efficiency_estimate(lo, hi, &source).unwrap();
    let sigma = hist.photons_per_trial_stderr_in(lo, hi) / source.mean_photons_per_trial;
    let mc_ok = (mc - analysis.efficiency).abs() <= 3.0 * sigma;

    // chain MC against exact enumeration, two and three links
    let two = [0.3, 0.5];
    let stats2 = chain_simulate(&two, ChainPolicy::SameSlot, 200_000, 5).unwrap();
    let exact2 = 1.0 / (two[0] * two[1]);
    let chain2_ok = (stats2.mean_slots - exact2).abs() <= 3.0 * stats2.stderr_slots;

    let q = [0.3, 0.4, 0.5];
    let stats3 = chain_simulate(&q, ChainPolicy::HoldUntilAll, 200_000, 6).unwrap();
    // E[max of geometrics] by inclusion-exclusion over the seven subsets
    let g = |p: f64| 1.0 / p;
    let pair = |a: f64, b: f64| 1.0 / (1.0 - (1.0 - a) * (1.0 - b));
    let triple = 1.0 / (1.0 - (1.0 - q[0]) * (1.0 - q[1]) * (1.0 - q[2]));
    let exact3 = g(q[0]) + g(q[1]) + g(q[2]) - pair(q[0], q[1]) - pair(q[0], q[2]) - pair(q[1], q[2]) + triple;
    let chain3_ok = (stats3.mean_slots - exact3).abs() <= 3.0 * stats3.stderr_slots;

    let pass = passivity_ok && causality_ok && equivalence_ok && mc_ok && chain2_ok && chain3_ok;
    verdict(
        10,
        "property suite instances",
        pass,
        &format!(
            "passivity {passivity_ok}; causality leak {causality:.1e}; freq/time L2 {l2:.1e}; MC {mc:.4} vs {:.4}; chains {:.2}/{exact2:.2} and {:.2}/{exact3:.2}",
            analysis.efficiency, stats2.mean_slots, stats3.mean_slots
        ),
    );
}
