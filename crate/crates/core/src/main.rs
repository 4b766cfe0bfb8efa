//! Command-line front end: loads one TOML config, runs the requested
//! simulation, and emits provenance-stamped CSV and JSON artifacts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use afclink::config::ExperimentConfig;

/// say! panics when the consumer closes the pipe (afclink ... | head);
/// artifacts are already on disk by then, so drop the message instead.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}
use afclink::conversion::{
    noise_photons_per_pulse, photon_number_efficiency, pump_wavelength_m, signal_to_noise,
    PowerReading,
};
use afclink::counting::run_experiment;
use afclink::error::{Error, Result};
use afclink::lockchain::{standard, standard_chain};
use afclink::propagation::analyze_echo;
use afclink::pulse::OpticalPulse;
use afclink::rate::{
    chain_simulate, expected_slots_hold_all, expected_slots_same_slot, multiplexed_rate,
    ChainPolicy,
};
use afclink::report::{
    write_beat_csv, write_histogram_csv, write_pulse_csv, write_spectrum_csv, write_summary_json,
    write_sweep_csv, RunStamp, SweepRow,
};
use afclink::spectrum::prepare;

#[derive(Parser)]
#[command(name = "afclink", version, about = "Quantum-memory node simulator: comb spectra, echoes, locks, counts, rates")]
struct Cli {
    /// Experiment description (TOML). Built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the seed in the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory artifacts are written into.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Restrict emission to one artifact family.
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        self != Format::Json
    }
    fn json(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the comb and export the absorption spectrum.
    Afc,
    /// Propagate a probe through the comb and export the echo trace.
    Echo,
    /// Close the frequency-lock chain and export a beat record.
    Lock,
    /// Monte-Carlo photon counting through the prepared memory.
    Count,
    /// Distribution rate for the configured link and multiplexing plan.
    Rate,
    /// Rate as a function of node spacing.
    Sweep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    let stamp = RunStamp { config_sha256: cfg.digest()?, seed: cfg.seed };

    std::fs::create_dir_all(&cli.out)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", cli.out.display())))?;

    match cli.command {
        Command::Afc => cmd_afc(&cfg, &stamp, cli),
        Command::Echo => cmd_echo(&cfg, &stamp, cli),
        Command::Lock => cmd_lock(&cfg, &stamp, cli),
        Command::Count => cmd_count(&cfg, &stamp, cli),
        Command::Rate => cmd_rate(&cfg, &stamp, cli),
        Command::Sweep => cmd_sweep(&cfg, &stamp, cli),
    }
}

fn artifact(dir: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf)> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    Ok((BufWriter::new(file), path))
}

fn emit<F>(cli: &Cli, name: &str, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let (mut w, path) = artifact(&cli.out, name)?;
    write(&mut w)?;
    w.flush()?;
    say!("wrote {}", path.display());
    Ok(())
}

fn cmd_afc(cfg: &ExperimentConfig, stamp: &RunStamp, cli: &Cli) -> Result<()> {
    let spec = prepare(&cfg.scheme, &cfg.afc)?;
    say!(
        "comb: {} teeth at {} Hz spacing, finesse {:.2}, {} grid points",
        cfg.afc.n_teeth,
        cfg.afc.comb_interval_hz,
        cfg.afc.finesse(),
        spec.od().len()
    );
    if cli.format.csv() {
        emit(cli, "spectrum.csv", |w| write_spectrum_csv(w, stamp, &spec))?;
    }
    if cli.format.json() {
        let summary = json!({
            "n_teeth": cfg.afc.n_teeth,
            "comb_interval_hz": cfg.afc.comb_interval_hz,
            "tooth_fwhm_hz": cfg.afc.tooth_fwhm_hz,
            "finesse": cfg.afc.finesse(),
            "window_width_hz": cfg.afc.window_width_hz,
            "peak_od": cfg.afc.peak_od,
            "grid_step_hz": spec.step_hz(),
            "grid_points": spec.od().len(),
        });
        emit(cli, "afc_summary.json", |w| write_summary_json(w, stamp, &summary))?;
    }
    Ok(())
}

fn cmd_echo(cfg: &ExperimentConfig, stamp: &RunStamp, cli: &Cli) -> Result<()> {
    let spec = prepare(&cfg.scheme, &cfg.afc)?;
    let pulse = OpticalPulse::probe_for(&cfg.afc, cfg.probe.fwhm_s, cfg.probe.carrier_detuning_hz)?;
    let analysis = analyze_echo(&spec, &pulse)?;
    say!(
        "echo: efficiency {:.4}, delay {:.1} ns",
        analysis.efficiency,
        analysis.delay_s * 1e9
    );
    if cli.format.csv() {
        emit(cli, "echo_trace.csv", |w| write_pulse_csv(w, stamp, &analysis.output))?;
    }
    if cli.format.json() {
        let summary = json!({
            "efficiency": analysis.efficiency,
            "peak_time_s": analysis.peak_time_s,
            "delay_s": analysis.delay_s,
            "echo_window_s": [analysis.window_s.0, analysis.window_s.1],
            "input_peak_time_s": pulse.peak_time_s(),
            "input_fwhm_s": cfg.probe.fwhm_s,
        });
        emit(cli, "echo_summary.json", |w| write_summary_json(w, stamp, &summary))?;
    }
    Ok(())
}

fn cmd_lock(cfg: &ExperimentConfig, stamp: &RunStamp, cli: &Cli) -> Result<()> {
    let chain = standard_chain(&cfg.chain)?;
    let residual = chain.residual_detuning_hz()?;
    let record = chain.simulate_beat(standard::MONITOR_LOCK, cfg.beat.duration_s, cfg.beat.dt_s, cfg.seed)?;
    let p2p = record.peak_to_peak_hz();
    say!("lock: residual detuning {residual} Hz, beat p2p {p2p:.1} Hz over {:.0} s", record.duration_s());
    if cli.format.csv() {
        emit(cli, "beat.csv", |w| write_beat_csv(w, stamp, &record))?;
    }
    if cli.format.json() {
        let summary = json!({
            "residual_detuning_hz": residual,
            "beat_peak_to_peak_hz": p2p,
            "beat_duration_s": record.duration_s(),
            "beat_dt_s": record.dt_s,
            "in_band_fraction_75khz": record.in_band_fraction(75.0e3)?,
            "lock_engaged": cfg.chain.lock_engaged,
        });
        emit(cli, "lock_summary.json", |w| write_summary_json(w, stamp, &summary))?;
    }
    Ok(())
}

fn cmd_count(cfg: &ExperimentConfig, stamp: &RunStamp, cli: &Cli) -> Result<()> {
    let spec = prepare(&cfg.scheme, &cfg.afc)?;
    let pulse = OpticalPulse::probe_for(&cfg.afc, cfg.probe.fwhm_s, cfg.probe.carrier_detuning_hz)?;
    let analysis = analyze_echo(&spec, &pulse)?;
    let hist = run_experiment(
        pulse.energy(),
        &analysis.output,
        &cfg.counting.source,
        &cfg.counting.detector,
        cfg.counting.n_trials,
        cfg.seed,
    )?;
    let (lo, hi) = analysis.window_s;
    let per_trial = hist.photons_per_trial_in(lo, hi);
    let stderr = hist.photons_per_trial_stderr_in(lo, hi);
    let efficiency = hist.efficiency_estimate(lo, hi, &cfg.counting.source)?;
    say!(
        "count: {} trials, echo-window photons/trial {per_trial:.4} +- {stderr:.4}, efficiency estimate {efficiency:.4}",
        hist.n_trials
    );
    if cli.format.csv() {
        emit(cli, "histogram.csv", |w| write_histogram_csv(w, stamp, &hist))?;
    }
    if cli.format.json() {
        let summary = json!({
            "n_trials": hist.n_trials,
            "photons_per_trial": per_trial,
            "photons_per_trial_stderr": stderr,
            "efficiency": efficiency,
            "echo_window_s": [lo, hi],
            "total_counts": hist.total_counts(),
        });
        emit(cli, "count_summary.json", |w| write_summary_json(w, stamp, &summary))?;
    }
    Ok(())
}

fn chain_oracle(cycle_success: &[f64], policy: ChainPolicy) -> Result<f64> {
    match policy {
        ChainPolicy::SameSlot => expected_slots_same_slot(cycle_success),
        ChainPolicy::HoldUntilAll => expected_slots_hold_all(cycle_success),
    }
}

fn cmd_rate(cfg: &ExperimentConfig, stamp: &RunStamp, cli: &Cli) -> Result<()> {
    let report = multiplexed_rate(&cfg.rate.link, &cfg.rate.plan)?;
    let stats = chain_simulate(
        &cfg.rate.chain_cycle_success,
        cfg.rate.chain_policy,
        cfg.rate.chain_trials,
        cfg.seed,
    )?;
    let oracle = chain_oracle(&cfg.rate.chain_cycle_success, cfg.rate.chain_policy)?;
    say!(
        "rate: {} modes, link {:.3e} Hz, end-to-end {:.3e} Hz; chain mean slots {:.2} (analytic {:.2})",
        report.mode_count, report.link_rate_hz, report.end_to_end_rate_hz, stats.mean_slots, oracle
    );
    if cli.format.csv() {
        let row = SweepRow {
            distance_km: cfg.rate.link.length_km,
            rate_hz: report.end_to_end_rate_hz,
            multiplier: report.mode_count as f64,
        };
        emit(cli, "rate.csv", |w| write_sweep_csv(w, stamp, &[row]))?;
    }
    if cli.format.json() {
        let summary = json!({
            "report": report,
            "chain": {
                "cycle_success": cfg.rate.chain_cycle_success,
                "policy": cfg.rate.chain_policy,
                "mean_slots": stats.mean_slots,
                "stderr_slots": stats.stderr_slots,
                "expected_slots": oracle,
                "n_trials": stats.n_trials,
            },
        });
        emit(cli, "rate_summary.json", |w| write_summary_json(w, stamp, &summary))?;
    }
    conversion_note(cfg);
    Ok(())
}

/// The conversion arithmetic is cheap enough to print on every rate run.
fn conversion_note(cfg: &ExperimentConfig) {
    let c = &cfg.conversion;
    let input = PowerReading { power_w: c.input_power_w, wavelength_m: c.input_wavelength_m };
    let output = PowerReading { power_w: c.output_power_w, wavelength_m: c.output_wavelength_m };
    if let Ok(eta) = photon_number_efficiency(input, output) {
        let noise = noise_photons_per_pulse(c.noise_rate_cps, c.pulse_window_s).unwrap_or(f64::NAN);
        let snr = signal_to_noise(c.signal_photons_per_pulse, noise).unwrap_or(f64::NAN);
        let pump = pump_wavelength_m(c.input_wavelength_m, c.output_wavelength_m).unwrap_or(f64::NAN);
        say!(
            "conversion: photon-number efficiency {:.3}, noise/pulse {noise:.2e}, snr {snr:.3e}, pump {:.1} nm",
            eta,
            pump * 1.0e9
        );
    }
}

fn cmd_sweep(cfg: &ExperimentConfig, stamp: &RunStamp, cli: &Cli) -> Result<()> {
    let s = &cfg.sweep;
    let mut rows = Vec::with_capacity(s.steps as usize);
    for i in 0..s.steps {
        let frac = if s.steps == 1 { 0.0 } else { i as f64 / (s.steps - 1) as f64 };
        let distance = s.min_km + frac * (s.max_km - s.min_km);
        let link = afclink::rate::LinkConfig { length_km: distance, ..cfg.rate.link };
        let report = multiplexed_rate(&link, &cfg.rate.plan)?;
        rows.push(SweepRow {
            distance_km: distance,
            rate_hz: report.end_to_end_rate_hz,
            multiplier: report.mode_count as f64,
        });
    }
    say!("sweep: {} points from {} km to {} km", rows.len(), s.min_km, s.max_km);
    if cli.format.csv() {
        emit(cli, "sweep.csv", |w| write_sweep_csv(w, stamp, &rows))?;
    }
    if cli.format.json() {
        let summary = json!({"points": rows});
        emit(cli, "sweep_summary.json", |w| write_summary_json(w, stamp, &summary))?;
    }
    Ok(())
}
