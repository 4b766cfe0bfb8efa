//! CSV and JSON emission. Every artifact carries the config digest and the
//! seed that produced it: CSV as a leading `#` comment line, JSON as fields.
//! Floats go through the default formatter (shortest round-trip, `.` decimal
//! separator), so identical runs emit identical bytes.

use std::io::Write;

use serde::Serialize;
use serde_json::json;

use crate::counting::EchoHistogram;
use crate::error::{Error, Result};
use crate::lockchain::BeatRecord;
use crate::pulse::OpticalPulse;
use crate::spectrum::AbsorptionSpectrum;

/// Provenance stamp for one run.
#[derive(Debug, Clone)]
pub struct RunStamp {
    pub config_sha256: String,
    pub seed: u64,
}

impl RunStamp {
    fn comment(&self) -> String {
        format!("# config_sha256={} seed={}\n", self.config_sha256, self.seed)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e)
}

pub fn write_spectrum_csv(w: &mut impl Write, stamp: &RunStamp, spec: &AbsorptionSpectrum) -> Result<()> {
    w.write_all(stamp.comment().as_bytes()).map_err(io_err)?;
    writeln!(w, "detuning_hz,od").map_err(io_err)?;
    for (i, od) in spec.od().iter().enumerate() {
        writeln!(w, "{},{}", spec.detuning_hz(i), od).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_pulse_csv(w: &mut impl Write, stamp: &RunStamp, pulse: &OpticalPulse) -> Result<()> {
    w.write_all(stamp.comment().as_bytes()).map_err(io_err)?;
    writeln!(w, "time_s,re,im,abs2").map_err(io_err)?;
    for (i, c) in pulse.envelope().iter().enumerate() {
        writeln!(w, "{},{},{},{}", pulse.time_s(i), c.re, c.im, c.norm_sqr()).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_beat_csv(w: &mut impl Write, stamp: &RunStamp, record: &BeatRecord) -> Result<()> {
    w.write_all(stamp.comment().as_bytes()).map_err(io_err)?;
    writeln!(w, "time_s,offset_hz").map_err(io_err)?;
    for (i, v) in record.offsets_hz.iter().enumerate() {
        writeln!(w, "{},{}", i as f64 * record.dt_s, v).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_histogram_csv(w: &mut impl Write, stamp: &RunStamp, hist: &EchoHistogram) -> Result<()> {
    w.write_all(stamp.comment().as_bytes()).map_err(io_err)?;
    writeln!(w, "bin_start_s,counts").map_err(io_err)?;
    for (i, c) in hist.counts.iter().enumerate() {
        writeln!(w, "{},{}", hist.start_s + i as f64 * hist.bin_s, c).map_err(io_err)?;
    }
    Ok(())
}

/// One sweep point: rate at a node spacing, with the multiplexing multiplier.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub distance_km: f64,
    pub rate_hz: f64,
    pub multiplier: f64,
}

pub fn write_sweep_csv(w: &mut impl Write, stamp: &RunStamp, rows: &[SweepRow]) -> Result<()> {
    w.write_all(stamp.comment().as_bytes()).map_err(io_err)?;
    writeln!(w, "distance_km,rate_hz,multiplier").map_err(io_err)?;
    for r in rows {
        writeln!(w, "{},{},{}", r.distance_km, r.rate_hz, r.multiplier).map_err(io_err)?;
    }
    Ok(())
}

/// Wraps a serializable summary with the provenance fields and pretty-prints.
pub fn write_summary_json(w: &mut impl Write, stamp: &RunStamp, summary: &impl Serialize) -> Result<()> {
    let doc = json!({
        "config_sha256": stamp.config_sha256,
        "seed": stamp.seed,
        "summary": summary,
    });
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::InvalidParameter(format!("summary not serializable: {e}")))?;
    w.write_all(text.as_bytes()).map_err(io_err)?;
    w.write_all(b"\n").map_err(io_err)?;
    Ok(())
}
