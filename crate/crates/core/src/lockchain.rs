//! Frequency bookkeeping for the laser lock chain.
//!
//! Lasers, acousto-optic shifts and sum-frequency stages form a small DAG.
//! Absolute frequencies are kept as a THz-scale nominal plus an RF-scale
//! offset so that closure residuals are computed purely in RF arithmetic;
//! subtracting two ~5e14 Hz floats would throw away every kilohertz.
//!
//! Node frequencies are evaluated symbolically as linear forms over the free
//! laser offsets. Engaged offset locks substitute the controlled laser's
//! form, so common terms cancel exactly rather than to rounding error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// RF range an acousto-optic modulator can realistically produce.
pub const AOM_MIN_HZ: f64 = 1.0e6;
pub const AOM_MAX_HZ: f64 = 1.0e9;

/// Cap on samples a single beat record may hold.
pub const MAX_BEAT_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeId(pub usize);

/// Residual motion of a laser around its anchor (free-running drift for an
/// unlocked laser, in-loop residual for a locked one).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriftModel {
    pub kind: DriftKind,
    /// Frequency diffusion, Hz^2 per second.
    pub diffusion_hz2_per_s: f64,
    /// Mean-reversion rate toward the anchor, 1/s. Ignored by random walks.
    pub reversion_per_s: f64,
    /// White per-sample servo/measurement noise, Hz rms.
    pub white_rms_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftKind {
    OrnsteinUhlenbeck,
    RandomWalk,
}

/// Default per-laser residual: bounded drift with a ~100 s correlation time.
/// The diffusion/reversion pair puts the stationary rms at 10 kHz per laser,
/// which keeps the three-laser beat inside a 150 kHz band over a 15 minute
/// record for well over 90% of seeds (median swing ~95 kHz).
impl Default for DriftModel {
    fn default() -> Self {
        DriftModel {
            kind: DriftKind::OrnsteinUhlenbeck,
            diffusion_hz2_per_s: 2.0e6,
            reversion_per_s: 0.01,
            white_rms_hz: 3.0e3,
        }
    }
}

impl DriftModel {
    pub fn validate(&self) -> Result<()> {
        if self.diffusion_hz2_per_s < 0.0 || self.white_rms_hz < 0.0 {
            return Err(Error::InvalidParameter("drift noise terms must be non-negative".into()));
        }
        if self.kind == DriftKind::OrnsteinUhlenbeck && self.reversion_per_s <= 0.0 {
            return Err(Error::InvalidParameter("mean reversion rate must be positive".into()));
        }
        Ok(())
    }

    /// Stationary rms of the reverting component.
    pub fn stationary_rms_hz(&self) -> f64 {
        match self.kind {
            DriftKind::OrnsteinUhlenbeck => (self.diffusion_hz2_per_s / (2.0 * self.reversion_per_s)).sqrt(),
            DriftKind::RandomWalk => f64::INFINITY,
        }
    }

    /// Samples the process on a uniform grid starting from the anchor.
    pub fn sample_path(&self, n: usize, dt_s: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut path = Vec::with_capacity(n);
        let mut x = 0.0f64;
        match self.kind {
            DriftKind::OrnsteinUhlenbeck => {
                // Exact discretization of the reverting process.
                let decay = (-self.reversion_per_s * dt_s).exp();
                let step_sd = (self.diffusion_hz2_per_s / (2.0 * self.reversion_per_s)
                    * (1.0 - decay * decay))
                    .sqrt();
                for i in 0..n {
                    if i > 0 {
                        let xi: f64 = StandardNormal.sample(rng);
                        x = x * decay + step_sd * xi;
                    }
                    let w: f64 = StandardNormal.sample(rng);
                    path.push(x + self.white_rms_hz * w);
                }
            }
            DriftKind::RandomWalk => {
                let step_sd = (self.diffusion_hz2_per_s * dt_s).sqrt();
                for i in 0..n {
                    if i > 0 {
                        let xi: f64 = StandardNormal.sample(rng);
                        x += step_sd * xi;
                    }
                    let w: f64 = StandardNormal.sample(rng);
                    path.push(x + self.white_rms_hz * w);
                }
            }
        }
        path
    }
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    /// Free-running laser; an engaged lock may take over its offset.
    Laser { nominal_hz: f64, offset_hz: f64, drift: Option<DriftModel> },
    /// Laser referenced to the frequency comb, an ideal zero-drift anchor;
    /// the drift model describes the in-loop residual.
    CombLock { nominal_hz: f64, offset_hz: f64, drift: Option<DriftModel> },
    /// Single input shifted by a fixed RF.
    AomShift { shift_hz: f64 },
    /// Output at the exact sum of two inputs.
    SfgSum,
}

#[derive(Debug, Clone)]
pub struct FrequencyNode {
    pub label: String,
    pub kind: NodeKind,
    pub inputs: Vec<NodeId>,
}

/// Servo constraint: freq(minuend) - freq(subtrahend) held at offset_hz by
/// adjusting the controlled laser.
#[derive(Debug, Clone)]
pub struct OffsetLock {
    pub minuend: NodeId,
    pub subtrahend: NodeId,
    pub offset_hz: f64,
    pub controls: NodeId,
    pub engaged: bool,
}

#[derive(Debug, Clone)]
pub struct LockChain {
    nodes: Vec<FrequencyNode>,
    locks: Vec<OffsetLock>,
    /// Center of the prepared comb.
    pub afc_center: NodeId,
    /// Converted signal arriving at the memory.
    pub signal: NodeId,
}

/// Linear form over free laser offsets. The constant part stays a list of
/// signed terms so that equal contributions cancel exactly when forms are
/// subtracted; it is folded to a float only at the very end.
#[derive(Debug, Clone, Default)]
struct LinForm {
    coeffs: BTreeMap<usize, f64>,
    terms: Vec<f64>,
}

impl LinForm {
    fn var(idx: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, 1.0);
        LinForm { coeffs, terms: Vec::new() }
    }

    fn constant(c: f64) -> Self {
        LinForm { coeffs: BTreeMap::new(), terms: if c == 0.0 { Vec::new() } else { vec![c] } }
    }

    fn add(&self, other: &LinForm) -> LinForm {
        let mut out = self.clone();
        for (&k, &v) in &other.coeffs {
            let e = out.coeffs.entry(k).or_insert(0.0);
            *e += v;
            if *e == 0.0 {
                out.coeffs.remove(&k);
            }
        }
        out.terms.extend_from_slice(&other.terms);
        out.cancel();
        out
    }

    fn sub(&self, other: &LinForm) -> LinForm {
        self.add(&other.scale(-1.0))
    }

    fn scale(&self, s: f64) -> LinForm {
        LinForm {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v * s)).collect(),
            terms: self.terms.iter().map(|&t| t * s).collect(),
        }
    }

    fn shift(&self, c: f64) -> LinForm {
        let mut out = self.clone();
        if c != 0.0 {
            out.terms.push(c);
        }
        out.cancel();
        out
    }

    /// Drops +x/-x pairs so equal contributions vanish without rounding.
    fn cancel(&mut self) {
        let mut kept: Vec<f64> = Vec::with_capacity(self.terms.len());
        'outer: for &t in &self.terms {
            for i in 0..kept.len() {
                if kept[i] == -t {
                    kept.swap_remove(i);
                    continue 'outer;
                }
            }
            kept.push(t);
        }
        self.terms = kept;
    }

    fn fold_constant(&self) -> f64 {
        self.terms.iter().sum()
    }

    fn eval(&self, offsets: &dyn Fn(usize) -> f64) -> f64 {
        self.coeffs.iter().map(|(&k, &v)| v * offsets(k)).sum::<f64>() + self.fold_constant()
    }
}

impl LockChain {
    pub fn new(
        nodes: Vec<FrequencyNode>,
        locks: Vec<OffsetLock>,
        afc_center: NodeId,
        signal: NodeId,
    ) -> Result<Self> {
        let chain = LockChain { nodes, locks, afc_center, signal };
        chain.validate()?;
        Ok(chain)
    }

    pub fn nodes(&self) -> &[FrequencyNode] {
        &self.nodes
    }

    pub fn locks(&self) -> &[OffsetLock] {
        &self.locks
    }

    pub fn set_lock_engaged(&mut self, lock: usize, engaged: bool) {
        self.locks[lock].engaged = engaged;
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            for input in &node.inputs {
                if input.0 >= n {
                    return Err(Error::InvalidParameter(format!(
                        "node {} references missing input {}",
                        node.label, input.0
                    )));
                }
                // Edges must point from earlier nodes: the list is in
                // topological order, which also rules out cycles.
                if input.0 >= i {
                    return Err(Error::InvalidParameter(format!(
                        "node {} input {} breaks topological order",
                        node.label, input.0
                    )));
                }
            }
            match &node.kind {
                NodeKind::Laser { .. } | NodeKind::CombLock { .. } => {
                    if !node.inputs.is_empty() {
                        return Err(Error::InvalidParameter(format!(
                            "laser {} cannot take inputs",
                            node.label
                        )));
                    }
                }
                NodeKind::AomShift { shift_hz } => {
                    if node.inputs.len() != 1 {
                        return Err(Error::InvalidParameter(format!(
                            "modulator {} needs exactly one input",
                            node.label
                        )));
                    }
                    let mag = shift_hz.abs();
                    if !(AOM_MIN_HZ..=AOM_MAX_HZ).contains(&mag) {
                        return Err(Error::InvalidParameter(format!(
                            "modulator {} shift {} Hz outside the {}..{} Hz RF range",
                            node.label, shift_hz, AOM_MIN_HZ, AOM_MAX_HZ
                        )));
                    }
                }
                NodeKind::SfgSum => {
                    if node.inputs.len() != 2 {
                        return Err(Error::InvalidParameter(format!(
                            "sum stage {} needs exactly two inputs",
                            node.label
                        )));
                    }
                }
            }
        }
        for (i, lock) in self.locks.iter().enumerate() {
            for id in [lock.minuend, lock.subtrahend, lock.controls] {
                if id.0 >= n {
                    return Err(Error::InvalidParameter(format!("lock {i} references missing node {}", id.0)));
                }
            }
            if !matches!(self.nodes[lock.controls.0].kind, NodeKind::Laser { .. }) {
                return Err(Error::InvalidParameter(format!(
                    "lock {i} must control a free-running laser"
                )));
            }
        }
        if self.afc_center.0 >= n || self.signal.0 >= n {
            return Err(Error::InvalidParameter("output taps reference missing nodes".into()));
        }
        Ok(())
    }

    /// Nominal (THz-scale) frequency of each node, folded left to right.
    fn nominal_hz(&self, id: NodeId) -> f64 {
        match &self.nodes[id.0].kind {
            NodeKind::Laser { nominal_hz, .. } | NodeKind::CombLock { nominal_hz, .. } => *nominal_hz,
            NodeKind::AomShift { .. } => self.nominal_hz(self.nodes[id.0].inputs[0]),
            NodeKind::SfgSum => {
                self.nominal_hz(self.nodes[id.0].inputs[0]) + self.nominal_hz(self.nodes[id.0].inputs[1])
            }
        }
    }

    /// Offset linear forms for every node, with engaged locks substituted.
    fn offset_forms(&self, engaged: bool) -> Result<Vec<LinForm>> {
        let mut forms: Vec<LinForm> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let form = match &node.kind {
                NodeKind::Laser { .. } => LinForm::var(i),
                NodeKind::CombLock { offset_hz, .. } => LinForm::constant(*offset_hz),
                NodeKind::AomShift { shift_hz } => forms[node.inputs[0].0].shift(*shift_hz),
                NodeKind::SfgSum => forms[node.inputs[0].0].add(&forms[node.inputs[1].0]),
            };
            forms.push(form);
        }
        if engaged {
            for (li, lock) in self.locks.iter().enumerate() {
                if !lock.engaged {
                    continue;
                }
                let var = lock.controls.0;
                let beat = forms[lock.minuend.0].sub(&forms[lock.subtrahend.0]);
                let nominal_beat = self.nominal_hz(lock.minuend) - self.nominal_hz(lock.subtrahend);
                let coeff = beat.coeffs.get(&var).copied().unwrap_or(0.0);
                if coeff == 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "lock {li} cannot act: its beat does not involve the controlled laser"
                    )));
                }
                // Solve beat = offset for the controlled offset.
                let mut rest = beat.clone();
                rest.coeffs.remove(&var);
                let solved = LinForm::constant(lock.offset_hz - nominal_beat)
                    .sub(&rest)
                    .scale(1.0 / coeff);
                // Substitute everywhere downstream.
                for form in forms.iter_mut() {
                    if let Some(c) = form.coeffs.remove(&var) {
                        *form = form.add(&solved.scale(c));
                    }
                }
            }
        }
        Ok(forms)
    }

    fn free_offset(&self, idx: usize) -> f64 {
        match &self.nodes[idx].kind {
            NodeKind::Laser { offset_hz, .. } => *offset_hz,
            _ => 0.0,
        }
    }

    /// Absolute frequency of a node with locks engaged as configured.
    pub fn frequency_hz(&self, id: NodeId) -> Result<f64> {
        let forms = self.offset_forms(true)?;
        let offset = forms[id.0].eval(&|i| self.free_offset(i));
        Ok(self.nominal_hz(id) + offset)
    }

    /// Detuning of the converted signal from the comb center. All engaged
    /// locks are substituted symbolically, so shared terms cancel exactly.
    pub fn residual_detuning_hz(&self) -> Result<f64> {
        let forms = self.offset_forms(true)?;
        let diff = forms[self.afc_center.0].sub(&forms[self.signal.0]);
        let nominal = self.nominal_hz(self.afc_center) - self.nominal_hz(self.signal);
        Ok(nominal + diff.eval(&|i| self.free_offset(i)))
    }

    /// Beat of lock `index` (minuend minus subtrahend minus lock offset)
    /// sampled over time with every drifting laser contributing its residual
    /// process. Lock servos are modeled as noise on the lasers they steer,
    /// not as dynamic loops, so no contribution cancels.
    pub fn simulate_beat(&self, index: usize, duration_s: f64, dt_s: f64, seed: u64) -> Result<BeatRecord> {
        if index >= self.locks.len() {
            return Err(Error::InvalidParameter(format!("no lock {index}")));
        }
        if !(dt_s.is_finite() && dt_s > 0.0) || !(duration_s.is_finite() && duration_s > 0.0) {
            return Err(Error::InvalidParameter("beat duration and step must be positive".into()));
        }
        let n = (duration_s / dt_s).floor() as usize + 1;
        if n > MAX_BEAT_SAMPLES {
            return Err(Error::NumericalGuard(format!(
                "beat record of {n} samples exceeds the {MAX_BEAT_SAMPLES} cap"
            )));
        }
        let lock = &self.locks[index];

        // Deterministic center from the engaged algebra.
        let engaged = self.offset_forms(true)?;
        let beat_form = engaged[lock.minuend.0].sub(&engaged[lock.subtrahend.0]);
        let nominal = self.nominal_hz(lock.minuend) - self.nominal_hz(lock.subtrahend);
        let center = nominal + beat_form.eval(&|i| self.free_offset(i)) - lock.offset_hz;

        // Noise weights from the free (unlocked) algebra: each laser's
        // residual rides on its anchor regardless of who anchors it.
        let free = self.offset_forms(false)?;
        let weights = free[lock.minuend.0].sub(&free[lock.subtrahend.0]);

        let mut record = vec![center; n];
        for (i, node) in self.nodes.iter().enumerate() {
            let (weight, drift) = match &node.kind {
                NodeKind::Laser { drift, .. } => (weights.coeffs.get(&i).copied().unwrap_or(0.0), drift),
                // Comb-referenced lasers carry no free variable; their
                // residual enters with the sign their offset would have.
                NodeKind::CombLock { drift, .. } => {
                    let probe = self.comb_weight(lock, i);
                    (probe, drift)
                }
                _ => (0.0, &None),
            };
            if weight == 0.0 {
                continue;
            }
            let Some(model) = drift else { continue };
            model.validate()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i as u64 + 1)));
            let path = model.sample_path(n, dt_s, &mut rng);
            for (r, p) in record.iter_mut().zip(path) {
                *r += weight * p;
            }
        }
        Ok(BeatRecord { dt_s, offsets_hz: record })
    }

    /// Weight a comb-referenced laser's residual carries in a lock's beat:
    /// re-evaluates the beat with that laser's offset bumped by one hertz.
    fn comb_weight(&self, lock: &OffsetLock, node: usize) -> f64 {
        let mut bumped = self.clone();
        if let NodeKind::CombLock { offset_hz, .. } = &mut bumped.nodes[node].kind {
            *offset_hz += 1.0;
        } else {
            return 0.0;
        }
        match (self.offset_forms(false), bumped.offset_forms(false)) {
            (Ok(a), Ok(b)) => {
                let fa = a[lock.minuend.0].sub(&a[lock.subtrahend.0]).fold_constant();
                let fb = b[lock.minuend.0].sub(&b[lock.subtrahend.0]).fold_constant();
                fb - fa
            }
            _ => 0.0,
        }
    }
}

/// Exact sum-frequency arithmetic; zero or negative inputs are degenerate.
pub fn sfg_sum_check(a_hz: f64, b_hz: f64) -> Result<f64> {
    if !(a_hz.is_finite() && a_hz > 0.0 && b_hz.is_finite() && b_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sum-frequency inputs must be positive, got {a_hz} and {b_hz}"
        )));
    }
    Ok(a_hz + b_hz)
}

/// Values wiring the standard chain: one comb-referenced control laser at the
/// memory wavelength, one comb-referenced telecom laser, and a pump laser
/// slaved to the monitor beat.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StandardChainParams {
    /// RF shift between control laser and comb center (burn modulator).
    pub burn_shift_hz: f64,
    /// Offset the monitor beat is servoed to.
    pub lock_offset_hz: f64,
    /// Trim shift applied in the pump arm of the signal conversion stage.
    pub signal_trim_hz: f64,
    pub control_offset_hz: f64,
    pub telecom_offset_hz: f64,
    /// Free-running pump offset used when the lock is disengaged.
    pub pump_offset_hz: f64,
    pub lock_engaged: bool,
    pub control_drift: Option<DriftModel>,
    pub telecom_drift: Option<DriftModel>,
    pub pump_drift: Option<DriftModel>,
}

impl Default for StandardChainParams {
    fn default() -> Self {
        StandardChainParams {
            burn_shift_hz: 160.0e6,
            lock_offset_hz: 164.0e6,
            signal_trim_hz: 164.0e6,
            control_offset_hz: 0.0,
            telecom_offset_hz: 0.0,
            pump_offset_hz: 0.0,
            lock_engaged: true,
            control_drift: Some(DriftModel::default()),
            telecom_drift: Some(DriftModel::default()),
            pump_drift: Some(DriftModel::default()),
        }
    }
}

/// Nominal carriers. The memory nominal is the exact float sum of the other
/// two, so every beat in the chain reduces to RF arithmetic.
pub const TELECOM_NOMINAL_HZ: f64 = 197.9e12;
pub const PUMP_NOMINAL_HZ: f64 = 296.8e12;
pub const MEMORY_NOMINAL_HZ: f64 = 494.7e12;

/// Index map for the standard chain built by [`standard_chain`].
pub mod standard {
    use super::NodeId;
    pub const CONTROL: NodeId = NodeId(0);
    pub const TELECOM: NodeId = NodeId(1);
    pub const PUMP: NodeId = NodeId(2);
    pub const BURN_AOM: NodeId = NodeId(3);
    pub const MONITOR_AOM: NodeId = NodeId(4);
    pub const MONITOR_SFG: NodeId = NodeId(5);
    pub const TRIM_AOM: NodeId = NodeId(6);
    pub const SIGNAL_SFG: NodeId = NodeId(7);
    pub const MONITOR_LOCK: usize = 0;
}

pub fn standard_chain(p: &StandardChainParams) -> Result<LockChain> {
    let nodes = vec![
        FrequencyNode {
            label: "control laser".into(),
            kind: NodeKind::CombLock {
                nominal_hz: MEMORY_NOMINAL_HZ,
                offset_hz: p.control_offset_hz,
                drift: p.control_drift,
            },
            inputs: vec![],
        },
        FrequencyNode {
            label: "telecom laser".into(),
            kind: NodeKind::CombLock {
                nominal_hz: TELECOM_NOMINAL_HZ,
                offset_hz: p.telecom_offset_hz,
                drift: p.telecom_drift,
            },
            inputs: vec![],
        },
        FrequencyNode {
            label: "pump laser".into(),
            kind: NodeKind::Laser {
                nominal_hz: PUMP_NOMINAL_HZ,
                offset_hz: p.pump_offset_hz,
                drift: p.pump_drift,
            },
            inputs: vec![],
        },
        FrequencyNode {
            label: "burn modulator".into(),
            kind: NodeKind::AomShift { shift_hz: p.burn_shift_hz },
            inputs: vec![standard::CONTROL],
        },
        FrequencyNode {
            label: "monitor modulator".into(),
            kind: NodeKind::AomShift { shift_hz: p.burn_shift_hz },
            inputs: vec![standard::CONTROL],
        },
        FrequencyNode {
            label: "monitor sum stage".into(),
            kind: NodeKind::SfgSum,
            inputs: vec![standard::TELECOM, standard::PUMP],
        },
        FrequencyNode {
            label: "pump trim modulator".into(),
            kind: NodeKind::AomShift { shift_hz: p.signal_trim_hz },
            inputs: vec![standard::PUMP],
        },
        FrequencyNode {
            label: "signal sum stage".into(),
            kind: NodeKind::SfgSum,
            inputs: vec![standard::TELECOM, standard::TRIM_AOM],
        },
    ];
    let locks = vec![OffsetLock {
        minuend: standard::MONITOR_AOM,
        subtrahend: standard::MONITOR_SFG,
        offset_hz: p.lock_offset_hz,
        controls: standard::PUMP,
        engaged: p.lock_engaged,
    }];
    LockChain::new(nodes, locks, standard::BURN_AOM, standard::SIGNAL_SFG)
}

/// Time series of a beat offset around its servo point.
#[derive(Debug, Clone)]
pub struct BeatRecord {
    pub dt_s: f64,
    pub offsets_hz: Vec<f64>,
}

impl BeatRecord {
    pub fn duration_s(&self) -> f64 {
        (self.offsets_hz.len().saturating_sub(1)) as f64 * self.dt_s
    }

    pub fn peak_to_peak_hz(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &self.offsets_hz {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if self.offsets_hz.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Fraction of samples within +-half_band_hz of zero offset.
    pub fn in_band_fraction(&self, half_band_hz: f64) -> Result<f64> {
        if !(half_band_hz.is_finite() && half_band_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "half band must be positive, got {half_band_hz}"
            )));
        }
        if self.offsets_hz.is_empty() {
            return Err(Error::InvalidParameter("empty beat record".into()));
        }
        let hits = self.offsets_hz.iter().filter(|v| v.abs() <= half_band_hz).count();
        Ok(hits as f64 / self.offsets_hz.len() as f64)
    }
}
