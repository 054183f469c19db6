//! Pulse schedules, bias-line assignment and static checks.
//!
//! A schedule is a list of abutting windows of width `T`. Each window fixes
//! every qubit's bias and lists the pulses that run during it; classical
//! events (inject, read/reset) in a window's list take effect at its start,
//! before the pulses. Events after the last window go in `trailing_events`.
//!
//! Quantum channel layout: data state `j` sits on position `s - 3j` at the
//! start of macro-step `s`. Step `s` pulses every pair `(q, q+1)` with
//! `q ≡ s (mod 3)`; pairs holding no data just pick up a global phase, so
//! all pairs of one residue class can share bias lines.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// Zero-bias pulse on an interior target.
    CnotPulse { control: usize },
    /// Bias-`ξ` pulse on an end target.
    ReadoutPulse { control: usize },
    /// Zero-bias pulse whose target copies the left neighbor.
    CopyPulse,
    /// Prepare data slot `slot` on the qubit.
    Inject { slot: usize },
    /// Read the qubit and put it back in `|0⟩`; `slot` names the data item
    /// expected there, if any.
    ReadReset { slot: Option<usize> },
}

impl EventKind {
    pub fn is_pulse(&self) -> bool {
        matches!(
            self,
            EventKind::CnotPulse { .. } | EventKind::ReadoutPulse { .. } | EventKind::CopyPulse
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub qubit: usize,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl PulseEvent {
    pub fn new(qubit: usize, kind: EventKind) -> Self {
        PulseEvent { qubit, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub start_ns: f64,
    pub duration_ns: f64,
    pub biases_mhz: Vec<f64>,
    pub events: Vec<PulseEvent>,
}

impl Window {
    pub fn pulses(&self) -> impl Iterator<Item = &PulseEvent> {
        self.events.iter().filter(|e| e.kind.is_pulse())
    }

    pub fn boundary_events(&self) -> impl Iterator<Item = &PulseEvent> {
        self.events.iter().filter(|e| !e.kind.is_pulse())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSchedule {
    pub n_qubits: usize,
    pub pulse_width_ns: f64,
    /// Windows per macro-step (3) or per clock sequence (2).
    pub windows_per_step: usize,
    pub windows: Vec<Window>,
    pub trailing_events: Vec<PulseEvent>,
}

impl PulseSchedule {
    pub fn makespan_ns(&self) -> f64 {
        self.windows.iter().map(|w| w.duration_ns).sum()
    }

    pub fn pulse_count(&self) -> usize {
        self.windows.iter().map(|w| w.pulses().count()).sum()
    }

    pub fn steps(&self) -> usize {
        self.windows.len() / self.windows_per_step.max(1)
    }

    /// Windows that tile `[0, makespan)` without gaps or overlap, each with
    /// one bias per qubit.
    pub fn check_tiling(&self) -> Result<()> {
        let mut t = 0.0;
        for (k, w) in self.windows.iter().enumerate() {
            if w.biases_mhz.len() != self.n_qubits {
                return Err(Error::ScheduleMismatch(format!(
                    "window {k} has {} biases for {} qubits",
                    w.biases_mhz.len(),
                    self.n_qubits
                )));
            }
            if !(w.duration_ns > 0.0) {
                return Err(Error::ScheduleMismatch(format!("window {k} has non-positive duration")));
            }
            if (w.start_ns - t).abs() > 1e-9 * t.max(1.0) {
                return Err(Error::ScheduleMismatch(format!("window {k} starts at {} ns, expected {t} ns", w.start_ns)));
            }
            t += w.duration_ns;
        }
        Ok(())
    }
}

/// Accumulates windows of width `T` with biases derived from the pulse kinds.
struct Builder {
    n_qubits: usize,
    eps_high_mhz: f64,
    xi_mhz: f64,
    pulse_width_ns: f64,
    windows_per_step: usize,
    windows: Vec<Window>,
    pending: Vec<PulseEvent>,
}

impl Builder {
    fn new(spec: &ChainSpec, pulse_width_ns: f64, windows_per_step: usize) -> Result<Self> {
        if !(pulse_width_ns.is_finite() && pulse_width_ns > 0.0) {
            return Err(Error::param("pulse_width_ns", format!("must be positive, got {pulse_width_ns}")));
        }
        Ok(Builder {
            n_qubits: spec.n_qubits,
            eps_high_mhz: spec.eps_high_mhz,
            xi_mhz: spec.xi_mhz,
            pulse_width_ns,
            windows_per_step,
            windows: Vec::new(),
            pending: Vec::new(),
        })
    }

    /// Queues a classical event for the start of the next window.
    fn at_next_boundary(&mut self, event: PulseEvent) {
        self.pending.push(event);
    }

    fn window(&mut self, pulses: Vec<PulseEvent>) {
        let mut biases = vec![self.eps_high_mhz; self.n_qubits];
        for p in &pulses {
            biases[p.qubit] = match p.kind {
                EventKind::ReadoutPulse { .. } => self.xi_mhz,
                _ => 0.0,
            };
        }
        let mut events = std::mem::take(&mut self.pending);
        events.extend(pulses);
        self.windows.push(Window {
            start_ns: self.windows.len() as f64 * self.pulse_width_ns,
            duration_ns: self.pulse_width_ns,
            biases_mhz: biases,
            events,
        });
    }

    fn finish(self) -> PulseSchedule {
        PulseSchedule {
            n_qubits: self.n_qubits,
            pulse_width_ns: self.pulse_width_ns,
            windows_per_step: self.windows_per_step,
            windows: self.windows,
            trailing_events: self.pending,
        }
    }
}

fn target_pulse(n_qubits: usize, target: usize, control: usize) -> PulseEvent {
    if target == 0 || target + 1 == n_qubits {
        PulseEvent::new(target, EventKind::ReadoutPulse { control })
    } else {
        PulseEvent::new(target, EventKind::CnotPulse { control })
    }
}

/// The three windows of one swap: targets (left, right, left).
fn swap_windows(n_qubits: usize, lefts: &[usize]) -> [Vec<PulseEvent>; 3] {
    let outer: Vec<_> = lefts.iter().map(|&q| target_pulse(n_qubits, q, q + 1)).collect();
    let inner: Vec<_> = lefts.iter().map(|&q| target_pulse(n_qubits, q + 1, q)).collect();
    [outer.clone(), inner, outer]
}

/// Three-pulse swap of adjacent qubits starting at `start_ns`.
pub fn swap_pulses(spec: &ChainSpec, left: usize, right: usize, pulse_width_ns: f64, start_ns: f64) -> Result<PulseSchedule> {
    spec.check_qubit(left)?;
    spec.check_qubit(right)?;
    if right != left + 1 {
        return Err(Error::NonAdjacent { left, right });
    }
    let mut b = Builder::new(spec, pulse_width_ns, 3)?;
    for pulses in swap_windows(spec.n_qubits, &[left]) {
        b.window(pulses);
    }
    let mut s = b.finish();
    for w in &mut s.windows {
        w.start_ns += start_ns;
    }
    Ok(s)
}

/// Pipelined swap channel on any chain of at least two qubits. Lengths
/// other than odd ≥ 5 are only useful as counterexamples.
pub fn swap_channel_schedule(spec: &ChainSpec, n_states: usize, pulse_width_ns: f64) -> Result<PulseSchedule> {
    let n = spec.n_qubits;
    if n < 2 {
        return Err(Error::InvalidLayout(format!("a swap channel needs at least 2 qubits, got {n}")));
    }
    if n_states < 1 {
        return Err(Error::InvalidLayout("at least one state must be sent".into()));
    }
    let mut b = Builder::new(spec, pulse_width_ns, 3)?;
    let steps = 3 * (n_states - 1) + (n - 1);
    b.at_next_boundary(PulseEvent::new(0, EventKind::Inject { slot: 0 }));
    for s in 0..steps {
        if s + 1 >= 3 && (s + 1) % 3 == 0 && (s + 1) / 3 < n_states {
            b.at_next_boundary(PulseEvent::new(0, EventKind::Inject { slot: (s + 1) / 3 }));
        }
        // data j reaches OUT at the end of step 3j + n - 2
        if s + 1 >= n && (s + 1 - n) % 3 == 0 {
            let slot = (s + 1 - n) / 3;
            b.at_next_boundary(PulseEvent::new(n - 1, EventKind::ReadReset { slot: Some(slot) }));
        }
        let lefts: Vec<usize> = (0..n - 1).filter(|q| q % 3 == s % 3).collect();
        for pulses in swap_windows(n, &lefts) {
            b.window(pulses);
        }
    }
    b.at_next_boundary(PulseEvent::new(
        n - 1,
        EventKind::ReadReset {
            slot: Some(n_states - 1),
        },
    ));
    Ok(b.finish())
}

/// Which grouping of interior qubits onto shared bias lines to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineScheme {
    /// Interior position mod 6 plus dedicated IN and OUT lines: 8 lines.
    #[default]
    Mod6,
    /// Interior position mod 3 plus IN and OUT: 5 lines.
    Mod3,
}

pub fn quantum_channel_schedule(spec: &ChainSpec, n_states: usize, pulse_width_ns: f64) -> Result<(PulseSchedule, LineAssignment)> {
    quantum_channel_schedule_with(spec, n_states, pulse_width_ns, LineScheme::Mod6)
}

pub fn quantum_channel_schedule_with(
    spec: &ChainSpec,
    n_states: usize,
    pulse_width_ns: f64,
    scheme: LineScheme,
) -> Result<(PulseSchedule, LineAssignment)> {
    let n = spec.n_qubits;
    if n < 5 || n % 2 == 0 {
        return Err(Error::InvalidLayout(format!(
            "a quantum channel needs an odd number of qubits, at least 5; got {n}"
        )));
    }
    let schedule = swap_channel_schedule(spec, n_states, pulse_width_ns)?;
    Ok((schedule, LineAssignment::quantum(n, scheme)))
}

/// COPY channel on an even chain `IN, A₁, B₁, …, A_k, B_k, OUT`. Each clock
/// sequence pulses all A qubits together with a READ-OUT pulse on OUT, then
/// all B qubits.
pub fn classical_channel_schedule(spec: &ChainSpec, n_bits: usize, pulse_width_ns: f64) -> Result<(PulseSchedule, LineAssignment)> {
    let n = spec.n_qubits;
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidLayout(format!(
            "a classical channel needs an even number of qubits, at least 4; got {n}"
        )));
    }
    if n_bits < 1 {
        return Err(Error::InvalidLayout("at least one bit must be sent".into()));
    }
    let latency = n / 2;
    let sequences = latency + n_bits - 1;
    let a_qubits: Vec<usize> = (1..n - 1).step_by(2).collect();
    let b_qubits: Vec<usize> = (2..n - 1).step_by(2).collect();
    let mut b = Builder::new(spec, pulse_width_ns, 2)?;
    b.at_next_boundary(PulseEvent::new(0, EventKind::Inject { slot: 0 }));
    for s in 0..sequences {
        if s >= 1 {
            let slot = s.checked_sub(latency);
            b.at_next_boundary(PulseEvent::new(n - 1, EventKind::ReadReset { slot }));
        }
        let mut phi1: Vec<_> = a_qubits.iter().map(|&q| PulseEvent::new(q, EventKind::CopyPulse)).collect();
        phi1.push(PulseEvent::new(n - 1, EventKind::ReadoutPulse { control: n - 2 }));
        b.window(phi1);
        if s + 1 < n_bits {
            b.at_next_boundary(PulseEvent::new(0, EventKind::ReadReset { slot: None }));
            b.at_next_boundary(PulseEvent::new(0, EventKind::Inject { slot: s + 1 }));
        }
        b.window(b_qubits.iter().map(|&q| PulseEvent::new(q, EventKind::CopyPulse)).collect());
    }
    b.at_next_boundary(PulseEvent::new(
        n - 1,
        EventKind::ReadReset {
            slot: Some(n_bits - 1),
        },
    ));
    Ok((b.finish(), LineAssignment::classical(n)))
}

/// Bias line of each qubit; `None` marks a qubit held at a static bias.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineAssignment {
    pub lines: Vec<Option<usize>>,
    pub line_count: usize,
}

impl LineAssignment {
    pub fn quantum(n_qubits: usize, scheme: LineScheme) -> Self {
        let modulus = match scheme {
            LineScheme::Mod6 => 6,
            LineScheme::Mod3 => 3,
        };
        let lines = (0..n_qubits)
            .map(|q| {
                Some(if q == 0 {
                    0
                } else if q + 1 == n_qubits {
                    1
                } else {
                    2 + q % modulus
                })
            })
            .collect();
        LineAssignment {
            lines,
            line_count: 2 + modulus,
        }
    }

    /// A qubits on line 0, B qubits on line 1, OUT on line 2; IN is static.
    pub fn classical(n_qubits: usize) -> Self {
        let lines = (0..n_qubits)
            .map(|q| match q {
                0 => None,
                q if q + 1 == n_qubits => Some(2),
                q if q % 2 == 1 => Some(0),
                _ => Some(1),
            })
            .collect();
        LineAssignment { lines, line_count: 3 }
    }

    /// Distinct line ids actually driving some qubit.
    pub fn lines_in_use(&self) -> usize {
        self.lines.iter().flatten().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineConflict {
    /// `None` for conflicts that are not tied to one window.
    pub window: Option<usize>,
    pub line: Option<usize>,
    pub qubits: Vec<usize>,
    pub message: String,
}

/// Empty iff every line carries one bias value per window and every
/// line-less qubit keeps a constant bias.
pub fn line_conflict_check(schedule: &PulseSchedule, assignment: &LineAssignment) -> Vec<LineConflict> {
    let mut out = Vec::new();
    if assignment.lines.len() != schedule.n_qubits {
        out.push(LineConflict {
            window: None,
            line: None,
            qubits: vec![],
            message: format!(
                "assignment covers {} qubits, schedule has {}",
                assignment.lines.len(),
                schedule.n_qubits
            ),
        });
        return out;
    }
    for (q, line) in assignment.lines.iter().enumerate() {
        if let Some(l) = line {
            if *l >= assignment.line_count {
                out.push(LineConflict {
                    window: None,
                    line: Some(*l),
                    qubits: vec![q],
                    message: format!("line {l} exceeds the declared count {}", assignment.line_count),
                });
            }
        }
    }
    for (k, w) in schedule.windows.iter().enumerate() {
        for line in 0..assignment.line_count {
            let members: Vec<usize> = (0..schedule.n_qubits).filter(|&q| assignment.lines[q] == Some(line)).collect();
            let values: BTreeSet<u64> = members.iter().map(|&q| w.biases_mhz[q].to_bits()).collect();
            if values.len() > 1 {
                out.push(LineConflict {
                    window: Some(k),
                    line: Some(line),
                    qubits: members.clone(),
                    message: format!(
                        "line {line} would need biases {:?}",
                        members.iter().map(|&q| w.biases_mhz[q]).collect::<Vec<_>>()
                    ),
                });
            }
        }
    }
    for q in (0..schedule.n_qubits).filter(|&q| assignment.lines[q].is_none()) {
        let values: BTreeSet<u64> = schedule.windows.iter().map(|w| w.biases_mhz[q].to_bits()).collect();
        if values.len() > 1 {
            out.push(LineConflict {
                window: None,
                line: None,
                qubits: vec![q],
                message: format!("qubit {q} has no line but its bias changes"),
            });
        }
    }
    out
}

/// A basis value as a GF(2) sum of data-slot variables plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitExpr {
    pub slots: BTreeSet<usize>,
    pub constant: bool,
}

impl BitExpr {
    pub fn zero() -> Self {
        BitExpr::default()
    }

    pub fn slot(slot: usize) -> Self {
        BitExpr {
            slots: BTreeSet::from([slot]),
            constant: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.slots.is_empty() && !self.constant
    }

    /// True if the value does not depend on any data slot.
    pub fn is_definite(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn xor(&self, other: &BitExpr) -> BitExpr {
        BitExpr {
            slots: self.slots.symmetric_difference(&other.slots).copied().collect(),
            constant: self.constant ^ other.constant,
        }
    }

    /// Value under an assignment of the slot variables.
    pub fn eval(&self, bits: &[bool]) -> bool {
        self.slots.iter().fold(self.constant, |acc, &s| acc ^ bits.get(s).copied().unwrap_or(false))
    }
}

impl fmt::Display for BitExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self.slots.iter().map(|s| format!("d{s}")).collect();
        if self.constant || terms.is_empty() {
            terms.push(if self.constant { "1" } else { "0" }.into());
        }
        write!(f, "{}", terms.join("^"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A CNOT/READ-OUT target has a non-`|0⟩` neighbor besides its control.
    DirtyNeighbor,
    /// A COPY target differs from its right neighbor.
    CopyPrecondition,
    InjectIntoOccupied,
    AdjacentTargets,
    /// Pulse kind not allowed on this qubit, or a malformed event.
    IllegalPulse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub window: usize,
    pub qubit: usize,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadRecord {
    /// Index of the window at whose start the read happens; equals the
    /// window count for trailing reads.
    pub window: usize,
    pub qubit: usize,
    pub slot: Option<usize>,
    pub value: BitExpr,
}

/// Symbolic basis-occupancy replay of a schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    /// Occupancy during each window, after its boundary events.
    pub occupancy: Vec<Vec<BitExpr>>,
    pub final_occupancy: Vec<BitExpr>,
    pub reads: Vec<ReadRecord>,
    pub violations: Vec<Violation>,
}

fn apply_boundary(occ: &mut [BitExpr], event: &PulseEvent, window: usize, replay: &mut Replay) {
    let q = event.qubit;
    match event.kind {
        EventKind::Inject { slot } => {
            if !occ[q].is_zero() {
                replay.violations.push(Violation {
                    window,
                    qubit: q,
                    kind: ViolationKind::InjectIntoOccupied,
                    message: format!("inject of d{slot} into qubit {q} holding {}", occ[q]),
                });
            }
            occ[q] = BitExpr::slot(slot);
        }
        EventKind::ReadReset { slot } => {
            replay.reads.push(ReadRecord {
                window,
                qubit: q,
                slot,
                value: occ[q].clone(),
            });
            occ[q] = BitExpr::zero();
        }
        _ => {}
    }
}

/// Plays the schedule forward over basis occupancy.
pub fn replay(schedule: &PulseSchedule, initial: &[BitExpr]) -> Replay {
    let n = schedule.n_qubits;
    let mut r = Replay {
        occupancy: Vec::with_capacity(schedule.windows.len()),
        final_occupancy: Vec::new(),
        reads: Vec::new(),
        violations: Vec::new(),
    };
    let mut occ: Vec<BitExpr> = (0..n).map(|q| initial.get(q).cloned().unwrap_or_default()).collect();
    let flag = |r: &mut Replay, window, qubit, kind, message: String| {
        r.violations.push(Violation {
            window,
            qubit,
            kind,
            message,
        })
    };
    for (k, w) in schedule.windows.iter().enumerate() {
        for e in w.boundary_events() {
            if e.qubit >= n {
                flag(&mut r, k, e.qubit, ViolationKind::IllegalPulse, format!("qubit {} out of range", e.qubit));
                continue;
            }
            apply_boundary(&mut occ, e, k, &mut r);
        }
        r.occupancy.push(occ.clone());
        let targets: BTreeSet<usize> = w.pulses().map(|p| p.qubit).collect();
        let mut updates = Vec::new();
        for p in w.pulses() {
            let t = p.qubit;
            if t >= n {
                flag(&mut r, k, t, ViolationKind::IllegalPulse, format!("qubit {t} out of range"));
                continue;
            }
            if t + 1 < n && targets.contains(&(t + 1)) {
                flag(&mut r, k, t, ViolationKind::AdjacentTargets, format!("qubits {t} and {} pulsed together", t + 1));
            }
            let neighbors: Vec<usize> = [t.checked_sub(1), (t + 1 < n).then_some(t + 1)].into_iter().flatten().collect();
            let is_end = t == 0 || t + 1 == n;
            match p.kind {
                EventKind::CnotPulse { control } | EventKind::ReadoutPulse { control } => {
                    let readout = matches!(p.kind, EventKind::ReadoutPulse { .. });
                    if readout != is_end {
                        let what = if readout { "READ-OUT pulse on interior" } else { "CNOT pulse on end" };
                        flag(&mut r, k, t, ViolationKind::IllegalPulse, format!("{what} qubit {t}"));
                    }
                    if !neighbors.contains(&control) {
                        flag(&mut r, k, t, ViolationKind::IllegalPulse, format!("control {control} is not adjacent to {t}"));
                        continue;
                    }
                    for &m in neighbors.iter().filter(|&&m| m != control) {
                        if !occ[m].is_zero() {
                            flag(
                                &mut r,
                                k,
                                t,
                                ViolationKind::DirtyNeighbor,
                                format!("target {t} has neighbor {m} holding {}", occ[m]),
                            );
                        }
                    }
                    updates.push((t, occ[t].xor(&occ[control])));
                }
                EventKind::CopyPulse => {
                    if is_end {
                        flag(&mut r, k, t, ViolationKind::IllegalPulse, format!("COPY pulse on end qubit {t}"));
                        continue;
                    }
                    if occ[t] != occ[t + 1] {
                        flag(
                            &mut r,
                            k,
                            t,
                            ViolationKind::CopyPrecondition,
                            format!("COPY target {t} holds {} but its right neighbor holds {}", occ[t], occ[t + 1]),
                        );
                    }
                    updates.push((t, occ[t].xor(&occ[t - 1]).xor(&occ[t + 1])));
                }
                _ => unreachable!("boundary events filtered out"),
            }
        }
        for (t, v) in updates {
            occ[t] = v;
        }
    }
    let end = schedule.windows.len();
    for e in &schedule.trailing_events {
        if e.qubit < n {
            apply_boundary(&mut occ, e, end, &mut r);
        } else {
            flag(&mut r, end, e.qubit, ViolationKind::IllegalPulse, format!("qubit {} out of range", e.qubit));
        }
    }
    r.final_occupancy = occ;
    r
}

/// Violations of the sacrificial-qubit, COPY and inject rules.
pub fn validate_sacrificial(schedule: &PulseSchedule, initial: &[BitExpr]) -> Vec<Violation> {
    replay(schedule, initial).violations
}

/// Reads of data slots that return something other than the slot itself.
pub fn misrouted_reads(replay: &Replay) -> Vec<&ReadRecord> {
    replay
        .reads
        .iter()
        .filter(|r| r.slot.is_some_and(|s| r.value != BitExpr::slot(s)))
        .collect()
}

/// A schedule together with its line map, as written to disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDocument {
    pub schedule: PulseSchedule,
    pub lines: LineAssignment,
}

impl ScheduleDocument {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScheduleDocument = serde_json::from_str(text)?;
        doc.schedule.check_tiling()?;
        Ok(doc)
    }
}
