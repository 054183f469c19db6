//! End-to-end experiments on the full chain Hamiltonian or on the reduced
//! two-level model.
//!
//! The full model evolves the dense chain Hamiltonian window by window. The
//! reduced model applies, for each pulsed target, the 2×2 propagator picked
//! by its neighbours' basis values and leaves idle qubits alone; it is the
//! frame in which the ideal gate phases hold.

mod channels;
mod frame;
mod gate;

use std::collections::HashMap;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::chain::{build_hamiltonian_capped, qubit_bit, BiasProfile, ChainSpec, TwoLevelParams, C64, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::evolve::{
    inject_state_with, reset_qubit_with, sample_probability, PurityPolicy, QuantumState,
    ReducedQubit, SingleQubitState, Spectrum, TrajectoryRow, UnitaryOperator,
};
use crate::gates::two_level_propagator;
use crate::schedule::{EventKind, PulseEvent, PulseSchedule};

pub use channels::{
    relative_phase, run_classical_channel, run_quantum_channel, BitTransfer, ClassicalReport, StateTransfer,
    TransferReport,
};
pub use frame::{compute_frame_correction, FrameCorrection};
pub use gate::{
    copy_truth_table, loglog_slope, run_gate_experiment, sweep_eps_high, CopyRow, GateReport, SweepRow, TruthRow,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Dense chain Hamiltonian with idle qubits at their hold bias.
    #[default]
    Full,
    /// Per-target two-level propagators only.
    Reduced,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Density matrices for full-model runs on up to six qubits, state vectors otherwise.
    #[default]
    Auto,
    Pure,
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub model: Model,
    pub backend: Backend,
    pub purity: PurityPolicy,
    pub record_trajectory: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            model: Model::Full,
            backend: Backend::Auto,
            purity: PurityPolicy {
                strict: false,
                keep_pure: true,
                ..PurityPolicy::default()
            },
            record_trajectory: false,
        }
    }
}

impl RunOptions {
    pub fn reduced() -> Self {
        RunOptions {
            model: Model::Reduced,
            ..Self::default()
        }
    }

    pub fn full() -> Self {
        Self::default()
    }

    fn uses_density(&self, n_qubits: usize) -> bool {
        match self.backend {
            Backend::Density => true,
            Backend::Pure => false,
            Backend::Auto => self.model == Model::Full && n_qubits <= 6,
        }
    }
}

/// One read/reset as it happened during a run.
#[derive(Clone, Debug)]
pub(crate) struct ReadOutcome {
    pub window: usize,
    pub slot: Option<usize>,
    pub measured: ReducedQubit,
    pub entangled_warning: bool,
}

pub(crate) struct RunTrace {
    pub state: QuantumState,
    pub reads: Vec<ReadOutcome>,
    pub trajectory: Vec<TrajectoryRow>,
}

/// Window-by-window evolution with a propagator cache keyed on the bias profile.
pub(crate) struct Executor<'a> {
    spec: &'a ChainSpec,
    schedule: &'a PulseSchedule,
    options: RunOptions,
    cache: HashMap<Vec<u64>, UnitaryOperator>,
}

impl<'a> Executor<'a> {
    pub fn new(spec: &'a ChainSpec, schedule: &'a PulseSchedule, options: RunOptions) -> Result<Self> {
        spec.validate()?;
        if schedule.n_qubits != spec.n_qubits {
            return Err(Error::ScheduleMismatch(format!(
                "schedule is for {} qubits, chain has {}",
                schedule.n_qubits, spec.n_qubits
            )));
        }
        schedule.check_tiling()?;
        Ok(Executor {
            spec,
            schedule,
            options,
            cache: HashMap::new(),
        })
    }

    fn evolve_full(&mut self, state: QuantumState, biases: &[f64], duration_ns: f64) -> Result<QuantumState> {
        let key: Vec<u64> = biases.iter().chain([&duration_ns]).map(|b| b.to_bits()).collect();
        if !self.cache.contains_key(&key) {
            let h = build_hamiltonian_capped(self.spec, &BiasProfile::new(biases.to_vec()), DEFAULT_QUBIT_CAP)?;
            self.cache.insert(key.clone(), Spectrum::new(&h).propagator(duration_ns)?);
        }
        state.apply_unitary(&self.cache[&key])
    }

    fn evolve_reduced(&self, mut state: QuantumState, biases: &[f64], pulses: &[PulseEvent], duration_ns: f64) -> Result<QuantumState> {
        let n = self.spec.n_qubits;
        for p in pulses {
            let t = p.qubit;
            self.spec.check_qubit(t)?;
            if pulses.iter().any(|o| o.qubit + 1 == t || t + 1 == o.qubit) {
                return Err(Error::ScheduleMismatch(format!("adjacent targets around qubit {t} in one window")));
            }
            let neighbors: Vec<usize> = self.spec.neighbors(t).collect();
            // one block per neighbour configuration
            let mut blocks = Vec::with_capacity(1 << neighbors.len());
            for config in 0..(1usize << neighbors.len()) {
                let sigma = biases[t]
                    + (0..neighbors.len())
                        .map(|k| if (config >> k) & 1 == 0 { self.spec.xi_mhz } else { -self.spec.xi_mhz })
                        .sum::<f64>();
                let params = TwoLevelParams::new(self.spec.delta_mhz, sigma)?;
                blocks.push(two_level_propagator(&params, duration_ns));
            }
            let pick = |i0: usize| -> Matrix2<C64> {
                let config = neighbors
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (k, &m)| acc | (qubit_bit(i0, n, m) << k));
                blocks[config]
            };
            state = state.apply_local_blocks(t, pick)?;
        }
        Ok(state)
    }

    fn boundary(
        &self,
        state: QuantumState,
        event: &PulseEvent,
        window: usize,
        inputs: &dyn Fn(usize) -> Result<SingleQubitState>,
        reads: &mut Vec<ReadOutcome>,
    ) -> Result<QuantumState> {
        match event.kind {
            EventKind::Inject { slot } => inject_state_with(state, event.qubit, &inputs(slot)?, &self.options.purity),
            EventKind::ReadReset { slot } => {
                let out = reset_qubit_with(state, event.qubit, &self.options.purity)?;
                reads.push(ReadOutcome {
                    window,
                    slot,
                    measured: out.measured,
                    entangled_warning: out.entangled_warning,
                });
                Ok(out.state)
            }
            _ => Ok(state),
        }
    }

    /// Runs the whole schedule from `|0…0⟩`, applying `frame` after each window.
    pub fn run(
        &mut self,
        inputs: &dyn Fn(usize) -> Result<SingleQubitState>,
        frame: Option<&FrameCorrection>,
    ) -> Result<RunTrace> {
        let n = self.spec.n_qubits;
        let mut state = QuantumState::zeros(n);
        if self.options.uses_density(n) {
            state = state.into_mixed();
        }
        let mut reads = Vec::new();
        let mut trajectory = Vec::new();
        let schedule = self.schedule;
        for (k, w) in schedule.windows.iter().enumerate() {
            for e in w.boundary_events() {
                state = self.boundary(state, e, k, inputs, &mut reads)?;
            }
            state = match self.options.model {
                Model::Full => self.evolve_full(state, &w.biases_mhz, w.duration_ns)?,
                Model::Reduced => {
                    let pulses: Vec<PulseEvent> = w.pulses().copied().collect();
                    self.evolve_reduced(state, &w.biases_mhz, &pulses, w.duration_ns)?
                }
            };
            if let Some(f) = frame {
                state = state.apply_diagonal(&f.diagonal(k, n)?)?;
            }
            if self.options.record_trajectory {
                trajectory.push(TrajectoryRow {
                    time_ns: w.start_ns + w.duration_ns,
                    p_one: (0..n).map(|q| sample_probability(&state, q)).collect::<Result<_>>()?,
                });
            }
        }
        let end = schedule.windows.len();
        for e in &schedule.trailing_events {
            state = self.boundary(state, e, end, inputs, &mut reads)?;
        }
        Ok(RunTrace {
            state,
            reads,
            trajectory,
        })
    }
}
