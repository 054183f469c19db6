use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::{compute_frame_correction, Executor, Model, ReadOutcome, RunOptions};
use crate::chain::{Basis, ChainSpec, C64};
use crate::error::{Error, Result};
use crate::evolve::{SingleQubitState, TrajectoryRow};
use crate::schedule::{EventKind, PulseSchedule};
use crate::units::wrap_phase;

/// `arg ρ₀₁ - arg(αβ̄)`, the phase of the `|0⟩` branch relative to the `|1⟩`
/// branch, or `None` when either branch is (nearly) empty.
pub fn relative_phase(rho: &Matrix2<C64>, expected: &SingleQubitState) -> Option<f64> {
    let reference = expected.alpha * expected.beta.conj();
    if reference.norm() < 1e-6 || rho[(0, 1)].norm() < 1e-12 {
        return None;
    }
    Some(wrap_phase(rho[(0, 1)].arg() - reference.arg()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateTransfer {
    pub slot: usize,
    pub input: SingleQubitState,
    pub fidelity_raw: f64,
    pub fidelity_corrected: f64,
    pub relative_phase_raw: Option<f64>,
    pub relative_phase_corrected: Option<f64>,
    /// Window at whose start OUT was read; the window count for a trailing read.
    pub arrival_window: usize,
    pub arrival_step: usize,
    pub purity: f64,
    pub entangled_at_readout: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub model: Model,
    pub n_qubits: usize,
    pub eps_high_mhz: f64,
    pub states: Vec<StateTransfer>,
    pub makespan_ns: f64,
    pub pulse_count: usize,
    pub final_trace: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trajectory: Vec<TrajectoryRow>,
}

impl TransferReport {
    pub fn worst_fidelity_corrected(&self) -> f64 {
        self.states.iter().map(|s| s.fidelity_corrected).fold(1.0, f64::min)
    }

    pub fn worst_fidelity_raw(&self) -> f64 {
        self.states.iter().map(|s| s.fidelity_raw).fold(1.0, f64::min)
    }
}

fn slot_reads(reads: &[ReadOutcome]) -> Vec<&ReadOutcome> {
    let mut out: Vec<_> = reads.iter().filter(|r| r.slot.is_some()).collect();
    out.sort_by_key(|r| r.slot);
    out
}

fn injected_slots(schedule: &PulseSchedule) -> usize {
    schedule
        .windows
        .iter()
        .flat_map(|w| w.events.iter())
        .chain(&schedule.trailing_events)
        .filter_map(|e| match e.kind {
            EventKind::Inject { slot } => Some(slot + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Sends `data_states` down a swap-channel schedule and compares what
/// arrives at OUT with what went in. Full-model runs are done twice, with
/// and without the idle-qubit frame correction.
pub fn run_quantum_channel(
    spec: &ChainSpec,
    schedule: &PulseSchedule,
    data_states: &[SingleQubitState],
    options: &RunOptions,
) -> Result<TransferReport> {
    let needed = injected_slots(schedule);
    if data_states.len() < needed {
        return Err(Error::ScheduleMismatch(format!(
            "schedule injects {needed} states, {} given",
            data_states.len()
        )));
    }
    let inputs = |slot: usize| Ok(data_states[slot]);
    let raw = Executor::new(spec, schedule, *options)?.run(&inputs, None)?;
    let corrected = match options.model {
        Model::Full => {
            let frame = compute_frame_correction(schedule, spec)?;
            Some(Executor::new(spec, schedule, *options)?.run(&inputs, Some(&frame))?)
        }
        Model::Reduced => None,
    };
    let raw_reads = slot_reads(&raw.reads);
    let corrected_reads = corrected.as_ref().map(|c| slot_reads(&c.reads));
    let mut states = Vec::with_capacity(raw_reads.len());
    for (k, r) in raw_reads.iter().enumerate() {
        let slot = r.slot.expect("filtered");
        let input = data_states[slot];
        let c = corrected_reads.as_ref().map_or(*r, |v| v[k]);
        states.push(StateTransfer {
            slot,
            input,
            fidelity_raw: input.fidelity_with(&r.measured.rho),
            fidelity_corrected: input.fidelity_with(&c.measured.rho),
            relative_phase_raw: relative_phase(&r.measured.rho, &input),
            relative_phase_corrected: relative_phase(&c.measured.rho, &input),
            arrival_window: r.window,
            arrival_step: r.window / schedule.windows_per_step.max(1),
            purity: c.measured.purity,
            entangled_at_readout: c.entangled_warning,
        });
    }
    let final_state = corrected.as_ref().map_or(&raw.state, |c| &c.state);
    Ok(TransferReport {
        model: options.model,
        n_qubits: spec.n_qubits,
        eps_high_mhz: spec.eps_high_mhz,
        states,
        makespan_ns: schedule.makespan_ns(),
        pulse_count: schedule.pulse_count(),
        final_trace: final_state.trace(),
        trajectory: corrected.map_or(raw.trajectory, |c| c.trajectory),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitTransfer {
    pub slot: usize,
    pub bit_in: u8,
    pub bit_out: u8,
    /// Probability of reading the correct bit.
    pub fidelity: f64,
    /// Clock sequences from the start of the run to the read.
    pub arrival_sequence: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub model: Model,
    pub n_qubits: usize,
    pub bits_in: Vec<u8>,
    pub bits_out: Vec<u8>,
    pub transfers: Vec<BitTransfer>,
    /// Sequences until the first bit can be read at OUT.
    pub latency_sequences: usize,
    pub makespan_ns: f64,
    pub pulse_count: usize,
    pub final_trace: f64,
}

impl ClassicalReport {
    pub fn echoed(&self) -> bool {
        self.bits_in == self.bits_out
    }

    pub fn worst_fidelity(&self) -> f64 {
        self.transfers.iter().map(|t| t.fidelity).fold(1.0, f64::min)
    }
}

/// Clocks `bits` through a COPY-channel schedule.
pub fn run_classical_channel(
    spec: &ChainSpec,
    schedule: &PulseSchedule,
    bits: &[u8],
    options: &RunOptions,
) -> Result<ClassicalReport> {
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::NonBasisInput(format!("bit value {b}")));
    }
    let needed = injected_slots(schedule);
    if bits.len() < needed {
        return Err(Error::ScheduleMismatch(format!("schedule injects {needed} bits, {} given", bits.len())));
    }
    let inputs = |slot: usize| Ok(SingleQubitState::basis(Basis::from_bit(bits[slot] as usize)));
    let trace = Executor::new(spec, schedule, *options)?.run(&inputs, None)?;
    let per_seq = schedule.windows_per_step.max(1);
    let transfers: Vec<BitTransfer> = slot_reads(&trace.reads)
        .into_iter()
        .map(|r| {
            let slot = r.slot.expect("filtered");
            let p1 = r.measured.p_one();
            BitTransfer {
                slot,
                bit_in: bits[slot],
                bit_out: u8::from(p1 > 0.5),
                fidelity: if bits[slot] == 1 { p1 } else { 1.0 - p1 },
                arrival_sequence: r.window / per_seq,
            }
        })
        .collect();
    Ok(ClassicalReport {
        model: options.model,
        n_qubits: spec.n_qubits,
        bits_in: bits[..transfers.len().min(bits.len())].to_vec(),
        bits_out: transfers.iter().map(|t| t.bit_out).collect(),
        latency_sequences: transfers.first().map_or(0, |t| t.arrival_sequence),
        transfers,
        makespan_ns: schedule.makespan_ns(),
        pulse_count: schedule.pulse_count(),
        final_trace: trace.state.trace(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{classical_channel_schedule, quantum_channel_schedule, swap_channel_schedule};
    use crate::solver::{commensurate_eps_high, solve_parameters, GateDesign};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn design() -> GateDesign {
        solve_parameters(10.0, 1, 0).unwrap()
    }

    fn spec(n: usize, factor: f64) -> ChainSpec {
        let d = design();
        let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, factor);
        ChainSpec::new(n, d.delta_mhz, d.xi_mhz).unwrap().with_eps_high(eps).unwrap()
    }

    #[test]
    fn reduced_channel_is_perfect_on_odd_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in (5..=13).step_by(2) {
            let states: Vec<_> = (0..3).map(|_| SingleQubitState::random(&mut rng)).collect();
            let (s, _) = quantum_channel_schedule(&spec(n, 100.0), 3, 10.0).unwrap();
            let r = run_quantum_channel(&spec(n, 100.0), &s, &states, &RunOptions::reduced()).unwrap();
            assert_eq!(r.states.len(), 3);
            for t in &r.states {
                assert!((t.fidelity_corrected - 1.0).abs() < 1e-9, "n={n} {t:?}");
                assert!(t.relative_phase_corrected.unwrap().abs() < 1e-9);
            }
            let order: Vec<_> = r.states.iter().map(|t| t.slot).collect();
            assert_eq!(order, vec![0, 1, 2]);
        }
    }

    #[test]
    fn even_chain_leaves_a_pi_phase() {
        let input = SingleQubitState::from_bloch(1.0, 0.3);
        for n in [4, 6] {
            let s = swap_channel_schedule(&spec(n, 100.0), 1, 10.0).unwrap();
            let r = run_quantum_channel(&spec(n, 100.0), &s, &[input], &RunOptions::reduced()).unwrap();
            let phi = r.states[0].relative_phase_corrected.unwrap();
            assert!((phi.abs() - PI).abs() < 1e-9, "n={n} phi={phi}");
        }
    }

    #[test]
    fn basis_state_arrives_in_predicted_window_on_full_model() {
        let sp = spec(5, 1000.0);
        let (s, _) = quantum_channel_schedule(&sp, 1, 10.0).unwrap();
        let r = run_quantum_channel(&sp, &s, &[SingleQubitState::one()], &RunOptions::full()).unwrap();
        assert_eq!(r.states[0].arrival_window, 12);
        assert!(r.states[0].fidelity_corrected >= 0.999);
        assert!(r.states[0].fidelity_corrected >= r.states[0].fidelity_raw - 1e-12);
        assert!((r.final_trace - 1.0).abs() < 1e-8);
    }

    #[test]
    fn classical_channel_echoes_bits() {
        let sp = spec(6, 1000.0);
        let (s, _) = classical_channel_schedule(&sp, 3, 10.0).unwrap();
        for options in [RunOptions::reduced(), RunOptions::full()] {
            let r = run_classical_channel(&sp, &s, &[1, 0, 1], &options).unwrap();
            assert!(r.echoed(), "{r:?}");
            assert_eq!(r.latency_sequences, 3);
        }
        let sp8 = spec(8, 100.0);
        let (s8, _) = classical_channel_schedule(&sp8, 1, 10.0).unwrap();
        let r = run_classical_channel(&sp8, &s8, &[1], &RunOptions::reduced()).unwrap();
        assert_eq!(r.latency_sequences, 4);
        assert!(matches!(
            run_classical_channel(&sp, &s, &[1, 2, 0], &RunOptions::reduced()),
            Err(Error::NonBasisInput(_))
        ));
    }
}
