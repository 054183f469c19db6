use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::chain::{qubit_bit, ChainSpec, C64};
use crate::error::{Error, Result};
use crate::schedule::{replay, BitExpr, PulseSchedule};
use crate::units::MHZ_NS;

/// Local z-phases accumulated by idle qubits, per window.
///
/// An idle qubit `i` at bias `ε_i` evolves under `ε_i σz_i` plus the coupling
/// to idle neighbours whose value is known. Undoing this is the diagonal
/// `exp(+i Σ φ_i σz_i)` with `φ_i = 2π h_i t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameCorrection {
    /// `phases_rad[window][qubit]`; zero for pulsed qubits.
    pub phases_rad: Vec<Vec<f64>>,
}

impl FrameCorrection {
    pub fn diagonal(&self, window: usize, n_qubits: usize) -> Result<Vec<C64>> {
        let phases = self
            .phases_rad
            .get(window)
            .ok_or_else(|| Error::ScheduleMismatch(format!("no frame phases for window {window}")))?;
        if phases.len() != n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: phases.len(),
            });
        }
        Ok((0..1usize << n_qubits)
            .map(|i| {
                let total: f64 = (0..n_qubits)
                    .map(|q| if qubit_bit(i, n_qubits, q) == 0 { phases[q] } else { -phases[q] })
                    .sum();
                C64::from_polar(1.0, total)
            })
            .collect())
    }

    /// Phase accumulated by each qubit over the whole schedule.
    pub fn total_per_qubit(&self) -> Vec<f64> {
        let n = self.phases_rad.first().map_or(0, Vec::len);
        (0..n).map(|q| self.phases_rad.iter().map(|w| w[q]).sum()).collect()
    }
}

fn sign(expr: &BitExpr) -> f64 {
    if expr.constant {
        -1.0
    } else {
        1.0
    }
}

/// Frame phases of every idle qubit in every window, from the symbolic
/// occupancy replay. Couplings between two idle qubits of known value only
/// give a global phase and are dropped; an idle data qubit next to an idle
/// qubit of known value picks up `±ξ`.
pub fn compute_frame_correction(schedule: &PulseSchedule, spec: &ChainSpec) -> Result<FrameCorrection> {
    let n = spec.n_qubits;
    if schedule.n_qubits != n {
        return Err(Error::ScheduleMismatch(format!(
            "schedule is for {} qubits, chain has {n}",
            schedule.n_qubits
        )));
    }
    let r = replay(schedule, &vec![BitExpr::zero(); n]);
    let mut phases_rad = Vec::with_capacity(schedule.windows.len());
    for (k, (w, occ)) in schedule.windows.iter().zip(&r.occupancy).enumerate() {
        let mut idle = vec![true; n];
        for p in w.pulses() {
            if p.qubit < n {
                idle[p.qubit] = false;
            }
        }
        let mut h: Vec<f64> = (0..n).map(|q| if idle[q] { w.biases_mhz[q] } else { 0.0 }).collect();
        for q in 0..n.saturating_sub(1) {
            if !(idle[q] && idle[q + 1]) {
                continue;
            }
            match (occ[q].is_definite(), occ[q + 1].is_definite()) {
                (true, true) => {}
                (true, false) => h[q + 1] += spec.xi_mhz * sign(&occ[q]),
                (false, true) => h[q] += spec.xi_mhz * sign(&occ[q + 1]),
                (false, false) => return Err(Error::OccupancyIndeterminate { qubit: q, window: k }),
            }
        }
        phases_rad.push(h.iter().map(|x| TAU * x * w.duration_ns * MHZ_NS).collect());
    }
    Ok(FrameCorrection { phases_rad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{quantum_channel_schedule, EventKind, PulseEvent, Window};
    use crate::solver::{commensurate_eps_high, solve_parameters};
    use crate::units::wrap_phase;

    #[test]
    fn all_idle_schedule_accumulates_bias_phase() {
        let spec = ChainSpec::new(3, 25.0, 21.65).unwrap().with_eps_high(2500.0).unwrap();
        let s = PulseSchedule {
            n_qubits: 3,
            pulse_width_ns: 7.0,
            windows_per_step: 1,
            windows: vec![Window {
                start_ns: 0.0,
                duration_ns: 7.0,
                biases_mhz: vec![2500.0; 3],
                events: vec![],
            }],
            trailing_events: vec![],
        };
        let f = compute_frame_correction(&s, &spec).unwrap();
        let expected = TAU * 2500.0 * 7.0 * MHZ_NS;
        for p in f.total_per_qubit() {
            assert!((wrap_phase(p - expected)).abs() < 1e-12);
        }
    }

    #[test]
    fn commensurate_bias_gives_trivial_idle_phases() {
        let d = solve_parameters(10.0, 1, 0).unwrap();
        let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, 1000.0);
        let spec = ChainSpec::new(5, d.delta_mhz, d.xi_mhz).unwrap().with_eps_high(eps).unwrap();
        let (s, _) = quantum_channel_schedule(&spec, 2, d.pulse_width_ns).unwrap();
        for w in &s.windows {
            for (q, &b) in w.biases_mhz.iter().enumerate() {
                if w.pulses().all(|p| p.qubit != q) {
                    assert!(wrap_phase(TAU * b * w.duration_ns * MHZ_NS).abs() < 1e-9);
                }
            }
        }
        assert!(compute_frame_correction(&s, &spec).is_ok());
    }

    #[test]
    fn adjacent_idle_data_is_indeterminate() {
        let spec = ChainSpec::new(3, 25.0, 21.65).unwrap();
        let s = PulseSchedule {
            n_qubits: 3,
            pulse_width_ns: 10.0,
            windows_per_step: 1,
            windows: vec![Window {
                start_ns: 0.0,
                duration_ns: 10.0,
                biases_mhz: vec![spec.eps_high_mhz; 3],
                events: vec![
                    PulseEvent::new(0, EventKind::Inject { slot: 0 }),
                    PulseEvent::new(1, EventKind::Inject { slot: 1 }),
                ],
            }],
            trailing_events: vec![],
        };
        assert!(matches!(
            compute_frame_correction(&s, &spec),
            Err(Error::OccupancyIndeterminate { qubit: 0, window: 0 })
        ));
    }
}
