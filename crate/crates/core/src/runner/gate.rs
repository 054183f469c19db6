use serde::{Deserialize, Serialize};

use super::Model;
use crate::chain::{build_hamiltonian, Basis, BiasProfile, CMatrix, ChainSpec, C64};
use crate::error::{Error, Result};
use crate::evolve::propagator;
use crate::gates::{ideal_cnot, pulse_block};
use crate::solver::GateDesign;

/// One basis input of the extracted gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub control: u8,
    pub target_in: u8,
    pub target_expected: u8,
    /// Probability that the chain ends in the expected basis state.
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub model: Model,
    pub eps_high_mhz: f64,
    /// `|control, target⟩` block of the pulse propagator with the sacrificial
    /// qubit in `|0⟩`, as `[re, im]` pairs.
    pub effective_gate: [[[f64; 2]; 4]; 4],
    /// Frobenius distance to the ideal CNOT after removing one free phase per
    /// control branch.
    pub distance: f64,
    /// Largest entry-wise deviation from the ideal CNOT with no phases removed.
    pub max_entry_error: f64,
    pub truth_table: Vec<TruthRow>,
    pub worst_infidelity: f64,
}

fn effective_block(spec: &ChainSpec, design: &GateDesign, model: Model) -> Result<CMatrix> {
    // chain (A, B, C): A sacrificial, B target, C control; index = 4a + 2b + c
    let gate_index = |c: usize, t: usize| 2 * c + t;
    let chain_index = |c: usize, t: usize| 2 * t + c;
    let mut g = CMatrix::zeros(4, 4);
    match model {
        Model::Full => {
            let profile = BiasProfile::new(vec![spec.eps_high_mhz, 0.0, spec.eps_high_mhz]);
            let u = propagator(&build_hamiltonian(spec, &profile)?, design.pulse_width_ns)?;
            for c in 0..2 {
                for t in 0..2 {
                    for c2 in 0..2 {
                        for t2 in 0..2 {
                            g[(gate_index(c2, t2), gate_index(c, t))] = u.matrix()[(chain_index(c2, t2), chain_index(c, t))];
                        }
                    }
                }
            }
        }
        Model::Reduced => {
            let local = GateDesign {
                delta_mhz: spec.delta_mhz,
                xi_mhz: spec.xi_mhz,
                ..*design
            };
            for c in 0..2 {
                let b = pulse_block(&local, 0.0, &[Basis::Zero, Basis::from_bit(c)])?;
                for x in 0..2 {
                    for y in 0..2 {
                        g[(gate_index(c, x), gate_index(c, y))] = b[(x, y)];
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Pulses the middle qubit of a 3-qubit chain to zero bias for one step
/// and extracts the gate on `|control, target⟩`, with the left qubit as the
/// sacrificial `|0⟩` and the right qubit as control.
pub fn run_gate_experiment(spec: &ChainSpec, design: &GateDesign, model: Model) -> Result<GateReport> {
    if spec.n_qubits != 3 {
        return Err(Error::InvalidLayout(format!("gate experiment needs 3 qubits, got {}", spec.n_qubits)));
    }
    if !(design.pulse_width_ns > 0.0) {
        return Err(Error::Infeasible(format!("pulse width {} ns", design.pulse_width_ns)));
    }
    let g = effective_block(spec, design, model)?;
    let ideal = ideal_cnot();
    let ideal = ideal.matrix();
    let mut distance_sq = 0.0;
    for c in 0..2 {
        let (mut ga, mut ia, mut overlap) = (0.0, 0.0, C64::new(0.0, 0.0));
        for x in 0..2 {
            for y in 0..2 {
                let (i, j) = (2 * c + x, 2 * c + y);
                ga += g[(i, j)].norm_sqr();
                ia += ideal[(i, j)].norm_sqr();
                overlap += ideal[(i, j)].conj() * g[(i, j)];
            }
        }
        distance_sq += (ga + ia - 2.0 * overlap.norm()).max(0.0);
    }
    // weight moved between control branches counts in full
    for c in 0..2 {
        for c2 in (0..2).filter(|&c2| c2 != c) {
            for x in 0..2 {
                for y in 0..2 {
                    distance_sq += g[(2 * c2 + x, 2 * c + y)].norm_sqr();
                }
            }
        }
    }
    let max_entry_error = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| (g[(i, j)] - ideal[(i, j)]).norm())
        .fold(0.0, f64::max);
    let mut truth_table = Vec::with_capacity(4);
    for c in 0..2 {
        for t in 0..2 {
            let expected = t ^ c;
            truth_table.push(TruthRow {
                control: c as u8,
                target_in: t as u8,
                target_expected: expected as u8,
                fidelity: g[(2 * c + expected, 2 * c + t)].norm_sqr().clamp(0.0, 1.0),
            });
        }
    }
    let worst_infidelity = truth_table.iter().map(|r| 1.0 - r.fidelity).fold(0.0, f64::max);
    let mut effective_gate = [[[0.0; 2]; 4]; 4];
    for (i, row) in effective_gate.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = [g[(i, j)].re, g[(i, j)].im];
        }
    }
    Ok(GateReport {
        model,
        eps_high_mhz: spec.eps_high_mhz,
        effective_gate,
        distance: distance_sq.sqrt(),
        max_entry_error,
        truth_table,
        worst_infidelity,
    })
}

/// One row of the COPY truth table on `(IN, A, B)` with `A = B` initially.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CopyRow {
    pub input: u8,
    pub a_before: u8,
    pub b: u8,
    pub a_after: u8,
    pub flipped: bool,
    /// Probability of the expected output basis state.
    pub fidelity: f64,
}

/// The four COPY rows: `A` flips iff `IN` and `B` differ.
pub fn copy_truth_table(spec: &ChainSpec, design: &GateDesign, model: Model) -> Result<Vec<CopyRow>> {
    if spec.n_qubits != 3 {
        return Err(Error::InvalidLayout(format!("COPY table needs 3 qubits, got {}", spec.n_qubits)));
    }
    if !(design.pulse_width_ns > 0.0) {
        return Err(Error::Infeasible(format!("pulse width {} ns", design.pulse_width_ns)));
    }
    let amplitude = |l: usize, a: usize, b: usize, a2: usize| -> Result<C64> {
        match model {
            Model::Full => {
                let profile = BiasProfile::new(vec![spec.eps_high_mhz, 0.0, spec.eps_high_mhz]);
                let u = propagator(&build_hamiltonian(spec, &profile)?, design.pulse_width_ns)?;
                Ok(u.matrix()[(4 * l + 2 * a2 + b, 4 * l + 2 * a + b)])
            }
            Model::Reduced => {
                let local = GateDesign {
                    delta_mhz: spec.delta_mhz,
                    xi_mhz: spec.xi_mhz,
                    ..*design
                };
                Ok(pulse_block(&local, 0.0, &[Basis::from_bit(l), Basis::from_bit(b)])?[(a2, a)])
            }
        }
    };
    let mut rows = Vec::with_capacity(4);
    for (l, a) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let b = a;
        let a_after = a ^ l ^ b;
        rows.push(CopyRow {
            input: l as u8,
            a_before: a as u8,
            b: b as u8,
            a_after: a_after as u8,
            flipped: a_after != a,
            fidelity: amplitude(l, a, b, a_after)?.norm_sqr().clamp(0.0, 1.0),
        });
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps_high_mhz: f64,
    pub eps_over_delta: f64,
    pub worst_infidelity: f64,
    pub distance: f64,
}

/// Worst-case full-model CNOT infidelity at each idle bias in `grid`.
pub fn sweep_eps_high(spec: &ChainSpec, design: &GateDesign, grid_mhz: &[f64]) -> Result<Vec<SweepRow>> {
    grid_mhz
        .iter()
        .map(|&eps| {
            let r = run_gate_experiment(&spec.clone().with_eps_high(eps)?, design, Model::Full)?;
            Ok(SweepRow {
                eps_high_mhz: eps,
                eps_over_delta: eps / spec.delta_mhz,
                worst_infidelity: r.worst_infidelity,
                distance: r.distance,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_parameters;

    fn setup() -> (ChainSpec, GateDesign) {
        let d = solve_parameters(10.0, 1, 0).unwrap();
        (ChainSpec::new(3, d.delta_mhz, d.xi_mhz).unwrap(), d)
    }

    #[test]
    fn reduced_gate_is_exact() {
        let (spec, d) = setup();
        let r = run_gate_experiment(&spec, &d, Model::Reduced).unwrap();
        assert!(r.distance < 1e-9 && r.max_entry_error < 1e-9);
        assert!(r.worst_infidelity < 1e-12);
    }

    #[test]
    fn full_gate_approaches_ideal() {
        let (spec, d) = setup();
        let lo = run_gate_experiment(&spec.clone().with_eps_high(100.0 * 25.0).unwrap(), &d, Model::Full).unwrap();
        let hi = run_gate_experiment(&spec.clone().with_eps_high(1000.0 * 25.0).unwrap(), &d, Model::Full).unwrap();
        assert!(hi.worst_infidelity < lo.worst_infidelity);
        assert!(hi.distance < lo.distance);
        assert!(hi.truth_table.iter().all(|r| r.fidelity > 0.999));
    }

    #[test]
    fn scaling_units_leaves_report_unchanged() {
        let (spec, d) = setup();
        let spec = spec.with_eps_high(2500.0).unwrap();
        let scaled_spec = ChainSpec::new(3, 250.0, d.xi_mhz * 10.0).unwrap().with_eps_high(25000.0).unwrap();
        let scaled = GateDesign {
            pulse_width_ns: 1.0,
            delta_mhz: 250.0,
            xi_mhz: d.xi_mhz * 10.0,
            ..d
        };
        let a = run_gate_experiment(&spec, &d, Model::Full).unwrap();
        let b = run_gate_experiment(&scaled_spec, &scaled, Model::Full).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..2 {
                    assert!((a.effective_gate[i][j][k] - b.effective_gate[i][j][k]).abs() < 1e-9);
                }
            }
        }
        assert!((a.distance - b.distance).abs() < 1e-9);
    }

    #[test]
    fn copy_rows() {
        let (spec, d) = setup();
        let rows = copy_truth_table(&spec, &d, Model::Reduced).unwrap();
        let flips: Vec<bool> = rows.iter().map(|r| r.flipped).collect();
        assert_eq!(flips, vec![false, true, true, false]);
        assert!(rows.iter().all(|r| (r.fidelity - 1.0).abs() < 1e-12));
        let full = copy_truth_table(&spec.with_eps_high(25000.0).unwrap(), &d, Model::Full).unwrap();
        assert!(full.iter().all(|r| r.fidelity >= 0.999));
    }

    #[test]
    fn sweep_shapes() {
        let (spec, d) = setup();
        let one = sweep_eps_high(&spec, &d, &[2500.0]).unwrap();
        assert_eq!(one.len(), 1);
        let degenerate = sweep_eps_high(&spec, &d, &[25.0]).unwrap();
        assert!(degenerate[0].worst_infidelity > 0.01);
        assert!((loglog_slope(&[1.0, 10.0], &[1.0, 0.01]).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&[1.0], &[1.0]), None);
    }
}
