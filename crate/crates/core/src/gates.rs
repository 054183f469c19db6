//! Ideal gates of the reduced model and branch-phase bookkeeping.
//!
//! Two-qubit gates use `|control, target⟩` ordering with the first listed
//! qubit as the most significant bit.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::chain::{qubit_bit, Basis, CMatrix, TwoLevelParams, C64};
use crate::error::{Error, Result};
use crate::evolve::{unitarity_error, CVector, SingleQubitState};
use crate::solver::GateDesign;
use crate::units::{wrap_phase, MHZ_NS};

const GATE_UNITARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateLabel {
    Cnot,
    Swap,
    Copy,
    Composed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasedGate {
    matrix: CMatrix,
    label: GateLabel,
}

impl PhasedGate {
    pub fn new(matrix: CMatrix, label: GateLabel) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || !(dim == 4 || dim == 8) {
            return Err(Error::DimensionMismatch { expected: 4, found: dim });
        }
        let err = unitarity_error(&matrix);
        if err > GATE_UNITARY_TOL * 1e3 {
            return Err(Error::InvalidState(format!("gate is not unitary (error {err:e})")));
        }
        Ok(PhasedGate { matrix, label })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn label(&self) -> GateLabel {
        self.label
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dimension().trailing_zeros() as usize
    }

    /// `other · self`: apply `self` first.
    pub fn then(&self, other: &PhasedGate) -> PhasedGate {
        PhasedGate {
            matrix: &other.matrix * &self.matrix,
            label: GateLabel::Composed,
        }
    }

    /// Image of a basis input as `(output index, unit phase)`, or `None` if the
    /// column is not a single basis state to `1e-9`.
    pub fn basis_image(&self, input: usize) -> Option<(usize, C64)> {
        let col = self.matrix.column(input);
        let (idx, z) = col
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(i, z)| (i, *z))?;
        ((z.norm() - 1.0).abs() < 1e-9).then_some((idx, z))
    }

    /// True if every column is a single basis state with unit-modulus weight.
    pub fn is_basis_permuting(&self) -> bool {
        let mut seen = vec![false; self.dimension()];
        for j in 0..self.dimension() {
            match self.basis_image(j) {
                Some((i, _)) if !seen[i] => seen[i] = true,
                _ => return false,
            }
        }
        true
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Gate built from a per-control-branch 2×2 block acting on the target.
fn controlled_blocks(on_zero: &Matrix2<C64>, on_one: &Matrix2<C64>) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for (ctrl, b) in [on_zero, on_one].into_iter().enumerate() {
        for x in 0..2 {
            for y in 0..2 {
                m[(2 * ctrl + x, 2 * ctrl + y)] = b[(x, y)];
            }
        }
    }
    m
}

/// CNOT modulo phase: control `|0⟩` picks up `e^{iπ}`, control `|1⟩` flips
/// the target and picks up `e^{-iπ/2}`.
pub fn ideal_cnot() -> PhasedGate {
    let minus_one = Matrix2::new(c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0));
    let minus_i_x = Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0));
    PhasedGate {
        matrix: controlled_blocks(&minus_one, &minus_i_x),
        label: GateLabel::Cnot,
    }
}

/// The same gate with control and target exchanged (target on the first qubit).
fn reversed(gate: &PhasedGate) -> CMatrix {
    let swap_bits = |i: usize| ((i & 1) << 1) | (i >> 1);
    CMatrix::from_fn(4, 4, |i, j| gate.matrix[(swap_bits(i), swap_bits(j))])
}

/// Three CNOT pulses with targets (first, second, first), built from `cnot`.
pub fn swap_from(cnot: &PhasedGate) -> PhasedGate {
    let on_first = reversed(cnot);
    let on_second = cnot.matrix.clone();
    PhasedGate {
        matrix: &on_first * &on_second * &on_first,
        label: GateLabel::Swap,
    }
}

pub fn ideal_swap() -> PhasedGate {
    swap_from(&ideal_cnot())
}

/// `exp(-i 2π (Δσx + Σσz) t)` in closed form.
pub fn two_level_propagator(params: &TwoLevelParams, duration_ns: f64) -> Matrix2<C64> {
    let (d, s) = (params.delta_mhz, params.effective_bias_mhz);
    let omega = (d * d + s * s).sqrt();
    let theta = std::f64::consts::TAU * omega * duration_ns * MHZ_NS;
    let (cos, sin) = (theta.cos(), theta.sin() / omega);
    Matrix2::new(
        c(cos, -sin * s),
        c(0.0, -sin * d),
        c(0.0, -sin * d),
        c(cos, sin * s),
    )
}

/// Target propagator for one pulse of `design` at target bias `bias_mhz`
/// with the given neighbor basis values.
pub fn pulse_block(design: &GateDesign, bias_mhz: f64, neighbors: &[Basis]) -> Result<Matrix2<C64>> {
    let sigma = bias_mhz + neighbors.iter().map(|b| design.xi_mhz * b.sign()).sum::<f64>();
    Ok(two_level_propagator(
        &TwoLevelParams::new(design.delta_mhz, sigma)?,
        design.pulse_width_ns,
    ))
}

/// The CNOT realised by one zero-bias pulse on a target whose other
/// neighbor is a sacrificial `|0⟩`.
pub fn reduced_cnot(design: &GateDesign) -> Result<PhasedGate> {
    let b0 = pulse_block(design, 0.0, &[Basis::Zero, Basis::Zero])?;
    let b1 = pulse_block(design, 0.0, &[Basis::Zero, Basis::One])?;
    PhasedGate::new(controlled_blocks(&b0, &b1), GateLabel::Cnot)
}

/// The READ-OUT pulse on an end qubit: bias `ξ`, one neighbor.
pub fn reduced_readout(design: &GateDesign) -> Result<PhasedGate> {
    let b0 = pulse_block(design, design.xi_mhz, &[Basis::Zero])?;
    let b1 = pulse_block(design, design.xi_mhz, &[Basis::One])?;
    PhasedGate::new(controlled_blocks(&b0, &b1), GateLabel::Cnot)
}

/// COPY pulse on the middle of `|left, target, right⟩`, phases from the
/// reduced propagator.
pub fn ideal_copy(design: &GateDesign) -> Result<PhasedGate> {
    let mut m = CMatrix::zeros(8, 8);
    for l in 0..2 {
        for r in 0..2 {
            let b = pulse_block(design, 0.0, &[Basis::from_bit(l), Basis::from_bit(r)])?;
            for x in 0..2 {
                for y in 0..2 {
                    m[(4 * l + 2 * x + r, 4 * l + 2 * y + r)] = b[(x, y)];
                }
            }
        }
    }
    PhasedGate::new(m, GateLabel::Copy)
}

/// One COPY truth-table row: the target's basis value after a COPY pulse and the
/// branch phase it picks up.
pub fn copy_transition(
    design: &GateDesign,
    left: &SingleQubitState,
    target: &SingleQubitState,
    right: &SingleQubitState,
) -> Result<(Basis, C64)> {
    let basis = |s: &SingleQubitState, name: &str| {
        s.as_basis()
            .ok_or_else(|| Error::NonBasisInput(format!("{name} is a superposition")))
    };
    let (l, t, r) = (basis(left, "left neighbor")?, basis(target, "target")?, basis(right, "right neighbor")?);
    let gate = ideal_copy(design)?;
    let input = 4 * l.bit() + 2 * t.bit() + r.bit();
    let (out, phase) = gate
        .basis_image(input)
        .ok_or_else(|| Error::Infeasible("design does not realise a basis-permuting COPY".into()))?;
    Ok((Basis::from_bit((out >> 1) & 1), phase))
}

/// A gate placed on specific qubits of an `n`-qubit register, listed most
/// significant first.
#[derive(Clone, Debug)]
pub struct GateOp {
    pub gate: PhasedGate,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: PhasedGate, qubits: Vec<usize>) -> Result<Self> {
        if qubits.len() != gate.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: gate.n_qubits(),
                found: qubits.len(),
            });
        }
        Ok(GateOp { gate, qubits })
    }

    /// CNOT with the given control and target.
    pub fn cnot(gate: &PhasedGate, control: usize, target: usize) -> Self {
        GateOp {
            gate: gate.clone(),
            qubits: vec![control, target],
        }
    }

    pub fn apply(&self, state: &CVector, n_qubits: usize) -> Result<CVector> {
        if state.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: state.len(),
            });
        }
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        let k = self.qubits.len();
        let sub = |i: usize| {
            self.qubits
                .iter()
                .fold(0usize, |acc, &q| (acc << 1) | qubit_bit(i, n_qubits, q))
        };
        let with_sub = |i: usize, s: usize| {
            self.qubits.iter().enumerate().fold(i, |acc, (pos, &q)| {
                let mask = 1usize << (n_qubits - 1 - q);
                if (s >> (k - 1 - pos)) & 1 == 1 {
                    acc | mask
                } else {
                    acc & !mask
                }
            })
        };
        let mut out = CVector::zeros(state.len());
        for (i, amp) in state.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let s = sub(i);
            for r in 0..self.gate.dimension() {
                let g = self.gate.matrix[(r, s)];
                if g.norm_sqr() != 0.0 {
                    out[with_sub(i, r)] += g * amp;
                }
            }
        }
        Ok(out)
    }
}

/// Swaps for moving a state from qubit 0 to qubit `n - 1`, each as three
/// pulses with targets (left, right, left).
pub fn chain_transfer_ops(n_qubits: usize, cnot: &PhasedGate) -> Vec<GateOp> {
    (0..n_qubits.saturating_sub(1))
        .flat_map(|k| {
            [
                GateOp::cnot(cnot, k + 1, k),
                GateOp::cnot(cnot, k, k + 1),
                GateOp::cnot(cnot, k + 1, k),
            ]
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub input_index: usize,
    pub output_index: usize,
    /// Accumulated phase in `(-π, π]`.
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseLedger {
    pub n_qubits: usize,
    pub branches: Vec<Branch>,
    /// Weight of the output outside the tracked basis images.
    pub leakage: f64,
}

impl PhaseLedger {
    pub fn branch(&self, input_index: usize) -> Option<&Branch> {
        self.branches.iter().find(|b| b.input_index == input_index)
    }

    /// `phase(a) - phase(b)` wrapped into `(-π, π]`.
    pub fn relative_phase(&self, a: usize, b: usize) -> Option<f64> {
        Some(wrap_phase(self.branch(a)?.phase - self.branch(b)?.phase))
    }
}

/// Follows every basis branch of `input` through `ops`.
pub fn track_phases(ops: &[GateOp], input: &CVector, n_qubits: usize) -> Result<PhaseLedger> {
    let mut branches = Vec::new();
    let mut leakage = 0.0;
    for (i, amp) in input.iter().enumerate() {
        if amp.norm_sqr() < 1e-24 {
            continue;
        }
        let mut v = CVector::zeros(input.len());
        v[i] = C64::new(1.0, 0.0);
        for op in ops {
            v = op.apply(&v, n_qubits)?;
        }
        let (out, z) = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(k, z)| (k, *z))
            .expect("non-empty state");
        leakage += amp.norm_sqr() * (1.0 - z.norm_sqr()).max(0.0);
        branches.push(Branch {
            input_index: i,
            output_index: out,
            phase: wrap_phase(z.arg()),
        });
    }
    Ok(PhaseLedger {
        n_qubits,
        branches,
        leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;
    use crate::evolve::propagator;
    use crate::solver::solve_parameters;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn basis(n: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(1 << n);
        v[i] = c(1.0, 0.0);
        v
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn cnot_examples() {
        let g = ideal_cnot();
        assert!(g.is_basis_permuting());
        assert_eq!(g.basis_image(0b00).map(|x| x.0), Some(0b00));
        assert!(close(g.matrix()[(0b00, 0b00)], c(-1.0, 0.0)));
        assert!(close(g.matrix()[(0b10, 0b11)], c(0.0, -1.0)));
        assert!(close(g.matrix()[(0b11, 0b10)], c(0.0, -1.0)));
        let twice = g.then(&g);
        assert!(close(twice.matrix()[(0b10, 0b10)], c(-1.0, 0.0)));
        assert!(unitarity_error(g.matrix()) < 1e-12);
    }

    #[test]
    fn swap_matches_hand_trace() {
        let s = ideal_swap();
        assert_eq!(s.label(), GateLabel::Swap);
        // |first, second⟩: |00⟩ → -|00⟩, |10⟩ → |01⟩
        assert!(close(s.matrix()[(0b00, 0b00)], c(-1.0, 0.0)));
        assert!(close(s.matrix()[(0b01, 0b10)], c(1.0, 0.0)));
        // derived by composition
        assert!(close(s.matrix()[(0b10, 0b01)], c(1.0, 0.0)));
        assert!(close(s.matrix()[(0b11, 0b11)], c(1.0, 0.0)));
    }

    #[test]
    fn swap_is_swap_modulo_phases() {
        let s = ideal_swap();
        for (input, expected) in [(0b00, 0b00), (0b01, 0b10), (0b10, 0b01), (0b11, 0b11)] {
            let (out, z) = s.basis_image(input).unwrap();
            assert_eq!(out, expected);
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_phase_counts_along_a_chain() {
        let cnot = ideal_cnot();
        for (n, expected) in [(2, PI), (3, 0.0), (4, PI), (5, 0.0), (7, 0.0)] {
            let ops = chain_transfer_ops(n, &cnot);
            let input = (basis(n, 0) + basis(n, 1 << (n - 1))) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let ledger = track_phases(&ops, &input, n).unwrap();
            assert_eq!(ledger.branch(1 << (n - 1)).unwrap().output_index, 1);
            assert_eq!(ledger.branch(0).unwrap().output_index, 0);
            let rel = ledger.relative_phase(0, 1 << (n - 1)).unwrap();
            assert!((wrap_phase(rel - expected)).abs() < 1e-9, "n={n} rel={rel}");
            assert!(ledger.leakage < 1e-12);
        }
    }

    #[test]
    fn reduced_gates_equal_ideal_at_design_point() {
        let d = solve_parameters(10.0, 1, 0).unwrap();
        let diff = reduced_cnot(&d).unwrap().matrix() - ideal_cnot().matrix();
        assert!(diff.iter().all(|z| z.norm() < 1e-9));
        let diff = reduced_readout(&d).unwrap().matrix() - ideal_cnot().matrix();
        assert!(diff.iter().all(|z| z.norm() < 1e-9));
        // M even flips the control-|0⟩ branch sign
        let d2 = solve_parameters(10.0, 2, 0).unwrap();
        let g = reduced_cnot(&d2).unwrap();
        assert!(close(g.matrix()[(0, 0)], c(1.0, 0.0)));
    }

    #[test]
    fn closed_form_matches_eigendecomposition() {
        for (delta, sigma, t) in [(25.0, 0.0, 10.0), (25.0, 43.3, 7.3), (2.5, -800.0, 100.0)] {
            let p = TwoLevelParams::new(delta, sigma).unwrap();
            let dense = propagator(&p.hamiltonian(), t).unwrap();
            let closed = two_level_propagator(&p, t);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((dense.matrix()[(i, j)] - closed[(i, j)]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn copy_table_rows() {
        let d = solve_parameters(10.0, 1, 0).unwrap();
        let (z, o) = (SingleQubitState::zero(), SingleQubitState::one());
        assert_eq!(copy_transition(&d, &z, &o, &o).unwrap().0, Basis::Zero);
        assert_eq!(copy_transition(&d, &o, &z, &z).unwrap().0, Basis::One);
        assert_eq!(copy_transition(&d, &z, &z, &z).unwrap().0, Basis::Zero);
        assert_eq!(copy_transition(&d, &o, &o, &o).unwrap().0, Basis::One);
        let plus = SingleQubitState::from_bloch(PI / 2.0, 0.0);
        assert!(matches!(
            copy_transition(&d, &plus, &z, &z),
            Err(Error::NonBasisInput(_))
        ));
        assert!(ideal_copy(&d).unwrap().is_basis_permuting());
    }

    #[test]
    fn gate_op_matches_dense_embedding() {
        // CNOT on (control 2, target 0) of a 3-qubit register vs. explicit permutation
        let g = ideal_cnot();
        let op = GateOp::cnot(&g, 2, 0);
        for i in 0..8 {
            let out = op.apply(&basis(3, i), 3).unwrap();
            let (ctrl, tgt) = (i & 1, (i >> 2) & 1);
            let j = if ctrl == 1 { i ^ 0b100 } else { i };
            let expected = if ctrl == 1 { c(0.0, -1.0) } else { c(-1.0, 0.0) };
            assert!(close(out[j], expected), "i={i} tgt={tgt}");
        }
        assert!(op.apply(&basis(2, 0), 2).is_err());
        let _ = ChainSpec::new(3, 25.0, 21.65).unwrap();
    }

    proptest! {
        #[test]
        fn even_swap_counts_cancel(theta in 0.0f64..PI, phi in 0.0f64..std::f64::consts::TAU, k in 1usize..=3) {
            let s = SingleQubitState::from_bloch(theta, phi);
            let n = 2 * k + 1;
            let mut input = CVector::zeros(1 << n);
            input[0] = s.alpha;
            input[1 << (n - 1)] = s.beta;
            let ops = chain_transfer_ops(n, &ideal_cnot());
            let mut v = input.clone();
            for op in &ops {
                v = op.apply(&v, n).unwrap();
            }
            // last qubit now holds the data, the rest are |0⟩
            let out = [v[0], v[1]];
            let overlap = s.alpha.conj() * out[0] + s.beta.conj() * out[1];
            prop_assert!((overlap.norm_sqr() - 1.0).abs() < 1e-9);
            if s.alpha.norm() > 1e-3 && s.beta.norm() > 1e-3 {
                let rel = wrap_phase((out[0] * out[1].conj()).arg() - (s.alpha * s.beta.conj()).arg());
                prop_assert!(rel.abs() < 1e-9);
            }
        }
    }
}
