//! Exact evolution under piecewise-constant Hamiltonians.
//!
//! Every window has a time-independent Hamiltonian, so each propagator is
//! computed from the eigendecomposition `H = V diag(λ) V†` as
//! `U(t) = V diag(exp(-i·2π·λ·t·10⁻³)) V†`. No time stepping is involved.
//!
//! States are either pure vectors or density matrices. Reset and inject are
//! the two non-unitary primitives: reset traces a qubit out and replaces it by
//! `|0⟩`, inject replaces a disentangled qubit by a prescribed pure state.

use std::io::Write;

use nalgebra::{DVector, Matrix2, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{
    build_hamiltonian, hermitian_deviation, qubit_bit, qubit_mask, Basis, BiasProfile, CMatrix,
    ChainSpec, HermitianOperator, C64, HERMITIAN_TOL,
};
use crate::error::{Error, Result};
use crate::units::phase_rad;

pub type CVector = DVector<C64>;

pub const NORM_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
/// Default purity threshold below which a qubit counts as entangled.
pub const DEFAULT_PURITY_THRESHOLD: f64 = 1e-6;

/// A unitary matrix on `k` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator(CMatrix);

impl UnitaryOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let err = unitarity_error(&matrix);
        if matrix.nrows() != matrix.ncols() || !(err < UNITARY_TOL) {
            return Err(Error::InvalidState(format!("matrix is not unitary (error {err:e})")));
        }
        Ok(UnitaryOperator(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOperator(CMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    /// `self` after `first`, i.e. the matrix product `self · first`.
    pub fn after(&self, first: &UnitaryOperator) -> UnitaryOperator {
        UnitaryOperator(&self.0 * &first.0)
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.0)
    }
}

/// `max |U†U - I|` entrywise.
pub fn unitarity_error(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    let n = prod.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian operator, reusable for many durations.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues_mhz: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn new(h: &HermitianOperator) -> Self {
        let eig = SymmetricEigen::new(h.matrix().clone());
        Spectrum {
            eigenvalues_mhz: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn eigenvalues_mhz(&self) -> &[f64] {
        &self.eigenvalues_mhz
    }

    pub fn propagator(&self, duration_ns: f64) -> Result<UnitaryOperator> {
        if !(duration_ns >= 0.0) {
            return Err(Error::NegativeDuration(duration_ns));
        }
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues_mhz.iter().enumerate() {
            let phase = C64::from_polar(1.0, -phase_rad(lambda, duration_ns));
            for row in 0..scaled.nrows() {
                scaled[(row, k)] *= phase;
            }
        }
        Ok(UnitaryOperator(scaled * v.adjoint()))
    }
}

/// `exp(-i·2π·H·t·10⁻³)` for `t = duration_ns`.
pub fn propagator(h: &HermitianOperator, duration_ns: f64) -> Result<UnitaryOperator> {
    if !(duration_ns >= 0.0) {
        return Err(Error::NegativeDuration(duration_ns));
    }
    Spectrum::new(h).propagator(duration_ns)
}

/// Same as [`propagator`] for a raw matrix, checking Hermiticity first.
pub fn propagator_of_matrix(h: &CMatrix, duration_ns: f64) -> Result<UnitaryOperator> {
    let deviation = hermitian_deviation(h);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    propagator(&HermitianOperator::new(h.clone())?, duration_ns)
}

/// A normalised single-qubit pure state `α|0⟩ + β|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitState {
    #[serde(with = "complex_pair")]
    pub alpha: C64,
    #[serde(with = "complex_pair")]
    pub beta: C64,
}

impl SingleQubitState {
    /// Normalises `(alpha, beta)`; fails when both vanish.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::InvalidState("single-qubit state has zero norm".into()));
        }
        Ok(SingleQubitState {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn basis(b: Basis) -> Self {
        match b {
            Basis::Zero => SingleQubitState {
                alpha: C64::new(1.0, 0.0),
                beta: C64::new(0.0, 0.0),
            },
            Basis::One => SingleQubitState {
                alpha: C64::new(0.0, 0.0),
                beta: C64::new(1.0, 0.0),
            },
        }
    }

    pub fn zero() -> Self {
        Self::basis(Basis::Zero)
    }

    pub fn one() -> Self {
        Self::basis(Basis::One)
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        SingleQubitState {
            alpha: C64::new((theta / 2.0).cos(), 0.0),
            beta: C64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// Uniformly distributed on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        Self::from_bloch((1.0 - 2.0 * u).acos(), std::f64::consts::TAU * v)
    }

    pub fn amplitude(&self, bit: usize) -> C64 {
        if bit == 0 {
            self.alpha
        } else {
            self.beta
        }
    }

    /// The basis value, if the state is a basis state to within `1e-12`.
    pub fn as_basis(&self) -> Option<Basis> {
        if self.beta.norm_sqr() < 1e-12 {
            Some(Basis::Zero)
        } else if self.alpha.norm_sqr() < 1e-12 {
            Some(Basis::One)
        } else {
            None
        }
    }

    pub fn density(&self) -> Matrix2<C64> {
        Matrix2::new(
            self.alpha * self.alpha.conj(),
            self.alpha * self.beta.conj(),
            self.beta * self.alpha.conj(),
            self.beta * self.beta.conj(),
        )
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, rho: &Matrix2<C64>) -> f64 {
        let v = [self.alpha, self.beta];
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * rho[(i, j)] * v[j];
            }
        }
        acc.re.clamp(0.0, 1.0)
    }
}

mod complex_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateData {
    Pure(CVector),
    Mixed(CMatrix),
}

/// State of an `n`-qubit chain, pure or mixed.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    data: StateData,
}

impl QuantumState {
    /// `|0…0⟩`.
    pub fn zeros(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, 0).expect("index 0 always exists")
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidState(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(QuantumState {
            n_qubits,
            data: StateData::Pure(v),
        })
    }

    pub fn from_bits(bits: &[Basis]) -> Self {
        let n = bits.len();
        let index = bits
            .iter()
            .enumerate()
            .fold(0, |acc, (q, b)| acc | (b.bit() * qubit_mask(n, q)));
        Self::basis_state(n, index).expect("index built from n bits")
    }

    pub fn from_amplitudes(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_squared();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm² is {norm}, expected 1")));
        }
        Ok(QuantumState {
            n_qubits,
            data: StateData::Pure(amplitudes),
        })
    }

    pub fn from_density(n_qubits: usize, rho: CMatrix) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rho.nrows(),
            });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let deviation = hermitian_deviation(&rho);
        if deviation > NORM_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({deviation:e})")));
        }
        let min_eig = SymmetricEigen::new(rho.clone()).eigenvalues.min();
        if min_eig < -NORM_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(QuantumState {
            n_qubits,
            data: StateData::Mixed(rho),
        })
    }

    pub fn product(factors: &[SingleQubitState]) -> Self {
        let mut v = CVector::from_element(1, C64::new(1.0, 0.0));
        for f in factors {
            let q = CVector::from_vec(vec![f.alpha, f.beta]);
            v = v.kronecker(&q);
        }
        QuantumState {
            n_qubits: factors.len(),
            data: StateData::Pure(v),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::Pure(_))
    }

    pub fn data(&self) -> &StateData {
        &self.data
    }

    pub fn amplitudes(&self) -> Option<&CVector> {
        match &self.data {
            StateData::Pure(v) => Some(v),
            StateData::Mixed(_) => None,
        }
    }

    pub fn density(&self) -> CMatrix {
        match &self.data {
            StateData::Pure(v) => v * v.adjoint(),
            StateData::Mixed(m) => m.clone(),
        }
    }

    pub fn into_mixed(self) -> Self {
        match self.data {
            StateData::Pure(v) => QuantumState {
                n_qubits: self.n_qubits,
                data: StateData::Mixed(&v * v.adjoint()),
            },
            mixed => QuantumState {
                n_qubits: self.n_qubits,
                data: mixed,
            },
        }
    }

    /// Norm² for pure states, real trace for mixed ones.
    pub fn trace(&self) -> f64 {
        match &self.data {
            StateData::Pure(v) => v.norm_squared(),
            StateData::Mixed(m) => m.trace().re,
        }
    }

    /// `tr(ρ²)` of the whole register.
    pub fn purity(&self) -> f64 {
        match &self.data {
            StateData::Pure(v) => v.norm_squared().powi(2),
            StateData::Mixed(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// Population of one basis state.
    pub fn basis_probability(&self, index: usize) -> f64 {
        match &self.data {
            StateData::Pure(v) => v[index].norm_sqr(),
            StateData::Mixed(m) => m[(index, index)].re,
        }
    }

    /// `⟨ψ|ρ|ψ⟩` against a pure reference vector.
    pub fn overlap_with(&self, psi: &CVector) -> f64 {
        match &self.data {
            StateData::Pure(v) => psi.dotc(v).norm_sqr(),
            StateData::Mixed(m) => psi.dotc(&(m * psi)).re,
        }
    }

    pub fn apply_unitary(self, u: &UnitaryOperator) -> Result<Self> {
        if u.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: u.dimension(),
            });
        }
        let data = match self.data {
            StateData::Pure(v) => StateData::Pure(u.matrix() * v),
            StateData::Mixed(m) => StateData::Mixed(u.matrix() * m * u.matrix().adjoint()),
        };
        Ok(QuantumState {
            n_qubits: self.n_qubits,
            data,
        })
    }

    /// Applies the diagonal unitary `diag(phases)`.
    pub fn apply_diagonal(self, phases: &[C64]) -> Result<Self> {
        if phases.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: phases.len(),
            });
        }
        let data = match self.data {
            StateData::Pure(mut v) => {
                for (amp, p) in v.iter_mut().zip(phases) {
                    *amp *= p;
                }
                StateData::Pure(v)
            }
            StateData::Mixed(mut m) => {
                let dim = m.nrows();
                for j in 0..dim {
                    for i in 0..dim {
                        m[(i, j)] *= phases[i] * phases[j].conj();
                    }
                }
                StateData::Mixed(m)
            }
        };
        Ok(QuantumState {
            n_qubits: self.n_qubits,
            data,
        })
    }

    /// Applies a 2×2 unitary to `target` whose entries may depend on the other
    /// qubits' basis values. `block(index)` receives a basis index with the
    /// target bit cleared and returns the block for that configuration.
    pub fn apply_local_blocks<F>(self, target: usize, block: F) -> Result<Self>
    where
        F: Fn(usize) -> Matrix2<C64>,
    {
        check_index(target, self.n_qubits)?;
        let n = self.n_qubits;
        let mask = qubit_mask(n, target);
        let dim = self.dimension();
        let left_apply = |col: &mut [C64]| {
            for i0 in (0..dim).filter(|i| i & mask == 0) {
                let b = block(i0);
                let (a0, a1) = (col[i0], col[i0 | mask]);
                col[i0] = b[(0, 0)] * a0 + b[(0, 1)] * a1;
                col[i0 | mask] = b[(1, 0)] * a0 + b[(1, 1)] * a1;
            }
        };
        let data = match self.data {
            StateData::Pure(mut v) => {
                left_apply(v.as_mut_slice());
                StateData::Pure(v)
            }
            StateData::Mixed(m) => {
                // U ρ U† = U (U ρ)†, with ρ Hermitian
                let mut m = m;
                for mut col in m.column_iter_mut() {
                    left_apply(col.as_mut_slice());
                }
                let mut m = m.adjoint();
                for mut col in m.column_iter_mut() {
                    left_apply(col.as_mut_slice());
                }
                StateData::Mixed(m)
            }
        };
        Ok(QuantumState {
            n_qubits: self.n_qubits,
            data,
        })
    }
}

fn check_index(qubit: usize, n_qubits: usize) -> Result<()> {
    if qubit >= n_qubits {
        Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits,
        })
    } else {
        Ok(())
    }
}

/// Evolves `state` for `duration_ns` under the chain Hamiltonian with constant biases.
pub fn evolve_window(
    state: QuantumState,
    spec: &ChainSpec,
    profile: &BiasProfile,
    duration_ns: f64,
) -> Result<QuantumState> {
    if state.n_qubits() != spec.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits,
            found: state.n_qubits(),
        });
    }
    if !(duration_ns >= 0.0) {
        return Err(Error::NegativeDuration(duration_ns));
    }
    if duration_ns == 0.0 {
        return Ok(state);
    }
    let h = build_hamiltonian(spec, profile)?;
    state.apply_unitary(&propagator(&h, duration_ns)?)
}

/// `P(|1⟩)` of one qubit.
pub fn sample_probability(state: &QuantumState, qubit: usize) -> Result<f64> {
    check_index(qubit, state.n_qubits())?;
    let n = state.n_qubits();
    let p: f64 = (0..state.dimension())
        .filter(|&i| qubit_bit(i, n, qubit) == 1)
        .map(|i| state.basis_probability(i))
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// One qubit's reduced density matrix and its purity `tr(ρ²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedQubit {
    pub rho: Matrix2<C64>,
    pub purity: f64,
}

impl ReducedQubit {
    pub fn p_one(&self) -> f64 {
        self.rho[(1, 1)].re.clamp(0.0, 1.0)
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn dominant_state(&self) -> SingleQubitState {
        let a = self.rho[(0, 0)].re;
        let d = self.rho[(1, 1)].re;
        let b = self.rho[(0, 1)];
        let lambda = 0.5 * (a + d) + (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
        if b.norm() > 1e-300 {
            SingleQubitState::new(b, C64::new(lambda - a, 0.0)).expect("non-zero eigenvector")
        } else if a >= d {
            SingleQubitState::zero()
        } else {
            SingleQubitState::one()
        }
    }
}

pub fn reduced_state(state: &QuantumState, qubit: usize) -> Result<ReducedQubit> {
    check_index(qubit, state.n_qubits())?;
    let n = state.n_qubits();
    let mask = qubit_mask(n, qubit);
    let mut rho = Matrix2::<C64>::zeros();
    for i0 in (0..state.dimension()).filter(|i| i & mask == 0) {
        let idx = [i0, i0 | mask];
        match state.data() {
            StateData::Pure(v) => {
                for x in 0..2 {
                    for y in 0..2 {
                        rho[(x, y)] += v[idx[x]] * v[idx[y]].conj();
                    }
                }
            }
            StateData::Mixed(m) => {
                for x in 0..2 {
                    for y in 0..2 {
                        rho[(x, y)] += m[(idx[x], idx[y])];
                    }
                }
            }
        }
    }
    let purity = rho.iter().map(|z| z.norm_sqr()).sum::<f64>();
    Ok(ReducedQubit { rho, purity })
}

/// Controls how reset and inject treat qubits that are not disentangled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityPolicy {
    /// A qubit with reduced purity below `1 - threshold` is considered entangled.
    pub threshold: f64,
    /// Inject into an entangled qubit is an error when set.
    pub strict: bool,
    /// Keep pure states pure across reset/inject when the qubit is disentangled.
    pub keep_pure: bool,
}

impl Default for PurityPolicy {
    fn default() -> Self {
        PurityPolicy {
            threshold: DEFAULT_PURITY_THRESHOLD,
            strict: true,
            keep_pure: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResetOutcome {
    pub state: QuantumState,
    /// Reduced state of the qubit just before it was reset (the read-out value).
    pub measured: ReducedQubit,
    /// Set when the discarded qubit was entangled with the rest of the chain.
    pub entangled_warning: bool,
}

/// Traces `qubit` out and puts it back in `|0⟩`. The result is a mixed state.
pub fn reset_qubit(state: QuantumState, qubit: usize) -> Result<ResetOutcome> {
    reset_qubit_with(state, qubit, &PurityPolicy::default())
}

pub fn reset_qubit_with(state: QuantumState, qubit: usize, policy: &PurityPolicy) -> Result<ResetOutcome> {
    let measured = reduced_state(&state, qubit)?;
    let entangled_warning = measured.purity < 1.0 - policy.threshold;
    let state = replace_qubit(state, qubit, &SingleQubitState::zero(), &measured, policy)?;
    Ok(ResetOutcome {
        state,
        measured,
        entangled_warning,
    })
}

/// Prepares `qubit` in `target`, leaving the rest of the chain untouched.
pub fn inject_state(state: QuantumState, qubit: usize, target: &SingleQubitState) -> Result<QuantumState> {
    inject_state_with(state, qubit, target, &PurityPolicy::default())
}

pub fn inject_state_with(
    state: QuantumState,
    qubit: usize,
    target: &SingleQubitState,
    policy: &PurityPolicy,
) -> Result<QuantumState> {
    let current = reduced_state(&state, qubit)?;
    if policy.strict && current.purity < 1.0 - policy.threshold {
        return Err(Error::EntangledQubit {
            qubit,
            purity: current.purity,
        });
    }
    replace_qubit(state, qubit, target, &current, policy)
}

/// `Tr_q(ρ) ⊗ |t⟩⟨t|` at position `qubit`. Pure inputs stay pure when the
/// policy allows it and the qubit is disentangled.
fn replace_qubit(
    state: QuantumState,
    qubit: usize,
    target: &SingleQubitState,
    current: &ReducedQubit,
    policy: &PurityPolicy,
) -> Result<QuantumState> {
    let n = state.n_qubits();
    let mask = qubit_mask(n, qubit);
    let dim = state.dimension();
    let t = [target.alpha, target.beta];
    let disentangled = current.purity >= 1.0 - policy.threshold;
    match state.data {
        StateData::Pure(v) if policy.keep_pure && disentangled => {
            let phi = current.dominant_state();
            let mut out = CVector::zeros(dim);
            let mut norm = 0.0;
            for i0 in (0..dim).filter(|i| i & mask == 0) {
                let rest = phi.alpha.conj() * v[i0] + phi.beta.conj() * v[i0 | mask];
                out[i0] = t[0] * rest;
                out[i0 | mask] = t[1] * rest;
                norm += rest.norm_sqr();
            }
            out /= C64::new(norm.sqrt(), 0.0);
            Ok(QuantumState {
                n_qubits: n,
                data: StateData::Pure(out),
            })
        }
        data => {
            let rho = match data {
                StateData::Pure(v) => &v * v.adjoint(),
                StateData::Mixed(m) => m,
            };
            let mut out = CMatrix::zeros(dim, dim);
            for j0 in (0..dim).filter(|j| j & mask == 0) {
                for i0 in (0..dim).filter(|i| i & mask == 0) {
                    let rest = rho[(i0, j0)] + rho[(i0 | mask, j0 | mask)];
                    for x in 0..2 {
                        for y in 0..2 {
                            let i = if x == 1 { i0 | mask } else { i0 };
                            let j = if y == 1 { j0 | mask } else { j0 };
                            out[(i, j)] = t[x] * t[y].conj() * rest;
                        }
                    }
                }
            }
            Ok(QuantumState {
                n_qubits: n,
                data: StateData::Mixed(out),
            })
        }
    }
}

/// Per-qubit `P(|1⟩)` at one instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub time_ns: f64,
    pub p_one: Vec<f64>,
}

/// Samples every qubit's `P(|1⟩)` at the given times under constant biases.
pub fn trajectory(
    initial: &QuantumState,
    spec: &ChainSpec,
    profile: &BiasProfile,
    times_ns: &[f64],
) -> Result<Vec<TrajectoryRow>> {
    if initial.n_qubits() != spec.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits,
            found: initial.n_qubits(),
        });
    }
    let spectrum = Spectrum::new(&build_hamiltonian(spec, profile)?);
    times_ns
        .iter()
        .map(|&t| {
            let state = initial.clone().apply_unitary(&spectrum.propagator(t)?)?;
            let p_one = (0..spec.n_qubits)
                .map(|q| sample_probability(&state, q))
                .collect::<Result<Vec<_>>>()?;
            Ok(TrajectoryRow { time_ns: t, p_one })
        })
        .collect()
}

/// CSV with header `time_ns,p1_q0,…`.
pub fn write_trajectory_csv<W: Write>(rows: &[TrajectoryRow], n_qubits: usize, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["time_ns".to_string()];
    header.extend((0..n_qubits).map(|q| format!("p1_q{q}")));
    w.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.time_ns.to_string()];
        record.extend(row.p_one.iter().map(|p| p.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
