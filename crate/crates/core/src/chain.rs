//! Device model of a qubit chain with fixed nearest-neighbour σzσz couplings.
//!
//! The chain Hamiltonian (in MHz, Planck's constant normalised to one) is
//!
//! ```text
//! H = Σ_i Δ σx_i + Σ_i ε_i σz_i + Σ_i ξ σz_i σz_{i+1}
//! ```
//!
//! Basis states are labelled `|q_0 q_1 … q_{n-1}⟩` with qubit 0 as the most
//! significant bit of the basis index. `|0⟩` is the `+1` eigenstate of σz, so a
//! neighbour sitting in `|0⟩` shifts the effective bias of a qubit by `+ξ`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest chain accepted by the dense Hamiltonian builder unless a cap is given.
pub const DEFAULT_QUBIT_CAP: usize = 12;

/// `eps_high = DEFAULT_EPS_HIGH_FACTOR · Δ` unless configured otherwise.
pub const DEFAULT_EPS_HIGH_FACTOR: f64 = 100.0;

pub const HERMITIAN_TOL: f64 = 1e-12;

/// A computational basis value of one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Zero,
    One,
}

impl Basis {
    /// Eigenvalue of σz: `+1` for `|0⟩`, `-1` for `|1⟩`.
    pub fn sign(self) -> f64 {
        match self {
            Basis::Zero => 1.0,
            Basis::One => -1.0,
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Basis::Zero => 0,
            Basis::One => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Basis::Zero
        } else {
            Basis::One
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Basis::Zero => Basis::One,
            Basis::One => Basis::Zero,
        }
    }
}

/// Bit mask of qubit `qubit` inside a basis index of an `n_qubits` register.
#[inline]
pub fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Value (0 or 1) of qubit `qubit` in basis index `index`.
#[inline]
pub fn qubit_bit(index: usize, n_qubits: usize, qubit: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

/// Geometry and fixed device parameters of a uniform chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub n_qubits: usize,
    /// Tunnelling Δ, identical for every qubit.
    pub delta_mhz: f64,
    /// Nearest-neighbour coupling ξ, identical for every link.
    pub xi_mhz: f64,
    /// Bias magnitude used to hold idle qubits.
    pub eps_high_mhz: f64,
}

impl ChainSpec {
    pub fn new(n_qubits: usize, delta_mhz: f64, xi_mhz: f64) -> Result<Self> {
        let spec = ChainSpec {
            n_qubits,
            delta_mhz,
            xi_mhz,
            eps_high_mhz: DEFAULT_EPS_HIGH_FACTOR * delta_mhz,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_eps_high(mut self, eps_high_mhz: f64) -> Result<Self> {
        self.eps_high_mhz = eps_high_mhz;
        self.validate()?;
        Ok(self)
    }

    pub fn with_n_qubits(mut self, n_qubits: usize) -> Result<Self> {
        self.n_qubits = n_qubits;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 1 {
            return Err(Error::param("n_qubits", "must be at least 1"));
        }
        if !(self.delta_mhz.is_finite() && self.delta_mhz > 0.0) {
            return Err(Error::param("delta_mhz", format!("must be positive, got {}", self.delta_mhz)));
        }
        if !(self.xi_mhz.is_finite() && self.xi_mhz >= 0.0) {
            return Err(Error::param("xi_mhz", format!("must be non-negative, got {}", self.xi_mhz)));
        }
        if !(self.eps_high_mhz.is_finite() && self.eps_high_mhz >= 0.0) {
            return Err(Error::param(
                "eps_high_mhz",
                format!("must be non-negative, got {}", self.eps_high_mhz),
            ));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_qubits
    }

    /// Neighbours of `qubit` along the chain (one for end qubits, two otherwise).
    pub fn neighbors(&self, qubit: usize) -> impl Iterator<Item = usize> {
        let left = qubit.checked_sub(1);
        let right = (qubit + 1 < self.n_qubits).then_some(qubit + 1);
        left.into_iter().chain(right)
    }

    pub fn is_end(&self, qubit: usize) -> bool {
        qubit == 0 || qubit + 1 == self.n_qubits
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }
}

/// Per-qubit bias values (MHz) that hold over one time window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BiasProfile {
    biases_mhz: Vec<f64>,
}

impl BiasProfile {
    pub fn new(biases_mhz: Vec<f64>) -> Self {
        BiasProfile { biases_mhz }
    }

    pub fn uniform(n_qubits: usize, bias_mhz: f64) -> Self {
        BiasProfile::new(vec![bias_mhz; n_qubits])
    }

    /// All qubits held at `spec.eps_high_mhz`.
    pub fn idle(spec: &ChainSpec) -> Self {
        BiasProfile::uniform(spec.n_qubits, spec.eps_high_mhz)
    }

    pub fn with_bias(mut self, qubit: usize, bias_mhz: f64) -> Self {
        self.biases_mhz[qubit] = bias_mhz;
        self
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases_mhz
    }

    pub fn len(&self) -> usize {
        self.biases_mhz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.biases_mhz.is_empty()
    }

    pub fn check_against(&self, spec: &ChainSpec) -> Result<()> {
        if self.len() != spec.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: spec.n_qubits,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Parameters of the reduced Hamiltonian `Δσx + Σσz` of a single target qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub delta_mhz: f64,
    pub effective_bias_mhz: f64,
}

impl TwoLevelParams {
    pub fn new(delta_mhz: f64, effective_bias_mhz: f64) -> Result<Self> {
        if !(delta_mhz > 0.0) {
            return Err(Error::param("delta_mhz", format!("must be positive, got {delta_mhz}")));
        }
        Ok(TwoLevelParams {
            delta_mhz,
            effective_bias_mhz,
        })
    }

    pub fn hamiltonian(&self) -> HermitianOperator {
        let d = C64::new(self.delta_mhz, 0.0);
        let s = C64::new(self.effective_bias_mhz, 0.0);
        HermitianOperator(CMatrix::from_row_slice(2, 2, &[s, d, d, -s]))
    }
}

/// A Hermitian matrix acting on `k` qubits, entries in MHz.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.ncols(),
            });
        }
        if !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!("dimension {dim} is not a power of two")));
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermitianOperator(matrix))
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

    pub fn n_qubits(&self) -> usize {
        self.dimension().trailing_zeros() as usize
    }
}

/// Largest entrywise modulus of `H - H^†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn build_hamiltonian(spec: &ChainSpec, profile: &BiasProfile) -> Result<HermitianOperator> {
    build_hamiltonian_capped(spec, profile, DEFAULT_QUBIT_CAP)
}

/// Dense `2^n × 2^n` chain Hamiltonian, refusing chains longer than `cap`.
pub fn build_hamiltonian_capped(
    spec: &ChainSpec,
    profile: &BiasProfile,
    cap: usize,
) -> Result<HermitianOperator> {
    spec.validate()?;
    profile.check_against(spec)?;
    let n = spec.n_qubits;
    if n > cap {
        return Err(Error::QubitCapExceeded { n_qubits: n, cap });
    }
    let dim = 1usize << n;
    let eps = profile.biases();
    let mut h = CMatrix::zeros(dim, dim);
    for index in 0..dim {
        let sign = |q: usize| if qubit_bit(index, n, q) == 0 { 1.0 } else { -1.0 };
        let mut diag = 0.0;
        for q in 0..n {
            diag += eps[q] * sign(q);
            if q + 1 < n {
                diag += spec.xi_mhz * sign(q) * sign(q + 1);
            }
            h[(index ^ qubit_mask(n, q), index)] += C64::new(spec.delta_mhz, 0.0);
        }
        h[(index, index)] = C64::new(diag, 0.0);
    }
    Ok(HermitianOperator(h))
}

/// Two-level reduction of the chain around `target`, given the basis states of
/// its neighbours. `occupancy` holds one entry per qubit; only the target's
/// neighbours are read.
pub fn reduce_to_target(
    spec: &ChainSpec,
    target: usize,
    occupancy: &[Option<Basis>],
    target_bias_mhz: f64,
) -> Result<TwoLevelParams> {
    spec.check_qubit(target)?;
    if occupancy.len() != spec.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits,
            found: occupancy.len(),
        });
    }
    let mut sigma = target_bias_mhz;
    for neighbor in spec.neighbors(target) {
        let state = occupancy[neighbor].ok_or(Error::NeighborUnspecified { target, neighbor })?;
        sigma += spec.xi_mhz * state.sign();
    }
    TwoLevelParams::new(spec.delta_mhz, sigma)
}
