//! Brute-force reference simulator for integration tests.
//!
//! Written separately from the library engines: the Hamiltonian is built from
//! Kronecker products of Pauli matrices, propagators come from a scaled and
//! squared Taylor series, and reset/inject are Kraus sums on a dense density
//! matrix. The idle-qubit frame removed after each window is the full
//! diagonal `Σ ε_i σz_i + Σ ξ σz_i σz_j` over idle qubits and idle links.

#![allow(dead_code)]

use nalgebra::DMatrix;
use swapwire::schedule::{EventKind, PulseEvent, PulseSchedule};
use swapwire::{SingleQubitState, C64};

pub type M = DMatrix<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn two(a: C64, b: C64, cc: C64, d: C64) -> M {
    M::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn pauli_x() -> M {
    two(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn pauli_z() -> M {
    two(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// `op` on qubit `q` of `n` (qubit 0 leftmost in the tensor product).
pub fn embed(op: &M, q: usize, n: usize) -> M {
    let mut out = M::identity(1, 1);
    for k in 0..n {
        let f = if k == q { op.clone() } else { M::identity(2, 2) };
        out = out.kronecker(&f);
    }
    out
}

pub fn hamiltonian(n: usize, delta: f64, xi: f64, biases: &[f64]) -> M {
    let dim = 1 << n;
    let mut h = M::zeros(dim, dim);
    let (x, z) = (pauli_x(), pauli_z());
    for q in 0..n {
        h += embed(&x, q, n) * c(delta, 0.0);
        h += embed(&z, q, n) * c(biases[q], 0.0);
    }
    for q in 0..n - 1 {
        h += embed(&z, q, n) * embed(&z, q + 1, n) * c(xi, 0.0);
    }
    h
}

/// `exp(a)` by scaling and squaring a truncated Taylor series.
pub fn expm(a: &M) -> M {
    let norm = (0..a.nrows())
        .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let scaled = a * c(0.5f64.powi(squarings), 0.0);
    let mut term = M::identity(a.nrows(), a.ncols());
    let mut sum = term.clone();
    for k in 1..=20 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i 2π H t)` with H in MHz and t in ns.
pub fn evolution(h: &M, t_ns: f64) -> M {
    expm(&(h * c(0.0, -std::f64::consts::TAU * t_ns * 1e-3)))
}

fn ket(s: &SingleQubitState) -> M {
    M::from_column_slice(2, 1, &[s.alpha, s.beta])
}

/// Replaces qubit `q` with `|s⟩`, whatever it held.
pub fn replace_qubit(rho: &M, q: usize, n: usize, s: &SingleQubitState) -> M {
    let psi = ket(s);
    let mut out = M::zeros(rho.nrows(), rho.ncols());
    for k in 0..2 {
        let mut bra = M::zeros(1, 2);
        bra[(0, k)] = c(1.0, 0.0);
        let kraus = embed(&(&psi * &bra), q, n);
        out += &kraus * rho * kraus.adjoint();
    }
    out
}

/// Reduced density matrix of qubit `q`.
pub fn reduced(rho: &M, q: usize, n: usize) -> M {
    let mut r = M::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            let mut e = M::zeros(2, 2);
            e[(b, a)] = c(1.0, 0.0);
            r[(a, b)] = (rho * embed(&e, q, n)).trace();
        }
    }
    r
}

pub fn fidelity(s: &SingleQubitState, rho_q: &M) -> f64 {
    let psi = ket(s);
    (psi.adjoint() * rho_q * &psi)[(0, 0)].re
}

/// Fidelity of every data read, in slot order.
pub fn run_channel(
    schedule: &PulseSchedule,
    delta: f64,
    xi: f64,
    inputs: &[SingleQubitState],
    frame: bool,
) -> Vec<(usize, f64)> {
    let n = schedule.n_qubits;
    let dim = 1 << n;
    let mut rho = M::zeros(dim, dim);
    rho[(0, 0)] = c(1.0, 0.0);
    let mut reads = Vec::new();
    let zero = SingleQubitState::zero();
    let z = pauli_z();

    let mut boundary = |rho: &mut M, e: &PulseEvent| match e.kind {
        EventKind::Inject { slot } => *rho = replace_qubit(rho, e.qubit, n, &inputs[slot]),
        EventKind::ReadReset { slot } => {
            if let Some(s) = slot {
                reads.push((s, fidelity(&inputs[s], &reduced(rho, e.qubit, n))));
            }
            *rho = replace_qubit(rho, e.qubit, n, &zero);
        }
        _ => {}
    };

    for w in &schedule.windows {
        for e in w.events.iter().filter(|e| !e.kind.is_pulse()) {
            boundary(&mut rho, e);
        }
        let u = evolution(&hamiltonian(n, delta, xi, &w.biases_mhz), w.duration_ns);
        rho = &u * &rho * u.adjoint();
        if frame {
            let idle: Vec<bool> = (0..n).map(|q| w.pulses().all(|p| p.qubit != q)).collect();
            let mut h_idle = M::zeros(dim, dim);
            for q in 0..n {
                if idle[q] {
                    h_idle += embed(&z, q, n) * c(w.biases_mhz[q], 0.0);
                }
            }
            for q in 0..n - 1 {
                if idle[q] && idle[q + 1] {
                    h_idle += embed(&z, q, n) * embed(&z, q + 1, n) * c(xi, 0.0);
                }
            }
            let f = evolution(&h_idle, -w.duration_ns);
            rho = &f * &rho * f.adjoint();
        }
    }
    for e in &schedule.trailing_events {
        boundary(&mut rho, e);
    }
    reads.sort_by_key(|r| r.0);
    reads
}
