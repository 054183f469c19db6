//! Closed-form analytics of a target qubit driven at constant bias.
//!
//! With reduced Hamiltonian `Δσx + Σσz` and the qubit starting in `|0⟩`,
//! `P(|1⟩, t) = X - Y cos(2πft)` with
//! `X = Y = Δ² / (2(Δ² + Σ²))` and `f = 2√(Δ² + Σ²)`.
//!
//! A CNOT (or COPY) pulse of width `T` needs the control-`|0⟩` frequency
//! `f₁ = 2√(Δ² + 4ξ²)` to complete `M` whole cycles and the control-`|1⟩`
//! frequency `f₂ = 2Δ` to complete `N + ½` cycles:
//!
//! ```text
//! f₁ T = M,   f₂ T = (2N + 1) / 2
//! ```
//!
//! which fixes `Δ = (2N+1)/(4T)` and `ξ = √(4M² - (2N+1)²)/(8T)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{cycles, MHZ_NS};

/// Absolute tolerance on `f · T` when testing for whole or half cycles.
pub const INTEGRALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationDescriptor {
    pub offset: f64,
    pub amplitude: f64,
    pub frequency_mhz: f64,
}

impl OscillationDescriptor {
    /// `X - Y cos(2πft)`.
    pub fn probability_at(&self, t_ns: f64) -> f64 {
        self.offset - self.amplitude * (std::f64::consts::TAU * self.frequency_mhz * t_ns * MHZ_NS).cos()
    }
}

pub fn oscillation_descriptor(delta_mhz: f64, effective_bias_mhz: f64) -> Result<OscillationDescriptor> {
    if !(delta_mhz > 0.0) {
        return Err(Error::param("delta_mhz", format!("must be positive, got {delta_mhz}")));
    }
    let d2 = delta_mhz * delta_mhz;
    let s2 = effective_bias_mhz * effective_bias_mhz;
    Ok(OscillationDescriptor {
        offset: 0.5 - s2 / (2.0 * (d2 + s2)),
        amplitude: d2 / (2.0 * (d2 + s2)),
        frequency_mhz: 2.0 * (d2 + s2).sqrt(),
    })
}

/// Fixed device parameters realising a CNOT/COPY pulse of width `pulse_width_ns`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDesign {
    pub pulse_width_ns: f64,
    /// Whole cycles completed at `f₁`.
    pub m: u32,
    /// `f₂` completes `N + ½` cycles.
    pub n: u32,
    pub delta_mhz: f64,
    pub xi_mhz: f64,
}

impl GateDesign {
    /// `f₁ = 2√(Δ² + 4ξ²)`.
    pub fn f1_mhz(&self) -> f64 {
        2.0 * (self.delta_mhz.powi(2) + 4.0 * self.xi_mhz.powi(2)).sqrt()
    }

    /// `f₂ = 2Δ`.
    pub fn f2_mhz(&self) -> f64 {
        2.0 * self.delta_mhz
    }

    pub fn is_phase_exact(&self) -> bool {
        self.m % 2 == 1 && self.n % 2 == 0
    }
}

fn check_feasible(m: u32, n: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Infeasible("M must be a positive integer".into()));
    }
    if 2 * u64::from(m) <= 2 * u64::from(n) + 1 {
        return Err(Error::Infeasible(format!(
            "2M = {} must exceed 2N+1 = {} or the coupling is imaginary",
            2 * m,
            2 * n + 1
        )));
    }
    Ok(())
}

fn xi_for(t_ns: f64, m: u32, n: u32) -> f64 {
    let m = f64::from(m);
    let odd = f64::from(2 * n + 1);
    (4.0 * m * m - odd * odd).sqrt() / (8.0 * t_ns * MHZ_NS)
}

/// Solves for `Δ` and `ξ` given the pulse width.
pub fn solve_parameters(pulse_width_ns: f64, m: u32, n: u32) -> Result<GateDesign> {
    if !(pulse_width_ns.is_finite() && pulse_width_ns > 0.0) {
        return Err(Error::param("pulse_width_ns", format!("must be positive, got {pulse_width_ns}")));
    }
    check_feasible(m, n)?;
    Ok(GateDesign {
        pulse_width_ns,
        m,
        n,
        delta_mhz: f64::from(2 * n + 1) / (4.0 * pulse_width_ns * MHZ_NS),
        xi_mhz: xi_for(pulse_width_ns, m, n),
    })
}

/// Solves for the pulse width and `ξ` given the tunnelling.
pub fn solve_for_timestep(delta_mhz: f64, m: u32, n: u32) -> Result<GateDesign> {
    if !(delta_mhz.is_finite() && delta_mhz > 0.0) {
        return Err(Error::param("delta_mhz", format!("must be positive, got {delta_mhz}")));
    }
    check_feasible(m, n)?;
    let pulse_width_ns = f64::from(2 * n + 1) / (4.0 * delta_mhz * MHZ_NS);
    Ok(GateDesign {
        pulse_width_ns,
        m,
        n,
        delta_mhz,
        xi_mhz: xi_for(pulse_width_ns, m, n),
    })
}

/// Oscillation frequencies of a COPY target whose two neighbours are both
/// `|0⟩`, in opposite states, or both `|1⟩`.
pub fn copy_frequencies(delta_mhz: f64, xi_mhz: f64, bias_mhz: f64) -> Result<[f64; 3]> {
    if !(delta_mhz > 0.0) {
        return Err(Error::param("delta_mhz", format!("must be positive, got {delta_mhz}")));
    }
    let f = |sigma: f64| 2.0 * (delta_mhz * delta_mhz + sigma * sigma).sqrt();
    Ok([f(bias_mhz + 2.0 * xi_mhz), f(bias_mhz), f(bias_mhz - 2.0 * xi_mhz)])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateConditionReport {
    pub f1_cycles: f64,
    pub f2_cycles: f64,
    /// Nearest integer to `f₁T`.
    pub m_observed: i64,
    /// `N` such that `f₂T` is nearest to `N + ½`.
    pub n_observed: i64,
    pub m_odd: bool,
    pub n_even: bool,
    pub whole_cycles_ok: bool,
    pub half_cycles_ok: bool,
    pub phase_exact_required: bool,
    pub ok: bool,
}

/// Checks the frequency conditions of a design; never fails, only reports.
pub fn validate_gate_conditions(design: &GateDesign, phase_exact: bool) -> GateConditionReport {
    let f1_cycles = cycles(design.f1_mhz(), design.pulse_width_ns);
    let f2_cycles = cycles(design.f2_mhz(), design.pulse_width_ns);
    let m_observed = f1_cycles.round() as i64;
    let n_observed = (f2_cycles - 0.5).round() as i64;
    let whole_cycles_ok = m_observed >= 1 && (f1_cycles - m_observed as f64).abs() <= INTEGRALITY_TOL;
    let half_cycles_ok = n_observed >= 0 && (f2_cycles - (n_observed as f64 + 0.5)).abs() <= INTEGRALITY_TOL;
    let m_odd = m_observed.rem_euclid(2) == 1;
    let n_even = n_observed.rem_euclid(2) == 0;
    let ok = whole_cycles_ok && half_cycles_ok && (!phase_exact || (m_odd && n_even));
    GateConditionReport {
        f1_cycles,
        f2_cycles,
        m_observed,
        n_observed,
        m_odd,
        n_even,
        whole_cycles_ok,
        half_cycles_ok,
        phase_exact_required: phase_exact,
        ok,
    }
}

/// Smallest `k / T` (integer `k`, in MHz) that is at least `factor · Δ`.
///
/// Idle qubits held at such a bias accumulate whole turns of bias phase in
/// every window of width `T`.
pub fn commensurate_eps_high(delta_mhz: f64, pulse_width_ns: f64, factor: f64) -> f64 {
    let per_cycle = 1.0 / (pulse_width_ns * MHZ_NS);
    let k = (factor * delta_mhz / per_cycle - 1e-9).ceil();
    k * per_cycle
}
