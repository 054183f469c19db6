//! Unit conventions: energies and frequencies in MHz, times in ns.
//!
//! A frequency `f` held for `t` accumulates `f · t · 10⁻³` cycles, i.e. a phase
//! of `2π · f · t · 10⁻³` radians.

use std::f64::consts::{PI, TAU};

/// MHz × ns → dimensionless cycles.
pub const MHZ_NS: f64 = 1e-3;

#[inline]
pub fn cycles(freq_mhz: f64, duration_ns: f64) -> f64 {
    freq_mhz * duration_ns * MHZ_NS
}

#[inline]
pub fn phase_rad(freq_mhz: f64, duration_ns: f64) -> f64 {
    TAU * cycles(freq_mhz, duration_ns)
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut w = phi.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}
