//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

mod support;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swapwire::chain::{qubit_bit, CMatrix};
use swapwire::evolve::{reset_qubit, CVector, Spectrum};
use swapwire::gates::{copy_transition, reduced_cnot, GateOp};
use swapwire::runner::{
    copy_truth_table, loglog_slope, run_classical_channel, run_quantum_channel, sweep_eps_high, Model, RunOptions,
};
use swapwire::schedule::{
    classical_channel_schedule, line_conflict_check, quantum_channel_schedule, swap_channel_schedule,
};
use swapwire::solver::{commensurate_eps_high, oscillation_descriptor, validate_gate_conditions};
use swapwire::{
    build_hamiltonian, solve_parameters, Basis, BiasProfile, ChainSpec, QuantumState, SingleQubitState, TwoLevelParams,
    UnitaryOperator, C64,
};

/// Frame-corrected wire fidelity required at the top of the idle-bias grid,
/// and by every full-model COPY row. The reference simulator in
/// `support` reaches 0.99999908 on the same runs, so 0.999 stands.
const FIDELITY_THRESHOLD: f64 = 0.999;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_states(seed: u64, count: usize) -> Vec<SingleQubitState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| SingleQubitState::random(&mut rng)).collect()
}

fn chain(n: usize, eps_factor: f64) -> Result<ChainSpec, String> {
    let d = solve_parameters(10.0, 1, 0).map_err(err)?;
    let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, eps_factor);
    ChainSpec::new(n, d.delta_mhz, d.xi_mhz)
        .and_then(|s| s.with_eps_high(eps))
        .map_err(err)
}

fn parameter_point() -> Outcome {
    let t0 = Instant::now();
    let a = solve_parameters(10.0, 1, 0).map_err(err)?;
    let b = solve_parameters(100.0, 1, 0).map_err(err)?;
    let elapsed = t0.elapsed();
    ensure((a.delta_mhz - 25.0).abs() < 1e-4, || format!("delta {}", a.delta_mhz))?;
    ensure((a.xi_mhz - 21.650635).abs() < 1e-4, || format!("xi {}", a.xi_mhz))?;
    ensure((b.delta_mhz - a.delta_mhz / 10.0).abs() <= 1e-12 * a.delta_mhz, || {
        format!("delta at 100 ns {}", b.delta_mhz)
    })?;
    ensure((b.xi_mhz - a.xi_mhz / 10.0).abs() <= 1e-12 * a.xi_mhz, || format!("xi at 100 ns {}", b.xi_mhz))?;
    ensure(elapsed < Duration::from_millis(50), || format!("took {elapsed:?}"))?;
    Ok(format!("delta = {} MHz, xi = {:.6} MHz; at 100 ns {} / {:.7}", a.delta_mhz, a.xi_mhz, b.delta_mhz, b.xi_mhz))
}

fn frequency_conditions() -> Outcome {
    let d = solve_parameters(10.0, 1, 0).map_err(err)?;
    // f = 2 sqrt(Δ² + Σ²) with Σ = 2ξ (neighbours agree) and Σ = 0 (they differ)
    let f1 = 2.0 * (d.delta_mhz.powi(2) + (2.0 * d.xi_mhz).powi(2)).sqrt();
    let f2 = 2.0 * d.delta_mhz;
    ensure((d.f1_mhz() - f1).abs() < 1e-9 && (d.f2_mhz() - f2).abs() < 1e-9, || {
        format!("library f1 {} f2 {} vs {f1} {f2}", d.f1_mhz(), d.f2_mhz())
    })?;
    ensure((f1 - 100.0).abs() < 1e-9 && (f2 - 50.0).abs() < 1e-9, || format!("f1 {f1} f2 {f2}"))?;
    let r = validate_gate_conditions(&d, true);
    ensure((r.f1_cycles - 1.0).abs() < 1e-9 && (r.f2_cycles - 0.5).abs() < 1e-9 && r.ok, || format!("{r:?}"))?;
    Ok(format!("f1 = {f1} MHz, f2 = {f2} MHz, f1 T = {}, f2 T = {}", r.f1_cycles, r.f2_cycles))
}

fn cnot_phases() -> Outcome {
    let g = reduced_cnot(&solve_parameters(10.0, 1, 0).map_err(err)?).map_err(err)?;
    let z = c(0.0, 0.0);
    let expected = CMatrix::from_row_slice(
        4,
        4,
        &[
            c(-1.0, 0.0), z, z, z,
            z, c(-1.0, 0.0), z, z,
            z, z, z, c(0.0, -1.0),
            z, z, c(0.0, -1.0), z,
        ],
    );
    let worst = (g.matrix() - &expected).iter().map(|x| x.norm()).fold(0.0, f64::max);
    ensure(worst < 1e-9, || format!("max entry error {worst:e}"))?;
    Ok(format!("max entry error {worst:.1e}"))
}

fn swap_phase_trace() -> Outcome {
    let g = reduced_cnot(&solve_parameters(10.0, 1, 0).map_err(err)?).map_err(err)?;
    let ops = [GateOp::cnot(&g, 1, 0), GateOp::cnot(&g, 0, 1), GateOp::cnot(&g, 1, 0)];
    let mut worst: f64 = 0.0;
    for s in random_states(4, 20) {
        let mut v = CVector::from_vec(vec![s.alpha, c(0.0, 0.0), s.beta, c(0.0, 0.0)]);
        for op in &ops {
            v = op.apply(&v, 2).map_err(err)?;
        }
        let expected = CVector::from_vec(vec![-s.alpha, s.beta, c(0.0, 0.0), c(0.0, 0.0)]);
        worst = worst.max((v - expected).iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    ensure(worst < 1e-9, || format!("max amplitude error {worst:e}"))?;
    Ok(format!("20 states, max amplitude error {worst:.1e}"))
}

fn odd_chain_transfer() -> Outcome {
    let states = random_states(5, 20);
    let spec = chain(5, 1000.0)?;
    let (s, _) = quantum_channel_schedule(&spec, states.len(), 10.0).map_err(err)?;
    let r = run_quantum_channel(&spec, &s, &states, &RunOptions::reduced()).map_err(err)?;
    ensure(r.states.len() == 20, || format!("{} reads", r.states.len()))?;
    let mut worst_phase: f64 = 0.0;
    for t in &r.states {
        ensure(t.fidelity_corrected >= 1.0 - 1e-9, || format!("slot {} fidelity {}", t.slot, t.fidelity_corrected))?;
        let phi = t.relative_phase_corrected.ok_or("no coherence to compare")?;
        worst_phase = worst_phase.max(phi.abs());
    }
    ensure(worst_phase < 1e-6, || format!("phase {worst_phase:e}"))?;

    let spec4 = chain(4, 1000.0)?;
    let s4 = swap_channel_schedule(&spec4, states.len(), 10.0).map_err(err)?;
    let r4 = run_quantum_channel(&spec4, &s4, &states, &RunOptions::reduced()).map_err(err)?;
    let mut worst_pi: f64 = 0.0;
    for t in &r4.states {
        let phi = t.relative_phase_corrected.ok_or("no coherence to compare")?;
        worst_pi = worst_pi.max((phi.abs() - PI).abs());
    }
    ensure(worst_pi < 1e-6, || format!("4-qubit phase off pi by {worst_pi:e}"))?;
    Ok(format!(
        "5 qubits: worst F = {:.12}, |phi| <= {worst_phase:.1e}; 4 qubits: |phi| - pi <= {worst_pi:.1e}",
        r.worst_fidelity_corrected()
    ))
}

fn full_simulation_convergence() -> Outcome {
    let t0 = Instant::now();
    let d = solve_parameters(10.0, 1, 0).map_err(err)?;
    let grid: Vec<f64> = [10.0, 100.0, 1000.0, 10000.0].iter().map(|k| k * d.delta_mhz).collect();
    let spec3 = ChainSpec::new(3, d.delta_mhz, d.xi_mhz).map_err(err)?;
    let rows = sweep_eps_high(&spec3, &d, &grid).map_err(err)?;
    let ys: Vec<f64> = rows.iter().map(|r| r.worst_infidelity).collect();
    ensure(ys.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {ys:?}"))?;
    let slope = loglog_slope(&grid, &ys).ok_or("no slope")?;
    ensure((slope + 2.0).abs() <= 0.5, || format!("slope {slope}"))?;

    let top = *grid.last().expect("non-empty grid");
    let spec5 = ChainSpec::new(5, d.delta_mhz, d.xi_mhz)
        .and_then(|s| s.with_eps_high(top))
        .map_err(err)?;
    let states = random_states(6, 3);
    let (s, _) = quantum_channel_schedule(&spec5, states.len(), d.pulse_width_ns).map_err(err)?;
    let r = run_quantum_channel(&spec5, &s, &states, &RunOptions::full()).map_err(err)?;
    let worst = r.worst_fidelity_corrected();
    ensure(worst > FIDELITY_THRESHOLD, || format!("corrected fidelity {worst}"))?;

    let oracle = support::run_channel(&s, d.delta_mhz, d.xi_mhz, &states, true);
    let oracle_worst = oracle.iter().map(|r| r.1).fold(1.0, f64::min);
    ensure(oracle_worst >= FIDELITY_THRESHOLD + 1e-4, || format!("reference reaches only {oracle_worst}"))?;
    ensure((oracle_worst - worst).abs() < 1e-6, || format!("library {worst} vs reference {oracle_worst}"))?;
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "infidelity {:.2e} -> {:.2e}, slope {slope:.3}; 5-qubit F = {worst:.9} (reference {oracle_worst:.9}) in {:.1?}",
        ys[0],
        ys[ys.len() - 1],
        elapsed
    ))
}

fn copy_table() -> Outcome {
    let d = solve_parameters(10.0, 1, 0).map_err(err)?;
    // (IN, A, B) -> A' as tabulated for the COPY pulse
    let table = [(0, 0, 0, 0), (0, 1, 1, 0), (1, 0, 0, 1), (1, 1, 1, 1)];
    let spec = chain(3, 1000.0)?;
    let reduced = copy_truth_table(&spec, &d, Model::Reduced).map_err(err)?;
    let full = copy_truth_table(&spec, &d, Model::Full).map_err(err)?;
    for (&(i, a, b, a2), (r, f)) in table.iter().zip(reduced.iter().zip(&full)) {
        ensure((r.input, r.a_before, r.b, r.a_after) == (i, a, b, a2), || format!("row {r:?}"))?;
        ensure((r.fidelity - 1.0).abs() < 1e-9, || format!("reduced row {r:?}"))?;
        let bit = |x: u8| SingleQubitState::basis(Basis::from_bit(x as usize));
        let (out, _) = copy_transition(&d, &bit(i), &bit(a), &bit(b)).map_err(err)?;
        ensure(out == Basis::from_bit(a2 as usize), || format!("ideal COPY row {i}{a}{b} gives {out:?}"))?;
        ensure(f.fidelity >= FIDELITY_THRESHOLD, || format!("full row {f:?}"))?;
    }
    let worst = full.iter().map(|f| f.fidelity).fold(1.0, f64::min);
    Ok(format!("4 rows exact in reduced model; full-model worst {worst:.9}"))
}

fn classical_latency() -> Outcome {
    let spec = chain(6, 1000.0)?;
    for pattern in 0..8u8 {
        let bits: Vec<u8> = (0..3).map(|k| (pattern >> (2 - k)) & 1).collect();
        let (s, _) = classical_channel_schedule(&spec, 3, 10.0).map_err(err)?;
        let r = run_classical_channel(&spec, &s, &bits, &RunOptions::full()).map_err(err)?;
        ensure(r.bits_out == bits, || format!("{bits:?} came out as {:?}", r.bits_out))?;
        ensure(r.latency_sequences == 3, || format!("latency {}", r.latency_sequences))?;
    }
    Ok("all 8 three-bit patterns echoed, first bit after 3 sequences".into())
}

fn line_counts() -> Outcome {
    for n in (5..=13).step_by(2) {
        let spec = chain(n, 1000.0)?;
        let (s, lines) = quantum_channel_schedule(&spec, 3, 10.0).map_err(err)?;
        ensure(lines.line_count == 8, || format!("{n} qubits: {} lines", lines.line_count))?;
        let conflicts = line_conflict_check(&s, &lines);
        ensure(conflicts.is_empty(), || format!("{n} qubits: {conflicts:?}"))?;
    }
    for n in (4..=12).step_by(2) {
        let spec = chain(n, 1000.0)?;
        let (s, lines) = classical_channel_schedule(&spec, 3, 10.0).map_err(err)?;
        ensure(lines.line_count == 3 && lines.lines_in_use() == 3, || format!("{n} qubits: {lines:?}"))?;
        let conflicts = line_conflict_check(&s, &lines);
        ensure(conflicts.is_empty(), || format!("{n} qubits: {conflicts:?}"))?;
    }
    Ok("quantum 5..13: 8 lines, classical 4..12: 3 lines, no conflicts".into())
}

fn property_suites() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let n = rng.random_range(1..=5);
        let spec = ChainSpec::new(n, rng.random_range(0.1..50.0), rng.random_range(0.0..50.0)).map_err(err)?;
        let profile = BiasProfile::new((0..n).map(|_| rng.random_range(-200.0..200.0)).collect());
        let h = build_hamiltonian(&spec, &profile).map_err(err)?;
        let herm = (h.matrix() - h.matrix().adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        ensure(herm < 1e-12, || format!("hermiticity {herm:e}"))?;
        let u = Spectrum::new(&h).propagator(rng.random_range(0.0..50.0)).map_err(err)?;
        ensure(u.unitarity_error() < 1e-9, || format!("unitarity {:e}", u.unitarity_error()))?;

        let amps = CVector::from_fn(1 << n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let state = QuantumState::from_amplitudes(n, amps.normalize()).map_err(err)?;
        let q = rng.random_range(0..n);
        let out = reset_qubit(state, q).map_err(err)?;
        ensure((out.state.trace() - 1.0).abs() < 1e-9, || format!("trace {}", out.state.trace()))?;
        let p1: f64 = (0..1 << n).filter(|&i| qubit_bit(i, n, q) == 1).map(|i| out.state.basis_probability(i)).sum();
        ensure(p1 < 1e-12, || format!("reset left P1 {p1:e}"))?;
    }
    for _ in 0..20 {
        let t = rng.random_range(0.5..500.0);
        let nn = rng.random_range(0..4u32);
        let m = 2 * nn + 1 + 2 * rng.random_range(0..3u32);
        let d = solve_parameters(t, m, 2 * nn).map_err(err)?;
        let r = validate_gate_conditions(&d, true);
        ensure(r.ok && r.m_observed == m as i64, || format!("round trip T={t} M={m}: {r:?}"))?;

        let delta = rng.random_range(0.1..100.0);
        let sigma = rng.random_range(-200.0..200.0);
        let osc = oscillation_descriptor(delta, sigma).map_err(err)?;
        ensure((osc.offset - osc.amplitude).abs() < 1e-12, || format!("X {} Y {}", osc.offset, osc.amplitude))?;
        let spectrum = Spectrum::new(&TwoLevelParams::new(delta, sigma).map_err(err)?.hamiltonian());
        for k in 0..10 {
            let time = k as f64 * 0.37;
            let u: UnitaryOperator = spectrum.propagator(time).map_err(err)?;
            let diff = (u.matrix()[(1, 0)].norm_sqr() - osc.probability_at(time)).abs();
            ensure(diff < 1e-9, || format!("Rabi law off by {diff:e} at delta={delta} sigma={sigma} t={time}"))?;
        }
    }
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("hermiticity, unitarity, trace, solver round trip, X = Y, Rabi law in {elapsed:.1?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("parameter point", parameter_point),
        ("frequency conditions", frequency_conditions),
        ("CNOT phases", cnot_phases),
        ("swap phase trace", swap_phase_trace),
        ("odd-chain perfect transfer", odd_chain_transfer),
        ("full-simulation convergence", full_simulation_convergence),
        ("COPY truth table", copy_table),
        ("classical channel latency", classical_latency),
        ("line counts", line_counts),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
