//! How close the full chain gets to the ideal CNOT and to a perfect wire as
//! the idle bias grows.

use swapwire::runner::{loglog_slope, run_quantum_channel, sweep_eps_high, RunOptions};
use swapwire::schedule::quantum_channel_schedule;
use swapwire::{solve_parameters, ChainSpec, SingleQubitState};

fn main() -> swapwire::Result<()> {
    let design = solve_parameters(10.0, 1, 0)?;
    let spec = ChainSpec::new(3, design.delta_mhz, design.xi_mhz)?;
    let grid: Vec<f64> = [10.0, 100.0, 1000.0, 10000.0].iter().map(|k| k * design.delta_mhz).collect();

    let rows = sweep_eps_high(&spec, &design, &grid)?;
    println!("eps_high_mhz,eps_over_delta,worst_infidelity,distance");
    for r in &rows {
        println!("{},{},{:.3e},{:.3e}", r.eps_high_mhz, r.eps_over_delta, r.worst_infidelity, r.distance);
    }
    let ys: Vec<f64> = rows.iter().map(|r| r.worst_infidelity).collect();
    if let Some(slope) = loglog_slope(&grid, &ys) {
        println!("log-log slope: {slope:.3}");
    }

    let input = SingleQubitState::from_bloch(1.2, 0.7);
    println!("\n5-qubit wire, one state");
    println!("eps_high_mhz,fidelity_raw,fidelity_corrected,purity");
    for &eps in &grid {
        let chain = ChainSpec::new(5, design.delta_mhz, design.xi_mhz)?.with_eps_high(eps)?;
        let (schedule, _) = quantum_channel_schedule(&chain, 1, design.pulse_width_ns)?;
        let report = run_quantum_channel(&chain, &schedule, &[input], &RunOptions::full())?;
        let s = &report.states[0];
        println!("{eps},{:.9},{:.9},{:.9}", s.fidelity_raw, s.fidelity_corrected, s.purity);
    }
    Ok(())
}
