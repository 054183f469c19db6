//! Random states pipelined down a seven-qubit swap channel on the full chain
//! model, with and without the idle-qubit frame correction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use swapwire::runner::{run_quantum_channel, RunOptions};
use swapwire::schedule::quantum_channel_schedule;
use swapwire::solver::commensurate_eps_high;
use swapwire::{solve_parameters, ChainSpec, SingleQubitState};

fn main() -> swapwire::Result<()> {
    let d = solve_parameters(10.0, 1, 0)?;
    let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, 1000.0);
    let spec = ChainSpec::new(7, d.delta_mhz, d.xi_mhz)?.with_eps_high(eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let states: Vec<_> = (0..3).map(|_| SingleQubitState::random(&mut rng)).collect();

    let (schedule, lines) = quantum_channel_schedule(&spec, states.len(), d.pulse_width_ns)?;
    println!(
        "{} windows, {} pulses, {} ns, {} bias lines",
        schedule.windows.len(),
        schedule.pulse_count(),
        schedule.makespan_ns(),
        lines.line_count
    );

    let report = run_quantum_channel(&spec, &schedule, &states, &RunOptions::full())?;
    println!("slot,arrival_window,fidelity_raw,fidelity_corrected,phase_corrected,purity");
    for s in &report.states {
        println!(
            "{},{},{:.6},{:.9},{:.2e},{:.9}",
            s.slot,
            s.arrival_window,
            s.fidelity_raw,
            s.fidelity_corrected,
            s.relative_phase_corrected.unwrap_or(0.0),
            s.purity
        );
    }

    let reduced = run_quantum_channel(&spec, &schedule, &states, &RunOptions::reduced())?;
    println!("reduced model worst fidelity: {:.12}", reduced.worst_fidelity_corrected());
    Ok(())
}
