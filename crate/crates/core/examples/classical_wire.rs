//! Classical bits through COPY channels of several lengths, all on three
//! bias lines.

use swapwire::runner::{run_classical_channel, RunOptions};
use swapwire::schedule::classical_channel_schedule;
use swapwire::solver::commensurate_eps_high;
use swapwire::{solve_parameters, ChainSpec};

fn main() -> swapwire::Result<()> {
    let d = solve_parameters(10.0, 1, 0)?;
    let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, 1000.0);
    let bits = [1, 0, 1, 1, 0, 0, 1];
    println!("n_qubits,lines,latency_sequences,echoed,worst_fidelity,makespan_ns");
    for n in [4, 6, 8, 10] {
        let spec = ChainSpec::new(n, d.delta_mhz, d.xi_mhz)?.with_eps_high(eps)?;
        let (schedule, lines) = classical_channel_schedule(&spec, bits.len(), d.pulse_width_ns)?;
        let r = run_classical_channel(&spec, &schedule, &bits, &RunOptions::full())?;
        println!(
            "{n},{},{},{},{:.9},{}",
            lines.lines_in_use(),
            r.latency_sequences,
            r.echoed(),
            r.worst_fidelity(),
            r.makespan_ns
        );
    }
    Ok(())
}
