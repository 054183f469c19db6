//! Bias-line maps for quantum and classical channels, checked against their
//! own schedules, and the sacrificial-qubit replay of each schedule.

use swapwire::schedule::{
    classical_channel_schedule, line_conflict_check, misrouted_reads, quantum_channel_schedule_with, replay, BitExpr,
    LineScheme,
};
use swapwire::{solve_parameters, ChainSpec};

fn main() -> swapwire::Result<()> {
    let d = solve_parameters(10.0, 1, 0)?;
    println!("kind,n_qubits,lines_in_use,declared,conflicts,violations,misrouted");
    for n in [5, 7, 9, 11, 13, 15] {
        let spec = ChainSpec::new(n, d.delta_mhz, d.xi_mhz)?;
        for scheme in [LineScheme::Mod6, LineScheme::Mod3] {
            let (s, lines) = quantum_channel_schedule_with(&spec, 3, d.pulse_width_ns, scheme)?;
            let r = replay(&s, &vec![BitExpr::zero(); n]);
            println!(
                "quantum/{scheme:?},{n},{},{},{},{},{}",
                lines.lines_in_use(),
                lines.line_count,
                line_conflict_check(&s, &lines).len(),
                r.violations.len(),
                misrouted_reads(&r).len()
            );
        }
    }
    for n in [4, 6, 8, 12, 16] {
        let spec = ChainSpec::new(n, d.delta_mhz, d.xi_mhz)?;
        let (s, lines) = classical_channel_schedule(&spec, 4, d.pulse_width_ns)?;
        let r = replay(&s, &vec![BitExpr::zero(); n]);
        println!(
            "classical,{n},{},{},{},{},{}",
            lines.lines_in_use(),
            lines.line_count,
            line_conflict_check(&s, &lines).len(),
            r.violations.len(),
            misrouted_reads(&r).len()
        );
    }
    Ok(())
}
