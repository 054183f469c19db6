//! Gate parameters for a few pulse widths and the frequencies they imply.

use swapwire::solver::{copy_frequencies, validate_gate_conditions};
use swapwire::{solve_for_timestep, solve_parameters};

fn main() -> swapwire::Result<()> {
    println!("T_ns,M,N,delta_mhz,xi_mhz,f1_mhz,f2_mhz,phase_exact");
    for (t, m, n) in [(10.0, 1, 0), (100.0, 1, 0), (10.0, 3, 0), (10.0, 3, 2), (20.0, 5, 4)] {
        let d = solve_parameters(t, m, n)?;
        let ok = validate_gate_conditions(&d, true).ok;
        println!("{t},{m},{n},{:.6},{:.6},{:.6},{:.6},{ok}", d.delta_mhz, d.xi_mhz, d.f1_mhz(), d.f2_mhz());
    }

    let d = solve_for_timestep(2.5, 1, 0)?;
    println!("\nDelta = 2.5 MHz needs T = {} ns", d.pulse_width_ns);

    let [f0, fmid, f2] = copy_frequencies(d.delta_mhz, d.xi_mhz, 0.0)?;
    println!("COPY frequencies at that design: {f0:.4}, {fmid:.4}, {f2:.4} MHz");

    match solve_parameters(10.0, 1, 1) {
        Ok(_) => println!("unexpected: M = N = 1 solved"),
        Err(e) => println!("M = N = 1: {e}"),
    }
    Ok(())
}
