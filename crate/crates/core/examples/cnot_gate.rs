//! The CNOT a single zero-bias pulse produces, in the two-level reduction and
//! on the full three-qubit chain.

use swapwire::gates::reduced_cnot;
use swapwire::runner::{run_gate_experiment, Model};
use swapwire::solver::commensurate_eps_high;
use swapwire::{solve_parameters, ChainSpec};

fn main() -> swapwire::Result<()> {
    let d = solve_parameters(10.0, 1, 0)?;
    let g = reduced_cnot(&d)?;
    println!("reduced-model gate on |control, target>:");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| {
                let z = g.matrix()[(r, c)];
                format!("{:>6.3}{:+.3}i", z.re, z.im)
            })
            .collect();
        println!("  {}", row.join("  "));
    }

    for factor in [100.0, 1000.0] {
        let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, factor);
        let spec = ChainSpec::new(3, d.delta_mhz, d.xi_mhz)?.with_eps_high(eps)?;
        let r = run_gate_experiment(&spec, &d, Model::Full)?;
        println!("\nfull chain, eps_high = {eps} MHz: distance {:.2e}, worst infidelity {:.2e}", r.distance, r.worst_infidelity);
        for row in &r.truth_table {
            println!(
                "  |{}{}> -> |{}{}>  p = {:.9}",
                row.control, row.target_in, row.control, row.target_expected, row.fidelity
            );
        }
    }
    Ok(())
}
