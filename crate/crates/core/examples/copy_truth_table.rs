//! COPY on (IN, A, B) with A = B beforehand: A flips iff IN differs from B.

use swapwire::runner::{copy_truth_table, Model};
use swapwire::solver::commensurate_eps_high;
use swapwire::{solve_parameters, ChainSpec};

fn main() -> swapwire::Result<()> {
    let d = solve_parameters(10.0, 1, 0)?;
    let eps = commensurate_eps_high(d.delta_mhz, d.pulse_width_ns, 1000.0);
    let spec = ChainSpec::new(3, d.delta_mhz, d.xi_mhz)?.with_eps_high(eps)?;
    for model in [Model::Reduced, Model::Full] {
        println!("{model:?} model");
        println!("  IN A B -> A'  flipped  fidelity");
        for r in copy_truth_table(&spec, &d, model)? {
            println!("   {}  {} {} ->  {}  {:<7}  {:.9}", r.input, r.a_before, r.b, r.a_after, r.flipped, r.fidelity);
        }
    }
    Ok(())
}
