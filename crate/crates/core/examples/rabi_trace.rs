//! One qubit started in |0⟩: simulated P(|1⟩) against `X - Y cos(2πft)`.

use swapwire::evolve::Spectrum;
use swapwire::solver::oscillation_descriptor;
use swapwire::{solve_parameters, TwoLevelParams};

fn main() -> swapwire::Result<()> {
    let d = solve_parameters(10.0, 1, 0)?;
    for (label, sigma) in [("Sigma = 0", 0.0), ("Sigma = 2 xi", 2.0 * d.xi_mhz)] {
        let osc = oscillation_descriptor(d.delta_mhz, sigma)?;
        let spectrum = Spectrum::new(&TwoLevelParams::new(d.delta_mhz, sigma)?.hamiltonian());
        println!("{label}: X = {:.4}, Y = {:.4}, f = {:.4} MHz", osc.offset, osc.amplitude, osc.frequency_mhz);
        println!("time_ns,p1_simulated,p1_analytic");
        let mut worst: f64 = 0.0;
        for k in 0..=20 {
            let t = k as f64;
            let p1 = spectrum.propagator(t)?.matrix()[(1, 0)].norm_sqr();
            let pa = osc.probability_at(t);
            worst = worst.max((p1 - pa).abs());
            println!("{t},{p1:.9},{pa:.9}");
        }
        println!("max |simulated - analytic| = {worst:.2e}\n");
    }
    Ok(())
}
