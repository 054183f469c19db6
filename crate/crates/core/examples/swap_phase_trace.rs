//! Follows the |0⟩ and |1⟩ branches of a state through ideal swaps from one
//! end of a chain to the other. The relative phase is 0 on odd chains and π
//! on even ones.

use swapwire::evolve::CVector;
use swapwire::gates::{chain_transfer_ops, ideal_cnot, track_phases};
use swapwire::C64;

fn main() -> swapwire::Result<()> {
    let cnot = ideal_cnot();
    println!("n_qubits,swaps,phase_of_0,phase_of_1,relative_phase");
    for n in 2..=9 {
        let ops = chain_transfer_ops(n, &cnot);
        let mut input = CVector::zeros(1 << n);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        input[0] = C64::new(h, 0.0);
        input[1 << (n - 1)] = C64::new(h, 0.0);
        let ledger = track_phases(&ops, &input, n)?;
        let p0 = ledger.branch(0).map(|b| b.phase).unwrap_or(f64::NAN);
        let p1 = ledger.branch(1 << (n - 1)).map(|b| b.phase).unwrap_or(f64::NAN);
        let rel = ledger.relative_phase(0, 1 << (n - 1)).unwrap_or(f64::NAN);
        println!("{n},{},{p0:.6},{p1:.6},{rel:.6}", n - 1);
    }
    Ok(())
}
