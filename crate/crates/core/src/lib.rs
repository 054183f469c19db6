//! Simulation, parameter solving and pulse scheduling for qubit chains whose
//! couplings are fixed and whose only control is a per-qubit bias.
//!
//! A target qubit held at zero bias next to a control qubit realises a CNOT up
//! to phases; three such pulses make a swap, and pipelined swaps move quantum
//! states down an odd-length chain with every phase cancelled on arrival. For
//! classical bits a single COPY pulse per hop suffices and three bias lines
//! drive a chain of any length.
//!
//! Modules:
//! - [`chain`]: device parameters and the chain Hamiltonian with its two-level reductions
//! - [`evolve`]: exact piecewise-constant evolution, partial traces, reset and inject
//! - [`solver`]: oscillation formulas and closed-form gate parameters
//! - [`gates`]: ideal CNOT/SWAP/COPY gates and branch-phase bookkeeping
//! - [`schedule`]: pulse schedules, bias-line assignment and static checks
//! - [`runner`]: end-to-end experiments on the full or reduced model
//! - [`config`] and [`cli`]: run configuration files and the command-line front end

pub mod chain;
pub mod cli;
pub mod config;
pub mod error;
pub mod evolve;
pub mod gates;
pub mod runner;
pub mod schedule;
pub mod solver;
pub mod units;

pub use chain::{
    build_hamiltonian, reduce_to_target, Basis, BiasProfile, ChainSpec, HermitianOperator, TwoLevelParams, C64,
};
pub use error::{Error, Result};
pub use evolve::{
    inject_state, propagator, reduced_state, reset_qubit, sample_probability, QuantumState, SingleQubitState,
    UnitaryOperator,
};
pub use solver::{solve_for_timestep, solve_parameters, GateDesign, OscillationDescriptor};
