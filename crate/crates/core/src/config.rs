//! Run configuration files (TOML).
//!
//! ```toml
//! experiment = "quantum_wire"
//! seed = 7
//!
//! [design]
//! pulse_width_ns = 10.0
//!
//! [chain]
//! n_qubits = 5
//! eps_high_policy = "commensurate"
//! eps_high_factor = 1000.0
//!
//! [run]
//! model = "full"
//! states = 2
//!
//! [checks]
//! min_fidelity = 0.999
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::runner::{Backend, Model, RunOptions};
use crate::schedule::LineScheme;
use crate::solver::{commensurate_eps_high, solve_for_timestep, solve_parameters, validate_gate_conditions, GateDesign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    QuantumWire,
    ClassicalWire,
    CopyTable,
    Gate,
    EpsSweep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub design: DesignConfig,
    pub chain: ChainConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub checks: Checks,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

/// Either `pulse_width_ns` or `delta_mhz` must be given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub pulse_width_ns: Option<f64>,
    pub delta_mhz: Option<f64>,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default)]
    pub n: u32,
    #[serde(default = "yes")]
    pub phase_exact: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsHighPolicy {
    /// Smallest `k/T` at or above `eps_high_factor · Δ`.
    #[default]
    Commensurate,
    /// Exactly `eps_high_factor · Δ`.
    Multiple,
    /// `eps_high_mhz` as given.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n_qubits: usize,
    #[serde(default)]
    pub eps_high_policy: EpsHighPolicy,
    pub eps_high_factor: Option<f64>,
    pub eps_high_mhz: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default)]
    pub model: Model,
    #[serde(default)]
    pub backend: Backend,
    /// Number of random states sent down a quantum wire.
    pub states: Option<usize>,
    /// Bits clocked through a classical wire.
    pub bits: Option<Vec<u8>>,
    /// Idle-bias grid for `eps_sweep`, in units of Δ.
    pub eps_grid_factors: Option<Vec<f64>>,
    #[serde(default)]
    pub line_scheme: LineScheme,
    #[serde(default)]
    pub trajectory: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Relative paths are taken from the config file's directory.
    pub dir: Option<PathBuf>,
    pub report: Option<String>,
    pub csv: Option<String>,
}

/// Assertions evaluated after the run; any failure gives a non-zero exit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    pub min_fidelity: Option<f64>,
    pub max_phase_rad: Option<f64>,
    pub expected_latency_sequences: Option<usize>,
    #[serde(default)]
    pub bits_echo: bool,
    pub slope_min: Option<f64>,
    pub slope_max: Option<f64>,
}

fn config_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        location: location.into(),
        message: message.into(),
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

impl RunConfig {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let (l, c) = line_col(text, span.start);
                    format!("{origin}:{l}:{c}")
                }
                None => origin.to_string(),
            };
            config_err(location, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(path.display().to_string(), e.to_string()))?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        match (self.design.pulse_width_ns, self.design.delta_mhz) {
            (Some(_), Some(_)) => {
                return Err(config_err("design", "give either pulse_width_ns or delta_mhz, not both"));
            }
            (None, None) => return Err(config_err("design", "one of pulse_width_ns or delta_mhz is required")),
            _ => {}
        }
        match self.chain.eps_high_policy {
            EpsHighPolicy::Fixed if self.chain.eps_high_mhz.is_none() => {
                return Err(config_err("chain.eps_high_mhz", "required when eps_high_policy = \"fixed\""));
            }
            EpsHighPolicy::Commensurate | EpsHighPolicy::Multiple if self.chain.eps_high_mhz.is_some() => {
                return Err(config_err("chain.eps_high_mhz", "only used with eps_high_policy = \"fixed\""));
            }
            _ => {}
        }
        if let Some(f) = self.chain.eps_high_factor {
            if !(f.is_finite() && f > 0.0) {
                return Err(config_err("chain.eps_high_factor", format!("must be positive, got {f}")));
            }
        }
        match self.experiment {
            Experiment::QuantumWire => {
                if self.run.states.unwrap_or(1) == 0 {
                    return Err(config_err("run.states", "must be at least 1"));
                }
                if self.seed.is_none() {
                    return Err(config_err("seed", "required: quantum_wire sends random states"));
                }
            }
            Experiment::ClassicalWire => {
                let bits = self
                    .run
                    .bits
                    .as_ref()
                    .ok_or_else(|| config_err("run.bits", "required for classical_wire"))?;
                if bits.is_empty() || bits.iter().any(|&b| b > 1) {
                    return Err(config_err("run.bits", "must be a non-empty list of 0/1"));
                }
            }
            Experiment::EpsSweep => {
                let grid = self
                    .run
                    .eps_grid_factors
                    .as_ref()
                    .ok_or_else(|| config_err("run.eps_grid_factors", "required for eps_sweep"))?;
                if grid.is_empty() || grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                    return Err(config_err("run.eps_grid_factors", "must be a non-empty list of positive numbers"));
                }
                if self.chain.n_qubits != 3 {
                    return Err(config_err("chain.n_qubits", "must be 3 for this experiment"));
                }
            }
            Experiment::CopyTable | Experiment::Gate => {
                if self.chain.n_qubits != 3 {
                    return Err(config_err("chain.n_qubits", "must be 3 for this experiment"));
                }
            }
        }
        Ok(())
    }

    /// Solves the gate design; infeasible designs are physics errors.
    pub fn gate_design(&self) -> Result<GateDesign> {
        let d = &self.design;
        let design = match (d.pulse_width_ns, d.delta_mhz) {
            (Some(t), _) => solve_parameters(t, d.m, d.n)?,
            (None, Some(delta)) => solve_for_timestep(delta, d.m, d.n)?,
            (None, None) => unreachable!("checked in validate"),
        };
        if d.phase_exact && !validate_gate_conditions(&design, true).ok {
            return Err(Error::Infeasible(format!(
                "M = {} and N = {} do not give exact CNOT phases (need M odd, N even)",
                d.m, d.n
            )));
        }
        Ok(design)
    }

    pub fn eps_high_mhz(&self, design: &GateDesign) -> f64 {
        let factor = self.chain.eps_high_factor.unwrap_or(1000.0);
        match self.chain.eps_high_policy {
            EpsHighPolicy::Commensurate => commensurate_eps_high(design.delta_mhz, design.pulse_width_ns, factor),
            EpsHighPolicy::Multiple => factor * design.delta_mhz,
            EpsHighPolicy::Fixed => self.chain.eps_high_mhz.expect("checked in validate"),
        }
    }

    pub fn chain_spec(&self, design: &GateDesign) -> Result<ChainSpec> {
        ChainSpec::new(self.chain.n_qubits, design.delta_mhz, design.xi_mhz)?.with_eps_high(self.eps_high_mhz(design))
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            model: self.run.model,
            backend: self.run.backend,
            record_trajectory: self.run.trajectory,
            ..RunOptions::default()
        }
    }

    /// Output directory, resolved against `base` when relative.
    pub fn output_dir(&self, base: &Path) -> PathBuf {
        match &self.output.dir {
            Some(d) if d.is_absolute() => d.clone(),
            Some(d) => base.join(d),
            None => base.join("out"),
        }
    }
}
