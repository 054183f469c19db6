//! Command-line front end behind the `swapwire` binary.
//!
//! Exit codes: 0 success, 1 bad arguments or configuration, 2 infeasible
//! physics, 3 a check or schedule validation failed.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{ChainSpec, TwoLevelParams};
use crate::config::{Experiment, RunConfig};
use crate::error::Error;
use crate::evolve::{write_trajectory_csv, SingleQubitState, Spectrum};
use crate::runner::{
    copy_truth_table, loglog_slope, run_classical_channel, run_gate_experiment, run_quantum_channel, sweep_eps_high,
};
use crate::schedule::{
    classical_channel_schedule, line_conflict_check, misrouted_reads, quantum_channel_schedule_with, replay, BitExpr,
    LineConflict, LineScheme, ReadRecord, ScheduleDocument, Violation,
};
use crate::solver::{
    commensurate_eps_high, oscillation_descriptor, solve_for_timestep, solve_parameters, validate_gate_conditions,
    GateConditionReport, GateDesign,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_PHYSICS: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "swapwire", version, about = "Gate design, pulse schedules and simulation for pulsed-bias qubit chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for Δ and ξ given a pulse width, or for the pulse width given Δ.
    Solve(SolveArgs),
    /// Run the experiment described by a TOML config.
    Run(RunArgs),
    /// Single-qubit P(|1⟩) over time, simulated and analytic.
    Trace(TraceArgs),
    /// Emit a channel schedule as JSON.
    Schedule(ScheduleArgs),
    /// Check a schedule JSON file without simulating it.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["t_ns", "delta_mhz"])))]
pub struct SolveArgs {
    #[arg(long)]
    pub t_ns: Option<f64>,
    #[arg(long)]
    pub delta_mhz: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Accept designs whose CNOT phases are not exact (M even or N odd).
    #[arg(long)]
    pub allow_inexact_phase: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Overrides `output.dir` from the config.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub delta_mhz: f64,
    /// Effective bias Σ seen by the qubit.
    #[arg(long, default_value_t = 0.0)]
    pub sigma_mhz: f64,
    #[arg(long)]
    pub duration_ns: f64,
    #[arg(long, default_value_t = 501)]
    pub samples: usize,
    #[arg(long, default_value = "trace.csv")]
    pub out: PathBuf,
    /// Defaults to the CSV path with a `.gp` extension.
    #[arg(long)]
    pub plot_script: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScheduleKind {
    Quantum,
    Classical,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SchemeArg {
    Mod6,
    Mod3,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, value_enum)]
    pub kind: ScheduleKind,
    #[arg(long)]
    pub n_qubits: usize,
    /// States (quantum) or bits (classical) to send.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 10.0)]
    pub t_ns: f64,
    /// Idle bias, in units of Δ, rounded up to a whole number of cycles per pulse.
    #[arg(long, default_value_t = 1000.0)]
    pub eps_high_factor: f64,
    #[arg(long, value_enum, default_value = "mod6")]
    pub line_scheme: SchemeArg,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub schedule: PathBuf,
}

/// A command that did not succeed, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_physics() { EXIT_PHYSICS } else { EXIT_CONFIG };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Solve(a) => solve(&a, out),
        Command::Run(a) => run(&a, out),
        Command::Trace(a) => trace(&a, out),
        Command::Schedule(a) => schedule(&a, out),
        Command::Validate(a) => validate(&a, out),
    }
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> std::result::Result<Vec<u8>, Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(Error::from)?;
    }
    w.into_inner().map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: e.to_string(),
    })
}

#[derive(Serialize)]
struct SolveOutput {
    design: GateDesign,
    f1_mhz: f64,
    f2_mhz: f64,
    conditions: GateConditionReport,
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult {
    let design = match (a.t_ns, a.delta_mhz) {
        (Some(t), _) => solve_parameters(t, a.m, a.n)?,
        (None, Some(d)) => solve_for_timestep(d, a.m, a.n)?,
        (None, None) => unreachable!("clap requires one"),
    };
    let conditions = validate_gate_conditions(&design, !a.allow_inexact_phase);
    if !conditions.ok {
        return Err(Error::Infeasible(format!(
            "M = {} and N = {} do not give exact CNOT phases (need M odd, N even; pass --allow-inexact-phase to accept)",
            a.m, a.n
        ))
        .into());
    }
    let output = SolveOutput {
        f1_mhz: design.f1_mhz(),
        f2_mhz: design.f2_mhz(),
        design,
        conditions,
    };
    out.write_all(json(&output)?.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub limit: f64,
}

fn at_least(name: &str, observed: f64, limit: f64) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: observed >= limit,
        observed,
        limit,
    }
}

fn at_most(name: &str, observed: f64, limit: f64) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: observed <= limit,
        observed,
        limit,
    }
}

#[derive(Serialize)]
struct RunReport<T: Serialize> {
    experiment: Experiment,
    seed: Option<u64>,
    design: GateDesign,
    eps_high_mhz: f64,
    result: T,
    checks: Vec<CheckResult>,
    passed: bool,
}

#[derive(Serialize)]
struct SweepResult {
    rows: Vec<crate::runner::SweepRow>,
    loglog_slope: Option<f64>,
}

#[derive(Serialize)]
struct StateRow {
    slot: usize,
    fidelity_raw: f64,
    fidelity_corrected: f64,
    relative_phase_raw: Option<f64>,
    relative_phase_corrected: Option<f64>,
    arrival_window: usize,
    purity: f64,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    fn write(&self, out: &mut dyn Write) -> CliResult {
        for (name, bytes) in &self.files {
            let path = self.dir.join(name);
            write_atomic(&path, bytes)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        Ok(())
    }
}

fn finish<T: Serialize>(
    cfg: &RunConfig,
    design: GateDesign,
    eps_high_mhz: f64,
    result: T,
    checks: Vec<CheckResult>,
    mut outputs: Outputs,
    out: &mut dyn Write,
) -> CliResult {
    let passed = checks.iter().all(|c| c.passed);
    let report = RunReport {
        experiment: cfg.experiment,
        seed: cfg.seed,
        design,
        eps_high_mhz,
        result,
        checks,
        passed,
    };
    let name = cfg.output.report.clone().unwrap_or_else(|| "report.json".into());
    outputs.files.insert(0, (name, json(&report)?.into_bytes()));
    outputs.write(out)?;
    for c in &report.checks {
        let verdict = if c.passed { "ok" } else { "FAILED" };
        writeln!(out, "check {}: {verdict} (observed {}, limit {})", c.name, c.observed, c.limit)?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CHECK,
            message: "one or more checks failed".into(),
        })
    }
}

fn run(a: &RunArgs, out: &mut dyn Write) -> CliResult {
    let cfg = RunConfig::load(&a.config)?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let dir = a.out_dir.clone().unwrap_or_else(|| cfg.output_dir(base));
    let design = cfg.gate_design()?;
    let spec = cfg.chain_spec(&design)?;
    let eps = spec.eps_high_mhz;
    let options = cfg.run_options();
    let checks_cfg = &cfg.checks;
    let mut outputs = Outputs { dir, files: Vec::new() };
    let csv_name = |default: &str| cfg.output.csv.clone().unwrap_or_else(|| default.to_string());
    let mut checks = Vec::new();

    match cfg.experiment {
        Experiment::QuantumWire => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.expect("checked in validate"));
            let states: Vec<SingleQubitState> =
                (0..cfg.run.states.unwrap_or(1)).map(|_| SingleQubitState::random(&mut rng)).collect();
            let (schedule, _) = quantum_channel_schedule_with(&spec, states.len(), design.pulse_width_ns, cfg.run.line_scheme)?;
            let report = run_quantum_channel(&spec, &schedule, &states, &options)?;
            if let Some(min) = checks_cfg.min_fidelity {
                checks.push(at_least("min_fidelity", report.worst_fidelity_corrected(), min));
            }
            if let Some(max) = checks_cfg.max_phase_rad {
                let worst = report
                    .states
                    .iter()
                    .filter_map(|s| s.relative_phase_corrected)
                    .map(f64::abs)
                    .fold(0.0, f64::max);
                checks.push(at_most("max_phase_rad", worst, max));
            }
            let rows: Vec<StateRow> = report
                .states
                .iter()
                .map(|s| StateRow {
                    slot: s.slot,
                    fidelity_raw: s.fidelity_raw,
                    fidelity_corrected: s.fidelity_corrected,
                    relative_phase_raw: s.relative_phase_raw,
                    relative_phase_corrected: s.relative_phase_corrected,
                    arrival_window: s.arrival_window,
                    purity: s.purity,
                })
                .collect();
            outputs.add(csv_name("states.csv"), csv_bytes(&rows)?);
            if !report.trajectory.is_empty() {
                let mut buf = Vec::new();
                write_trajectory_csv(&report.trajectory, spec.n_qubits, &mut buf)?;
                outputs.add("trajectory.csv", buf);
            }
            finish(&cfg, design, eps, report, checks, outputs, out)
        }
        Experiment::ClassicalWire => {
            let bits = cfg.run.bits.clone().expect("checked in validate");
            let (schedule, _) = classical_channel_schedule(&spec, bits.len(), design.pulse_width_ns)?;
            let report = run_classical_channel(&spec, &schedule, &bits, &options)?;
            if checks_cfg.bits_echo {
                let wrong = report.bits_in.iter().zip(&report.bits_out).filter(|(a, b)| a != b).count()
                    + report.bits_in.len().abs_diff(bits.len());
                checks.push(at_most("bits_echo_errors", wrong as f64, 0.0));
            }
            if let Some(lat) = checks_cfg.expected_latency_sequences {
                let observed = report.latency_sequences as f64;
                checks.push(CheckResult {
                    name: "latency_sequences".into(),
                    passed: report.latency_sequences == lat,
                    observed,
                    limit: lat as f64,
                });
            }
            if let Some(min) = checks_cfg.min_fidelity {
                checks.push(at_least("min_fidelity", report.worst_fidelity(), min));
            }
            outputs.add(csv_name("bits.csv"), csv_bytes(&report.transfers)?);
            finish(&cfg, design, eps, report, checks, outputs, out)
        }
        Experiment::CopyTable => {
            let rows = copy_truth_table(&spec, &design, cfg.run.model)?;
            if let Some(min) = checks_cfg.min_fidelity {
                checks.push(at_least("min_fidelity", rows.iter().map(|r| r.fidelity).fold(1.0, f64::min), min));
            }
            outputs.add(csv_name("copy_table.csv"), csv_bytes(&rows)?);
            finish(&cfg, design, eps, rows, checks, outputs, out)
        }
        Experiment::Gate => {
            let report = run_gate_experiment(&spec, &design, cfg.run.model)?;
            if let Some(min) = checks_cfg.min_fidelity {
                checks.push(at_least("min_fidelity", 1.0 - report.worst_infidelity, min));
            }
            outputs.add(csv_name("truth_table.csv"), csv_bytes(&report.truth_table)?);
            finish(&cfg, design, eps, report, checks, outputs, out)
        }
        Experiment::EpsSweep => {
            let grid: Vec<f64> = cfg
                .run
                .eps_grid_factors
                .as_ref()
                .expect("checked in validate")
                .iter()
                .map(|k| k * design.delta_mhz)
                .collect();
            let rows = sweep_eps_high(&spec, &design, &grid)?;
            let ys: Vec<f64> = rows.iter().map(|r| r.worst_infidelity).collect();
            let slope = loglog_slope(&grid, &ys);
            let s = slope.unwrap_or(f64::NAN);
            if let Some(lo) = checks_cfg.slope_min {
                checks.push(at_least("slope_min", s, lo));
            }
            if let Some(hi) = checks_cfg.slope_max {
                checks.push(at_most("slope_max", s, hi));
            }
            outputs.add(csv_name("sweep.csv"), csv_bytes(&rows)?);
            let result = SweepResult { rows, loglog_slope: slope };
            finish(&cfg, design, eps, result, checks, outputs, out)
        }
    }
}

fn default_plot_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

fn trace(a: &TraceArgs, out: &mut dyn Write) -> CliResult {
    if !(a.duration_ns >= 0.0 && a.duration_ns.is_finite()) {
        return Err(Error::NegativeDuration(a.duration_ns).into());
    }
    let params = TwoLevelParams::new(a.delta_mhz, a.sigma_mhz)?;
    let analytic = oscillation_descriptor(a.delta_mhz, a.sigma_mhz)?;
    let spectrum = Spectrum::new(&params.hamiltonian());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["time_ns", "p1_simulated", "p1_analytic"]).map_err(Error::from)?;
    if a.duration_ns > 0.0 && a.samples > 0 {
        let steps = a.samples.saturating_sub(1).max(1);
        for k in 0..a.samples {
            let t = a.duration_ns * k as f64 / steps as f64;
            let u = spectrum.propagator(t)?;
            let p1 = u.matrix()[(1, 0)].norm_sqr();
            w.write_record([t.to_string(), p1.to_string(), analytic.probability_at(t).to_string()])
                .map_err(Error::from)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: e.to_string(),
    })?;
    write_atomic(&a.out, &bytes)?;
    let plot = a.plot_script.clone().unwrap_or_else(|| default_plot_path(&a.out));
    let csv_name = a.out.file_name().map_or_else(|| a.out.display().to_string(), |n| n.to_string_lossy().into_owned());
    let script = format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'time (ns)'\n\
         set ylabel 'P(|1>)'\n\
         set yrange [-0.05:1.05]\n\
         plot '{csv_name}' using 1:2 with lines title 'simulated', \\\n     '{csv_name}' using 1:3 with points pt 7 ps 0.4 title 'analytic'\n"
    );
    write_atomic(&plot, script.as_bytes())?;
    writeln!(
        out,
        "wrote {} and {} (f = {} MHz)",
        a.out.display(),
        plot.display(),
        analytic.frequency_mhz
    )?;
    Ok(())
}

fn schedule(a: &ScheduleArgs, out: &mut dyn Write) -> CliResult {
    let design = solve_parameters(a.t_ns, 1, 0)?;
    let eps = commensurate_eps_high(design.delta_mhz, design.pulse_width_ns, a.eps_high_factor);
    let spec = ChainSpec::new(a.n_qubits, design.delta_mhz, design.xi_mhz)?.with_eps_high(eps)?;
    let (schedule, lines) = match a.kind {
        ScheduleKind::Quantum => {
            let scheme = match a.line_scheme {
                SchemeArg::Mod6 => LineScheme::Mod6,
                SchemeArg::Mod3 => LineScheme::Mod3,
            };
            quantum_channel_schedule_with(&spec, a.count, design.pulse_width_ns, scheme)?
        }
        ScheduleKind::Classical => classical_channel_schedule(&spec, a.count, design.pulse_width_ns)?,
    };
    let text = ScheduleDocument { schedule, lines }.to_json()?;
    match &a.out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidationOutput<'a> {
    ok: bool,
    windows: usize,
    pulses: usize,
    violations: &'a [Violation],
    line_conflicts: &'a [LineConflict],
    misrouted_reads: Vec<&'a ReadRecord>,
}

fn validate(a: &ValidateArgs, out: &mut dyn Write) -> CliResult {
    let text = std::fs::read_to_string(&a.schedule)?;
    let doc = ScheduleDocument::from_json(&text).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("{}: {e}", a.schedule.display()),
    })?;
    let n = doc.schedule.n_qubits;
    let r = replay(&doc.schedule, &vec![BitExpr::zero(); n]);
    let conflicts = line_conflict_check(&doc.schedule, &doc.lines);
    let misrouted = misrouted_reads(&r);
    let ok = r.violations.is_empty() && conflicts.is_empty() && misrouted.is_empty();
    let summary = ValidationOutput {
        ok,
        windows: doc.schedule.windows.len(),
        pulses: doc.schedule.pulse_count(),
        violations: &r.violations,
        line_conflicts: &conflicts,
        misrouted_reads: misrouted,
    };
    out.write_all(json(&summary)?.as_bytes())?;
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CHECK,
            message: "schedule failed validation".into(),
        })
    }
}
