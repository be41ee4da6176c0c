//! The `qles` command line: one subcommand per subsystem, each reading an
//! optional JSON config and writing CSV/JSON artifacts plus a
//! `manifest.json` into the output directory.
//!
//! Exit codes: 0 on success, 1 when a computation ran but did not converge,
//! 2 for usage or configuration errors.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ae::{
    chebae_estimate, model_query_complexity, signed_estimate, AeConfig, CoinOracle, Sampling, ShiftConvention,
};
use crate::burnin::{rebuild_slope_model, BurnInGrid};
use crate::noise::{run_noisy_sweep, NoiseScale, NoiseTarget, SweepOptions};
use crate::nozzle::{build_case, run_outer_loop, Regime, SolverKind};
use crate::resources::{build_table, write_table_csv, CostBasis, ErrorCorrectionParams, FixtureSet};
use crate::rng::substream;
use crate::{Error, Result};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qles",
    version,
    about = "Measurement and resource modelling for quantum linear solvers in a nozzle CFD loop"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON config for the subcommand; defaults are used when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads for parallel subcommands.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Noiseless outer loop; writes history.csv and summary.json.
    Solve,
    /// Noisy outer loop over an (ε, α, trial) grid; writes sweep.csv.
    Sweep,
    /// Repeated amplitude-estimation trials; writes trials.json and aggregate.json.
    Ae,
    /// Rebuilds the burn-in slope model; writes slopes.csv and coefficients.json.
    Burnin,
    /// Regenerates the resource tables; writes table_model.csv and table_reported.csv.
    Resources,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Ae => "ae",
            Command::Burnin => "burnin",
            Command::Resources => "resources",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub stations: usize,
    pub regime: Regime,
    pub solver: SolverKind,
    pub eps_tol: f64,
    pub max_outer_iterations: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            stations: 8,
            regime: Regime::Incompressible,
            solver: SolverKind::Simple,
            eps_tol: 1e-9,
            max_outer_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub stations: usize,
    pub regime: Regime,
    pub solver: SolverKind,
    pub eps: Vec<f64>,
    pub alpha: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub iteration_cap: usize,
    pub scale: NoiseScale,
    pub target: NoiseTarget,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            stations: 8,
            regime: Regime::Incompressible,
            solver: SolverKind::Simple,
            eps: vec![1e-5, 1e-4, 1e-3, 1e-2],
            alpha: vec![0.0, 0.5, 0.9],
            trials: 5,
            seed: 0,
            iteration_cap: 100_000,
            scale: NoiseScale::default(),
            target: NoiseTarget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AeRunConfig {
    pub a: f64,
    pub eps: f64,
    pub delta: f64,
    pub trials: usize,
    pub signed: bool,
    pub seed: u64,
    pub degree_cap: u64,
    pub shots_per_round: u64,
    pub margin: f64,
    pub convention: ShiftConvention,
}

impl Default for AeRunConfig {
    fn default() -> Self {
        let ae = AeConfig::default();
        Self {
            a: 0.5,
            eps: ae.eps,
            delta: ae.delta,
            trials: 200,
            signed: false,
            seed: 0,
            degree_cap: ae.degree_cap,
            shots_per_round: ae.shots_per_round,
            margin: ae.margin,
            convention: ae.convention,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BurninConfig {
    pub qubits: Vec<u32>,
    pub a_max: Vec<f64>,
    pub shots: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for BurninConfig {
    fn default() -> Self {
        let g = BurnInGrid::default();
        Self { qubits: g.qubits, a_max: g.a_max, shots: g.shots, trials: 10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResourcesConfig {
    /// `table1`, `table2`, or a path to a fixture JSON file.
    pub fixture: String,
    pub params: ErrorCorrectionParams,
}

impl Default for ResourcesConfig {
    fn default() -> Self {
        Self { fixture: "table1".into(), params: ErrorCorrectionParams::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_path: Option<PathBuf>,
    /// The effective config after defaults and flag overrides.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeTrial {
    pub trial: usize,
    pub a_hat: f64,
    pub queries: u64,
    pub rounds: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeAggregate {
    /// Fraction of trials with `|â − a| ≤ ε`.
    pub coverage: f64,
    pub mean_queries: f64,
    /// Query model for the same ε, absent outside its valid range.
    pub model_queries: Option<f64>,
    pub trials: usize,
}

/// Whether the computation itself succeeded; artifacts are written either way.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<String>,
    pub success: bool,
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(out.join(name))?))
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(out, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    Ok(())
}

/// History rows log the residual before each solve; this carries the
/// residual re-assembled at the final state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
    pub final_max_correction: f64,
    pub failure: Option<String>,
}

pub fn cmd_solve(cfg: &SolveConfig, out: &Path) -> Result<Outcome> {
    let mut case = build_case(cfg.stations, cfg.regime, cfg.solver)?;
    case.eps_tol = cfg.eps_tol;
    case.max_outer_iterations = cfg.max_outer_iterations;
    case.validate()?;
    let rep = run_outer_loop(&case, |dx| dx);
    rep.write_csv(create(out, "history.csv")?)?;
    let summary = SolveSummary {
        converged: rep.converged,
        iterations: rep.iterations,
        final_residual: rep.final_residual,
        final_max_correction: rep.final_max_correction,
        failure: rep.failure.clone(),
    };
    write_json(out, "summary.json", &summary)?;
    if let Some(why) = &rep.failure {
        eprintln!("solve: {why}");
    }
    Ok(Outcome { files: vec!["history.csv".into(), "summary.json".into()], success: rep.converged })
}

pub fn cmd_sweep(cfg: &SweepConfig, out: &Path) -> Result<Outcome> {
    let case = build_case(cfg.stations, cfg.regime, cfg.solver)?;
    let opts = SweepOptions { seed: cfg.seed, iteration_cap: cfg.iteration_cap, scale: cfg.scale, target: cfg.target };
    let res = run_noisy_sweep(&case, &cfg.eps, &cfg.alpha, cfg.trials, opts)?;
    res.write_csv(create(out, "sweep.csv")?)?;
    let success = res.cells.iter().all(|c| c.converged);
    Ok(Outcome { files: vec!["sweep.csv".into()], success })
}

pub fn run_ae_trials(cfg: &AeRunConfig) -> Result<(Vec<AeTrial>, AeAggregate)> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let ae = AeConfig {
        eps: cfg.eps,
        delta: cfg.delta,
        degree_cap: cfg.degree_cap,
        shots_per_round: cfg.shots_per_round,
        margin: cfg.margin,
        convention: cfg.convention,
        ..AeConfig::default()
    };
    ae.validate()?;
    let oracle = if cfg.signed { CoinOracle::shifted(cfg.a)? } else { CoinOracle::plain(cfg.a)? };
    let target = if cfg.signed { cfg.a } else { cfg.a.abs() };
    let trials: Vec<AeTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = substream(cfg.seed, "ae", &[trial as u64]);
            let r = if cfg.signed {
                signed_estimate(&oracle, &ae, Sampling::Shots(&mut rng))?
            } else {
                chebae_estimate(&oracle, &ae, Sampling::Shots(&mut rng))?
            };
            Ok(AeTrial { trial, a_hat: r.a_hat, queries: r.queries, rounds: r.rounds, converged: r.converged })
        })
        .collect::<Result<_>>()?;
    let n = trials.len() as f64;
    let covered = trials.iter().filter(|t| (t.a_hat - target).abs() <= cfg.eps).count();
    let agg = AeAggregate {
        coverage: covered as f64 / n,
        mean_queries: trials.iter().map(|t| t.queries as f64).sum::<f64>() / n,
        model_queries: model_query_complexity(cfg.eps, cfg.signed).ok().map(|m| m.queries),
        trials: trials.len(),
    };
    Ok((trials, agg))
}

pub fn cmd_ae(cfg: &AeRunConfig, out: &Path) -> Result<Outcome> {
    let (trials, agg) = run_ae_trials(cfg)?;
    write_json(out, "trials.json", &trials)?;
    write_json(out, "aggregate.json", &agg)?;
    let success = trials.iter().all(|t| t.converged);
    Ok(Outcome { files: vec!["trials.json".into(), "aggregate.json".into()], success })
}

#[derive(Serialize)]
struct Coefficients {
    c2: f64,
    c1: f64,
    c0: f64,
    decreasing_on_unit_interval: bool,
    /// `(a_max, mean slope)` points the quadratic was fitted to.
    aggregate: Vec<(f64, f64)>,
}

pub fn cmd_burnin(cfg: &BurninConfig, out: &Path) -> Result<Outcome> {
    let grid = BurnInGrid { qubits: cfg.qubits.clone(), a_max: cfg.a_max.clone(), shots: cfg.shots.clone() };
    let fit = rebuild_slope_model(&grid, cfg.trials, cfg.seed)?;
    let mut w = csv::Writer::from_writer(create(out, "slopes.csv")?);
    for c in &fit.cells {
        w.serialize(c)?;
    }
    w.flush()?;
    let m = fit.model;
    let coeffs = Coefficients {
        c2: m.c2,
        c1: m.c1,
        c0: m.c0,
        decreasing_on_unit_interval: m.is_decreasing(),
        aggregate: fit.aggregate,
    };
    write_json(out, "coefficients.json", &coeffs)?;
    Ok(Outcome { files: vec!["slopes.csv".into(), "coefficients.json".into()], success: true })
}

pub fn load_fixture(name: &str) -> Result<FixtureSet> {
    match name {
        "table1" => Ok(FixtureSet::table_one()),
        "table2" => Ok(FixtureSet::table_two()),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
            FixtureSet::from_json(&text)
        }
    }
}

pub fn cmd_resources(cfg: &ResourcesConfig, out: &Path) -> Result<Outcome> {
    let set = load_fixture(&cfg.fixture)?;
    let mut files = Vec::new();
    for (basis, name) in [(CostBasis::Model, "table_model.csv"), (CostBasis::Reported, "table_reported.csv")] {
        let rows = build_table(&set, &cfg.params, basis)?;
        write_table_csv(&rows, create(out, name)?)?;
        files.push(name.to_string());
    }
    Ok(Outcome { files, success: true })
}

/// Exit code for an error: configuration and parameter problems are usage
/// errors, anything else is a failed computation.
pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::InvalidCase(_) | Error::InvalidParameter(_) | Error::Json(_) | Error::Model(_) => {
            EXIT_USAGE
        }
        _ => EXIT_FAILED,
    }
}

fn dispatch(cli: &Cli) -> Result<(Outcome, serde_json::Value, Option<u64>)> {
    let path = cli.common.config.as_deref();
    let out = cli.common.out.as_path();
    macro_rules! seeded {
        ($ty:ty, $cmd:ident) => {{
            let mut cfg: $ty = load_config(path)?;
            if let Some(s) = cli.common.seed {
                cfg.seed = s;
            }
            fs::create_dir_all(out)?;
            let outcome = $cmd(&cfg, out)?;
            (outcome, serde_json::to_value(&cfg)?, Some(cfg.seed))
        }};
    }
    macro_rules! unseeded {
        ($ty:ty, $cmd:ident) => {{
            let cfg: $ty = load_config(path)?;
            fs::create_dir_all(out)?;
            let outcome = $cmd(&cfg, out)?;
            (outcome, serde_json::to_value(&cfg)?, None)
        }};
    }
    Ok(match cli.command {
        Command::Solve => unseeded!(SolveConfig, cmd_solve),
        Command::Sweep => seeded!(SweepConfig, cmd_sweep),
        Command::Ae => seeded!(AeRunConfig, cmd_ae),
        Command::Burnin => seeded!(BurninConfig, cmd_burnin),
        Command::Resources => unseeded!(ResourcesConfig, cmd_resources),
    })
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> u8 {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // Ignore the error if a pool already exists (repeated calls in one process).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (outcome, config, seed) = match dispatch(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = RunManifest {
        subcommand: cli.command.name().into(),
        config_path: cli.common.config.clone(),
        config,
        seed,
        out: cli.common.out.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp,
        files: outcome.files,
    };
    if let Err(e) = write_json(&cli.common.out, "manifest.json", &manifest) {
        eprintln!("error: {e}");
        return EXIT_FAILED;
    }
    if outcome.success {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qles(args: &[&str]) -> u8 {
        let mut full = vec!["qles"];
        full.extend_from_slice(args);
        run(full)
    }

    fn write(dir: &Path, name: &str, text: &str) -> String {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn manifest(out: &Path) -> RunManifest {
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
    }

    #[test]
    fn solve_default_converges() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("solve");
        assert_eq!(qles(&["solve", "--out", out.to_str().unwrap()]), EXIT_OK);
        let mut rdr = csv::Reader::from_path(out.join("history.csv")).unwrap();
        assert_eq!(rdr.headers().unwrap(), vec!["iter", "residual_l2", "max_correction"]);
        assert!(rdr.records().count() > 10);
        let summary: SolveSummary =
            serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
        assert!(summary.converged);
        assert!(summary.final_residual < 1e-9);
        let m = manifest(&out);
        assert_eq!(m.subcommand, "solve");
        assert_eq!(m.config["stations"], 8);
        assert_eq!(m.files, vec!["history.csv", "summary.json"]);
    }

    #[test]
    fn solve_usage_errors() {
        let tmp = tempfile::tempdir().unwrap();
        let bad = write(tmp.path(), "bad.json", r#"{"stations": 1}"#);
        let out = tmp.path().join("o");
        assert_eq!(qles(&["solve", "--config", &bad, "--out", out.to_str().unwrap()]), EXIT_USAGE);
        let missing = tmp.path().join("nope.json");
        assert_eq!(qles(&["solve", "--config", missing.to_str().unwrap()]), EXIT_USAGE);
        let typo = write(tmp.path(), "typo.json", r#"{"statoins": 8}"#);
        assert_eq!(qles(&["solve", "--config", &typo]), EXIT_USAGE);
        assert_eq!(qles(&["no-such-command"]), EXIT_USAGE);
        assert_eq!(qles(&["solve", "--threads", "zero"]), EXIT_USAGE);
    }

    #[test]
    fn solve_iteration_cap_is_a_computation_failure() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write(tmp.path(), "cap.json", r#"{"max_outer_iterations": 5}"#);
        let out = tmp.path().join("o");
        assert_eq!(qles(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_FAILED);
        assert!(out.join("history.csv").exists());
        assert!(out.join("manifest.json").exists());
    }

    #[test]
    fn sweep_row_count_and_determinism() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write(
            tmp.path(),
            "sweep.json",
            r#"{"eps": [1e-5, 1e-4, 1e-3, 1e-2], "alpha": [0.0, 0.5, 0.9], "trials": 2, "iteration_cap": 2000}"#,
        );
        let a = tmp.path().join("a");
        let b = tmp.path().join("b");
        for out in [&a, &b] {
            assert_eq!(qles(&["sweep", "--config", &cfg, "--seed", "11", "--out", out.to_str().unwrap()]), EXIT_OK);
        }
        let text = fs::read(a.join("sweep.csv")).unwrap();
        assert_eq!(text, fs::read(b.join("sweep.csv")).unwrap());
        let rows = csv::Reader::from_reader(text.as_slice()).records().count();
        assert_eq!(rows, 24);
        assert_eq!(manifest(&a).seed, Some(11));
    }

    #[test]
    fn sweep_both_cutoffs_converge_at_small_noise() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write(tmp.path(), "sweep.json", r#"{"eps": [1e-4], "alpha": [0.0, 0.9], "trials": 1}"#);
        let out = tmp.path().join("o");
        assert_eq!(qles(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_OK);
        let mut rdr = csv::Reader::from_path(out.join("sweep.csv")).unwrap();
        let conv: Vec<String> = rdr.records().map(|r| r.unwrap()[4].to_string()).collect();
        assert_eq!(conv, vec!["true", "true"]);
    }

    #[test]
    fn ae_aggregate_coverage() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write(tmp.path(), "ae.json", r#"{"a": 0.5, "eps": 1e-2, "trials": 200}"#);
        let out = tmp.path().join("o");
        assert_eq!(qles(&["ae", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_OK);
        let agg: AeAggregate = serde_json::from_str(&fs::read_to_string(out.join("aggregate.json")).unwrap()).unwrap();
        assert!(agg.coverage >= 0.95, "{agg:?}");
        assert_eq!(agg.trials, 200);
        assert!(agg.model_queries.unwrap() > 0.0);
        let trials: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("trials.json")).unwrap()).unwrap();
        let first = &trials[0];
        for key in ["a_hat", "queries", "rounds", "converged"] {
            assert!(first.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn ae_signed_run() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write(tmp.path(), "ae.json", r#"{"a": -0.7, "eps": 2e-2, "trials": 20, "signed": true}"#);
        let out = tmp.path().join("o");
        assert_eq!(qles(&["ae", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_OK);
        let agg: AeAggregate = serde_json::from_str(&fs::read_to_string(out.join("aggregate.json")).unwrap()).unwrap();
        assert!(agg.coverage >= 0.9);
    }

    #[test]
    fn burnin_full_grid_writes_three_coefficients() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("o");
        assert_eq!(qles(&["burnin", "--out", out.to_str().unwrap(), "--threads", "2"]), EXIT_OK);
        let coeffs: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("coefficients.json")).unwrap()).unwrap();
        for key in ["c2", "c1", "c0"] {
            assert!(coeffs[key].is_f64());
        }
        let mut rdr = csv::Reader::from_path(out.join("slopes.csv")).unwrap();
        assert_eq!(rdr.headers().unwrap(), vec!["qubits", "n_peaks", "a_max", "slope"]);
        assert_eq!(rdr.records().count(), 18 * 5);
    }

    #[test]
    fn resources_regenerates_table_shape() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("o");
        assert_eq!(qles(&["resources", "--out", out.to_str().unwrap()]), EXIT_OK);
        for name in ["table_model.csv", "table_reported.csv"] {
            let mut rdr = csv::Reader::from_path(out.join(name)).unwrap();
            let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
            assert_eq!(header, crate::resources::CSV_COLUMNS);
            assert_eq!(rdr.records().count(), 16);
        }
        let cfg = write(tmp.path(), "r.json", r#"{"fixture": "table2"}"#);
        assert_eq!(qles(&["resources", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_OK);
        let cfg = write(tmp.path(), "r.json", r#"{"fixture": "/no/such/fixture.json"}"#);
        assert_eq!(qles(&["resources", "--config", &cfg, "--out", out.to_str().unwrap()]), EXIT_USAGE);
    }

    #[test]
    fn manifest_reproduces_run() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = write(tmp.path(), "ae.json", r#"{"a": 0.3, "eps": 5e-2, "trials": 10}"#);
        let first = tmp.path().join("first");
        assert_eq!(qles(&["ae", "--config", &cfg, "--seed", "4", "--out", first.to_str().unwrap()]), EXIT_OK);
        let m = manifest(&first);
        let replay = write(tmp.path(), "replay.json", &m.config.to_string());
        let second = tmp.path().join("second");
        assert_eq!(qles(&["ae", "--config", &replay, "--out", second.to_str().unwrap()]), EXIT_OK);
        assert_eq!(fs::read(first.join("trials.json")).unwrap(), fs::read(second.join("trials.json")).unwrap());
    }
}
