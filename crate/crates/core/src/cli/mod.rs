//! Command-line front end: `simulate`, `profile`, `analyze`, `sweep`, `report`.

mod sweep;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use sweep::{mean_std, parse_values, run_sweep, SweepResult, SweepRow, SWEEP_CSV_HEADER};

use crate::kv::{KvConfig, KvError};
use crate::profiler::{
    execute_plan, load_dataset, sample_configs, save_dataset, ParameterSpace, ProfileError, Scheme,
};
use crate::sim::{run, ArenaSpec, CostModel, Parameter, SimError, WsnConfig};
use crate::stats::{extract_effective, parse_csv, render_table, StatsError, DEFAULT_ALPHA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "wsn-energy", version, about = "Energy sensitivity profiling for simulated sensor networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and print its record as a JSON line.
    Simulate(SimulateArgs),
    /// Sample configurations, simulate each and write a dataset.
    Profile(ProfileArgs),
    /// Screen a dataset and write the sensitivity report.
    Analyze(AnalyzeArgs),
    /// Vary one parameter around the baseline and write mean/std curves.
    Sweep(SweepArgs),
    /// Re-render a CSV report as an aligned table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Key = value file with baseline parameters, arena and cost settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write the record here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of runs (M).
    #[arg(long, short = 'M')]
    pub runs: usize,
    /// uniform or latin-hypercube.
    #[arg(long, default_value = "uniform")]
    pub scheme: Scheme,
    /// Master seed; per-run seeds are derived from it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Significance level, strictly between 0 and 1.
    #[arg(long, default_value_t = DEFAULT_ALPHA, value_parser = parse_alpha)]
    pub alpha: f64,
    /// CSV report path.
    #[arg(long)]
    pub out: PathBuf,
    /// Text table path; printed to stdout when omitted.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter to vary.
    #[arg(long)]
    pub param: Parameter,
    /// Comma-separated list or inclusive `start:stop:step`.
    #[arg(long, value_parser = parse_values_arg)]
    pub values: Values,
    /// Seeded runs per value.
    #[arg(long, short = 'R', default_value_t = 20)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// CSV written by `analyze`.
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Values(pub Vec<f64>);

fn parse_values_arg(s: &str) -> Result<Values, String> {
    parse_values(s).map(Values)
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie in (0, 1), got {a}"))
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<KvError> for CliError {
    fn from(e: KvError) -> Self {
        let code = if matches!(e, KvError::Io { .. }) { EXIT_IO } else { EXIT_CONFIG };
        Self::new(code, e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        Self::new(EXIT_CONFIG, e.to_string())
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        let code = match e {
            ProfileError::Config(_) | ProfileError::Run { .. } => EXIT_CONFIG,
            ProfileError::Parse { .. } | ProfileError::Integrity(_) => EXIT_DATA,
            ProfileError::Io(_) => EXIT_IO,
        };
        Self::new(code, e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        Self::new(EXIT_DATA, e.to_string())
    }
}

pub fn parse_command<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Everything a config file can set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub baseline: WsnConfig,
    pub arena: ArenaSpec,
    pub cost: CostModel,
    pub space: ParameterSpace,
}

impl Settings {
    pub fn from_kv(kv: &KvConfig) -> Result<Self, CliError> {
        kv.check_keys(|k| {
            WsnConfig::KV_KEYS.contains(&k)
                || ArenaSpec::KV_KEYS.contains(&k)
                || CostModel::KV_KEYS.contains(&k)
                || ParameterSpace::is_kv_key(k)
        })?;
        let s = Self {
            baseline: WsnConfig::from_kv(kv)?,
            arena: ArenaSpec::from_kv(kv)?,
            cost: CostModel::from_kv(kv)?,
            space: ParameterSpace::from_kv(kv)?,
        };
        s.arena.validate()?;
        s.cost.validate()?;
        Ok(s)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::from_kv(&KvConfig::load(p)?),
            None => Ok(Self::default()),
        }
    }
}

/// Parses `args` and executes the command. Returns the exit status.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_command(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

pub fn main() -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_cli(std::env::args_os(), &mut out, &mut err)
}

pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => cmd_simulate(&a, stdout),
        Command::Profile(a) => cmd_profile(&a, stdout),
        Command::Analyze(a) => cmd_analyze(&a, stdout, stderr),
        Command::Sweep(a) => cmd_sweep(&a, stdout),
        Command::Report(a) => cmd_report(&a, stdout),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::new(EXIT_IO, format!("{}: {e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(EXIT_IO, e.to_string())),
    }
}

pub fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = Settings::load(a.config.as_deref())?;
    let record = run(&s.baseline, &s.arena, &s.cost, a.seed)?;
    emit(&format!("{}\n", record.to_json_line()), a.out.as_deref(), stdout)
}

pub fn cmd_profile(a: &ProfileArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = Settings::load(a.config.as_deref())?;
    let start = Instant::now();
    let plan = sample_configs(&s.space, a.runs, a.scheme, a.seed)?;
    let dataset = execute_plan(&plan, &s.arena, &s.cost, a.workers)?;
    save_dataset(&dataset, &a.out)?;
    let _ = writeln!(
        stdout,
        "M = {} runs in {:.2} s -> {}",
        dataset.len(),
        start.elapsed().as_secs_f64(),
        a.out.display()
    );
    Ok(())
}

pub fn cmd_analyze(a: &AnalyzeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let dataset = load_dataset(&a.dataset)?;
    let report = extract_effective(&dataset.records, a.alpha)?;
    for (param, why) in report.diagnostics() {
        let _ = writeln!(stderr, "warning: {param}: {why}");
    }
    fs::write(&a.out, report.to_csv()).map_err(|e| io_err(&a.out, e))?;
    emit(&report.to_table(), a.table.as_deref(), stdout)
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = Settings::load(a.config.as_deref())?;
    let dim = s.space.dim(a.param);
    if let Some(v) = a.values.0.iter().find(|&&v| !dim.contains(v)) {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("{} value {v} outside [{}, {}]", a.param, dim.low, dim.high),
        ));
    }
    if a.repeats == 0 {
        return Err(CliError::new(EXIT_USAGE, "--repeats must be at least 1"));
    }
    let result = run_sweep(
        a.param, &a.values.0, &s.baseline, &s.arena, &s.cost, a.repeats, a.seed, a.workers,
    )?;
    emit(&result.to_csv(), a.out.as_deref(), stdout)
}

pub fn cmd_report(a: &ReportArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.csv).map_err(|e| io_err(&a.csv, e))?;
    let rows = parse_csv(&text).map_err(|e| CliError::new(EXIT_DATA, e.to_string()))?;
    emit(&render_table(&rows, None), a.out.as_deref(), stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        parse_command(std::iter::once("wsn-energy").chain(args.iter().copied()))
    }

    #[test]
    fn analyze_parses() {
        let cli = parse(&["analyze", "--dataset", "d.jsonl", "--alpha", "0.05", "--out", "report.csv"]).unwrap();
        match cli.command {
            Command::Analyze(a) => {
                assert_eq!(a.dataset, PathBuf::from("d.jsonl"));
                assert_eq!(a.alpha, 0.05);
                assert_eq!(a.out, PathBuf::from("report.csv"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_dataset_is_named() {
        let e = parse(&["analyze", "--out", "r.csv"]).unwrap_err();
        assert!(e.use_stderr());
        assert!(e.to_string().contains("--dataset"), "{e}");
    }

    #[test]
    fn alpha_range() {
        for bad in ["1.5", "0", "1", "-0.1", "x"] {
            let flag = format!("--alpha={bad}");
            let e = parse(&["analyze", "--dataset", "d", "--out", "o", &flag]).unwrap_err();
            assert!(e.use_stderr());
            assert!(e.to_string().contains("--alpha"), "{e}");
        }
    }

    #[test]
    fn unknown_options_and_params() {
        assert!(parse(&["simulate", "--bogus"]).is_err());
        assert!(parse(&[]).is_err());
        let e = parse(&["sweep", "--param", "hops", "--values", "1,2"]).unwrap_err();
        let msg = e.to_string();
        for p in Parameter::ALL {
            assert!(msg.contains(p.name()), "{msg}");
        }
    }

    #[test]
    fn sweep_defaults() {
        let cli = parse(&["sweep", "--param", "num_hops", "--values", "2:20:2"]).unwrap();
        match cli.command {
            Command::Sweep(a) => {
                assert_eq!(a.param, Parameter::NumHops);
                assert_eq!(a.values.0.len(), 10);
                assert_eq!(a.repeats, 20);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn settings_reject_unknown_keys() {
        let kv = KvConfig::parse("duration = 60\nnum_hops.high = 12\nsensor_interval = 3\n").unwrap();
        let s = Settings::from_kv(&kv).unwrap();
        assert_eq!(s.arena.duration, 60);
        assert_eq!(s.space.dim(Parameter::NumHops).high, 12.0);
        assert_eq!(s.baseline.sensor_interval, 3);
        let kv = KvConfig::parse("hop_budget = 3\n").unwrap();
        assert_eq!(Settings::from_kv(&kv).unwrap_err().code, EXIT_CONFIG);
    }
}
