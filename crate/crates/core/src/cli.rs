//! `effdyn run|compare|sweep <config>`.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 invalid config or
//! arguments, 3 engine guard (problem too large for the engine), 4 numerical
//! abort. `EFFDYN_THREADS` caps the worker pool.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenarios::config::{parse_values, ScenarioConfig, SweepAxis};
use crate::scenarios::runner::{compare, execute, sweep, Fingerprint, ResidualSummary};

pub const THREADS_ENV: &str = "EFFDYN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "effdyn", version, about = "Effective-subspace dynamics of inhomogeneous spin ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write its time series.
    Run(Common),
    /// Run the effective and exact engines side by side.
    Compare(Common),
    /// Re-run a scenario over one parameter and write one summary row per value.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// j0, Gamma, N, k_mean or max_row.
        #[arg(long)]
        axis: String,
        /// Comma-separated values; `N`, `N/4`, `3N/4` are relative to the configured N.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario JSON file.
    pub config: PathBuf,
    /// Output CSV; the manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the number of time-grid points.
    #[arg(long)]
    pub time_points: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WallClock {
    pub started_unix_s: f64,
    pub elapsed_s: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepInfo {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Sidecar JSON describing how an output file was produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_path: String,
    pub config: ScenarioConfig,
    pub fingerprint: Vec<Fingerprint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_log: Option<ResidualSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepInfo>,
    pub outputs: Vec<String>,
    pub wall_clock: WallClock,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Config(_) => 2,
        Error::Guard(_) => 3,
        Error::NumericalAbort(_) => 4,
        Error::Io(_) => 1,
    }
}

/// Worker count from `EFFDYN_THREADS`, or `None` for the rayon default.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got `{s}`"))),
        },
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("effdyn: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<Vec<PathBuf>> {
    let threads = threads_from_env()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let n_threads = pool.current_num_threads();
    pool.install(|| match cli.command {
        Command::Run(c) => cmd_run(&c, n_threads),
        Command::Compare(c) => cmd_compare(&c, n_threads),
        Command::Sweep { common, axis, values } => cmd_sweep(&common, &axis, &values, n_threads),
    })
}

fn load(c: &Common) -> Result<ScenarioConfig> {
    let cfg = ScenarioConfig::load(&c.config)?;
    match c.time_points {
        Some(p) => cfg.with_time_points(p),
        None => Ok(cfg),
    }
}

fn out_path(c: &Common, cfg: &ScenarioConfig, suffix: &str) -> PathBuf {
    if let Some(p) = &c.out {
        return p.clone();
    }
    if let (Some(p), "") = (&cfg.output, suffix) {
        return PathBuf::from(p);
    }
    let stem = c.config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "effdyn".into());
    PathBuf::from(format!("{stem}{suffix}.csv"))
}

/// `foo.csv` → `foo.<kind>.json`.
pub fn sidecar(csv: &Path, kind: &str) -> PathBuf {
    csv.with_extension(format!("{kind}.json"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn now_unix() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

struct Clock {
    started: f64,
    t0: Instant,
    threads: usize,
}

impl Clock {
    fn start(threads: usize) -> Self {
        Self { started: now_unix(), t0: Instant::now(), threads }
    }

    fn stop(&self) -> WallClock {
        WallClock { started_unix_s: self.started, elapsed_s: self.t0.elapsed().as_secs_f64(), threads: self.threads }
    }
}

fn manifest(command: &'static str, c: &Common, config: ScenarioConfig, fingerprint: Vec<Fingerprint>) -> RunManifest {
    RunManifest {
        tool: "effdyn",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config_path: c.config.display().to_string(),
        config,
        fingerprint,
        residual_log: None,
        sweep: None,
        outputs: Vec::new(),
        wall_clock: WallClock { started_unix_s: 0.0, elapsed_s: 0.0, threads: 0 },
    }
}

pub fn cmd_run(c: &Common, threads: usize) -> Result<Vec<PathBuf>> {
    let clock = Clock::start(threads);
    let cfg = load(c)?;
    let out = execute(&cfg)?;
    let csv = out_path(c, &cfg, "");
    let mut f = create(&csv)?;
    out.series.write_csv(&mut f)?;
    f.flush()?;
    let side = sidecar(&csv, "manifest");
    let mut m = manifest("run", c, cfg, vec![out.fingerprint]);
    m.residual_log = out.residuals;
    m.outputs = vec![csv.display().to_string()];
    m.wall_clock = clock.stop();
    write_json(&side, &m)?;
    Ok(vec![csv, side])
}

pub fn cmd_compare(c: &Common, threads: usize) -> Result<Vec<PathBuf>> {
    let clock = Clock::start(threads);
    let cfg = load(c)?;
    let out = compare(&cfg)?;
    let csv = out_path(c, &cfg, "_compare");
    let mut f = create(&csv)?;
    out.series.write_csv(&mut f)?;
    f.flush()?;
    let summary = sidecar(&csv, "summary");
    write_json(&summary, &out.summary)?;
    let side = sidecar(&csv, "manifest");
    let mut m = manifest("compare", c, cfg, vec![out.effective.fingerprint, out.exact.fingerprint]);
    m.residual_log = out.effective.residuals;
    m.outputs = vec![csv.display().to_string(), summary.display().to_string()];
    m.wall_clock = clock.stop();
    write_json(&side, &m)?;
    Ok(vec![csv, summary, side])
}

pub fn cmd_sweep(c: &Common, axis: &str, values: &str, threads: usize) -> Result<Vec<PathBuf>> {
    let clock = Clock::start(threads);
    let axis = SweepAxis::parse(axis)?;
    let cfg = load(c)?;
    let values = parse_values(values, cfg.scenario.profile().n)?;
    let out = sweep(&cfg, axis, &values)?;
    let csv = out_path(c, &cfg, &format!("_sweep_{}", axis.name()));
    let mut f = create(&csv)?;
    out.write_csv(&mut f)?;
    f.flush()?;
    let side = sidecar(&csv, "manifest");
    let mut m = manifest("sweep", c, cfg, out.fingerprints);
    m.sweep = Some(SweepInfo { axis, values });
    m.outputs = vec![csv.display().to_string()];
    m.wall_clock = clock.stop();
    write_json(&side, &m)?;
    Ok(vec![csv, side])
}
