//! Argument handling for the `fidelity-sweep` binary.
//!
//! Settings are layered: built-in defaults, then an optional `key = value`
//! config file (`--config`), then explicit flags. Config keys are the long
//! flag names without dashes, e.g. `size = 400` or `delta-mu = 0.05`.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use freefermi::sweep::{
    emit_boundary, emit_records, first_order_boundary, oracle_suite, run_sweep, GridAxis, OutputFormat,
    SweepConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ORACLE: i32 = 2;
/// Runtime failures (I/O, numerical errors) after a valid invocation.
pub const EXIT_RUNTIME: i32 = 3;

/// Built-in models. New models plug in here and in [`Invocation::run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    CompleteGraph,
}

#[derive(Debug, Parser)]
#[command(name = "fidelity-sweep", version, about = "Ground-state fidelity sweeps over the (mu, gamma) plane")]
struct Args {
    /// Model to sweep.
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Number of modes L (even).
    #[arg(long)]
    size: Option<usize>,
    /// mu grid as min:max:steps.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// gamma grid as min:max:steps.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Forward displacement in mu.
    #[arg(long = "delta-mu")]
    delta_mu: Option<f64>,
    /// Forward displacement in gamma.
    #[arg(long = "delta-gamma")]
    delta_gamma: Option<f64>,
    /// Absolute singularity threshold on the smallest singular value of Z.
    #[arg(long = "tol-sing")]
    tol_sing: Option<f64>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Trace the det T sign-flip boundary instead of a full sweep.
    #[arg(long)]
    boundary: bool,
    /// Run the small-L Fock-space oracle suite and exit.
    #[arg(long = "oracle-check")]
    oracle_check: bool,
    /// key = value settings file, overridden by explicit flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    Boundary,
    OracleCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub model: Model,
    pub mode: Mode,
    pub config: SweepConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// `--help` or `--version`; the text goes to standard output.
    Info(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Info(s) | CliError::Usage(s) => f.write_str(s),
        }
    }
}

fn usage(msg: impl fmt::Display) -> CliError {
    CliError::Usage(format!("error: {msg}"))
}

#[derive(Debug, Default)]
struct FileSettings {
    model: Option<Model>,
    size: Option<usize>,
    mu: Option<String>,
    gamma: Option<String>,
    delta_mu: Option<f64>,
    delta_gamma: Option<f64>,
    tol_sing: Option<f64>,
    format: Option<String>,
    out: Option<PathBuf>,
    workers: Option<usize>,
}

fn parse_config_file(text: &str) -> Result<FileSettings, CliError> {
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        v.parse().map_err(|e| usage(format!("config key `{key}`: {e}")))
    }
    let mut s = FileSettings::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key.replace('_', "-").as_str() {
            "model" => {
                s.model = Some(Model::from_str(value, true).map_err(|e| usage(format!("config key `model`: {e}")))?)
            }
            "size" => s.size = Some(num(key, value)?),
            "mu" => s.mu = Some(value.to_string()),
            "gamma" => s.gamma = Some(value.to_string()),
            "delta-mu" => s.delta_mu = Some(num(key, value)?),
            "delta-gamma" => s.delta_gamma = Some(num(key, value)?),
            "tol-sing" => s.tol_sing = Some(num(key, value)?),
            "format" => s.format = Some(value.to_string()),
            "out" => s.out = Some(PathBuf::from(value)),
            "workers" => s.workers = Some(num(key, value)?),
            other => return Err(usage(format!("config line {}: unknown key `{other}`", lineno + 1))),
        }
    }
    Ok(s)
}

/// Parses `argv` (including the program name) into a validated invocation.
pub fn parse_cli<I, T>(argv: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;
    if args.boundary && args.oracle_check {
        return Err(usage("--boundary and --oracle-check are mutually exclusive"));
    }
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => FileSettings::default(),
    };

    let mut cfg = SweepConfig::default();
    if let Some(v) = args.size.or(file.size) {
        cfg.size = v;
    }
    if let Some(v) = args.mu.as_ref().or(file.mu.as_ref()) {
        cfg.mu = v.parse::<GridAxis>().map_err(|e| usage(format!("--mu: {e}")))?;
    }
    if let Some(v) = args.gamma.as_ref().or(file.gamma.as_ref()) {
        cfg.gamma = v.parse::<GridAxis>().map_err(|e| usage(format!("--gamma: {e}")))?;
    }
    if let Some(v) = args.delta_mu.or(file.delta_mu) {
        cfg.delta_mu = v;
    }
    if let Some(v) = args.delta_gamma.or(file.delta_gamma) {
        cfg.delta_gamma = v;
    }
    cfg.tol_sing = args.tol_sing.or(file.tol_sing);
    if let Some(v) = args.format.as_ref().or(file.format.as_ref()) {
        cfg.format = v.parse::<OutputFormat>().map_err(|e| usage(format!("--format: {e}")))?;
    }
    cfg.output_path = args.out.or(file.out);
    if let Some(v) = args.workers.or(file.workers) {
        cfg.workers = v;
    }
    cfg.validate().map_err(usage)?;

    let mode = if args.oracle_check {
        Mode::OracleCheck
    } else if args.boundary {
        Mode::Boundary
    } else {
        Mode::Sweep
    };
    let model = args.model.or(file.model).unwrap_or(Model::CompleteGraph);
    Ok(Invocation { model, mode, config: cfg })
}

impl Invocation {
    /// Executes the invocation and returns the process exit code.
    pub fn run(&self) -> i32 {
        let Model::CompleteGraph = self.model;
        let cfg = &self.config;
        let path = cfg.output_path.as_deref();
        let outcome = match self.mode {
            Mode::Sweep => run_sweep(cfg).and_then(|recs| emit_records(&recs, cfg.format, path)),
            Mode::Boundary => first_order_boundary(cfg.size, &cfg.mu, &cfg.gamma, cfg.workers)
                .and_then(|trace| emit_boundary(&trace, cfg.format, path)),
            Mode::OracleCheck => match oracle_suite(8, cfg.delta_mu.max(1e-3)) {
                Ok(report) => {
                    print!("{report}");
                    return if report.passed() { EXIT_OK } else { EXIT_ORACLE };
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_ORACLE;
                }
            },
        };
        match outcome {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_RUNTIME
            }
        }
    }
}

/// Full entry point: parse, run, and map everything to an exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_cli(argv) {
        Ok(inv) => inv.run(),
        Err(CliError::Info(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
