//! `pauli-lab`: command-line front end to `pauli_core`.
//!
//! Subcommands `classify`, `spectrum`, `weyl` and `validate` write
//! comma-separated tables and `key = value` summaries into `--out-dir`.
//! Parameters come from flags, then from `--config` (flat `key = value`),
//! then from built-in defaults.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod classify;
pub mod config;
pub mod report;
pub mod spectrum;
pub mod validate;
pub mod weyl;

use config::{pick, pick_opt, ConfigFile};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION_FAILED: i32 = 1;
    pub const BAD_PARAMS: i32 = 2;
    pub const REGIME_MISMATCH: i32 = 3;
    pub const NON_CONVERGENCE: i32 = 4;
}

#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    BadParams(String),
    Regime(String),
    NonConvergence(String),
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadParams(_) | CliError::Io(_) => exit::BAD_PARAMS,
            CliError::Regime(_) => exit::REGIME_MISMATCH,
            CliError::NonConvergence(_) => exit::NON_CONVERGENCE,
            CliError::Validation(_) => exit::VALIDATION_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::BadParams(m) => write!(f, "bad parameters: {m}"),
            CliError::Regime(m) => write!(f, "regime mismatch: {m}"),
            CliError::NonConvergence(m) => write!(f, "numerical non-convergence: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pauli_core::Error> for CliError {
    fn from(e: pauli_core::Error) -> Self {
        use pauli_core::Error;
        match e {
            Error::Domain(m) => CliError::BadParams(m),
            Error::Regime(m) => CliError::Regime(m),
            Error::NonConvergence(m) | Error::NonFinite(m) => CliError::NonConvergence(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pauli-lab", version, about = "Spectral laboratory for planar Pauli operators with power-law fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a power-law family and list the hypotheses of each criterion.
    Classify(ClassifyArgs),
    /// Angular-momentum channel spectra in an energy window.
    Spectrum(SpectrumArgs),
    /// Residual ratios of trial packets along a ray.
    Weyl(WeylArgs),
    /// Run the numerical invariant suites.
    Validate(ValidateArgs),
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for tables and summaries.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads (falls back to PAULI_LAB_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// Field `b(r) = b0·r^s` and potential `v(r) = v0·r^t`.
#[derive(Clone, Debug, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub b0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Lowest channel (default `-jmax`).
    #[arg(long, allow_negative_numbers = true)]
    pub jmin: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jmax: Option<i64>,
    /// Energy window `[lo, hi)`.
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    /// Fixed box radius; with `--nodes` disables the adaptive grid.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Also write `spectrum.svg`.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Packet family: 2 (fixed Landau level), 3 (growing level), 4 (constant field).
    #[arg(long)]
    pub theorem: Option<u8>,
    #[arg(long)]
    pub nmin: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub nstep: Option<usize>,
    /// Spectral target.
    #[arg(long = "E", alias = "energy", allow_negative_numbers = true)]
    pub e: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Landau level for the fixed-level family (default from `|v0|/(2b0)`).
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args)]
pub struct ValidateArgs {
    /// Reduced suite.
    #[arg(long)]
    pub quick: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub const FAMILY_KEYS: [&str; 4] = ["b0", "s", "v0", "t"];
const COMMON_KEYS: [&str; 2] = ["out_dir", "threads"];

/// Power-law family after layering. Defaults: `b0 = 1, s = 0, v0 = −1, t = 0.5`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Family {
    pub b0: f64,
    pub s: f64,
    pub v0: f64,
    pub t: f64,
}

impl Family {
    fn resolve(a: &FamilyArgs, file: &ConfigFile) -> Result<Self, CliError> {
        Ok(Self {
            b0: pick(a.b0, file, "b0", 1.0)?,
            s: pick(a.s, file, "s", 0.0)?,
            v0: pick(a.v0, file, "v0", -1.0)?,
            t: pick(a.t, file, "t", 0.5)?,
        })
    }

    pub fn field(&self) -> Result<pauli_core::Field, CliError> {
        Ok(pauli_core::Field::new(self.b0, self.s)?)
    }

    /// Potential with the classification domain `v0 < 0`, `0 ≤ t ≤ 2`.
    pub fn potential(&self) -> Result<pauli_core::Potential, CliError> {
        if !(self.v0 < 0.0) {
            return Err(CliError::BadParams(format!("v0 must be < 0, got {}", self.v0)));
        }
        if !(0.0..=2.0).contains(&self.t) {
            return Err(CliError::BadParams(format!("t must lie in [0, 2], got {}", self.t)));
        }
        Ok(pauli_core::Potential::new(self.v0, self.t)?)
    }

    pub fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("b0".into(), self.b0.to_string()),
            ("s".into(), self.s.to_string()),
            ("v0".into(), self.v0.to_string()),
            ("t".into(), self.t.to_string()),
        ]
    }
}

/// Layered options shared by all commands.
#[derive(Clone, Debug)]
pub struct Context {
    pub file: ConfigFile,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

impl Context {
    fn resolve(common: &CommonArgs, extra_keys: &[&str]) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let known: Vec<&str> = COMMON_KEYS.iter().chain(extra_keys).copied().collect();
        file.check_keys(&known)?;
        let out_dir = pick(common.out_dir.clone(), &file, "out_dir", PathBuf::from("pauli-lab-out"))?;
        let env_threads = match std::env::var("PAULI_LAB_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| CliError::BadParams(format!("PAULI_LAB_THREADS = `{v}`: {e}")))?),
            Err(_) => None,
        };
        let threads = pick_opt(common.threads, &file, "threads")?.or(env_threads);
        if threads == Some(0) {
            return Err(CliError::BadParams("threads must be >= 1".into()));
        }
        Ok(Self { file, out_dir, threads })
    }

    /// Runs `job` on a pool of the configured size. Reductions inside the
    /// compute modules are order-fixed, so the result does not depend on it.
    fn install<R: Send>(&self, job: impl FnOnce() -> R + Send) -> Result<R, CliError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError::BadParams(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(job))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Reports go to stdout, errors to stderr.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pauli-lab: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut (dyn std::io::Write + Send)) -> Result<i32, CliError> {
    match command {
        Command::Classify(a) => {
            let ctx = Context::resolve(&a.common, &FAMILY_KEYS)?;
            let family = Family::resolve(&a.family, &ctx.file)?;
            classify::run(&ctx, family, out)
        }
        Command::Spectrum(a) => {
            let ctx = Context::resolve(&a.common, &[&FAMILY_KEYS[..], &spectrum::KEYS[..]].concat())?;
            let family = Family::resolve(&a.family, &ctx.file)?;
            let opts = spectrum::Options::resolve(&a, &ctx.file)?;
            ctx.install(|| spectrum::run(&ctx, family, &opts, out))?
        }
        Command::Weyl(a) => {
            let ctx = Context::resolve(&a.common, &[&FAMILY_KEYS[..], &weyl::KEYS[..]].concat())?;
            let family = Family::resolve(&a.family, &ctx.file)?;
            let opts = weyl::Options::resolve(&a, &ctx.file, &family)?;
            ctx.install(|| weyl::run(&ctx, family, &opts, out))?
        }
        Command::Validate(a) => {
            let ctx = Context::resolve(&a.common, &["quick"])?;
            let quick = config::pick_switch(a.quick, &ctx.file, "quick")?;
            ctx.install(|| validate::run(&ctx, quick, out))?
        }
    }
}

pub(crate) fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}
