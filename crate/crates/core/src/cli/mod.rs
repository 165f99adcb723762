//! Command-line front end: argument and config-file handling, the
//! subcommands, and their comma-separated output.
//!
//! Exit codes: 0 success, 1 failed validation, 2 invalid input,
//! 3 degenerate parameters, 4 oracle failure.

pub mod checks;
pub mod commands;
pub mod complex;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use config::{RunConfig, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) => EXIT_INVALID,
            Error::DegenerateParameters { .. } => EXIT_DEGENERATE,
            Error::ExcessiveTruncationLoss { .. } | Error::NonConvergence { .. } => EXIT_ORACLE,
            Error::InternalConsistency(_) => EXIT_VALIDATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

const PARAMETER_HELP: &str = "\
Complex values: re, re+imI, re-imI, imI or mag@phase_rad.
Ranges: min:max:count (inclusive, evenly spaced) or a single value.
Config files hold key=value lines ('#' starts a comment) with the flag
names as keys; flags override the file, the file overrides --preset.";

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Linear coupling constant k (complex)
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Nonlinear coupling constant (complex)
    #[arg(long = "gamma-nl", allow_hyphen_values = true)]
    pub gamma_nl: Option<String>,
    /// Phase mismatch (real)
    #[arg(long = "delta-k", allow_hyphen_values = true)]
    pub delta_k: Option<String>,
    /// Coherent amplitude of the probe mode a
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Coherent amplitude of the fundamental mode b1
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Coherent amplitude of the second-harmonic mode b2
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Propagation lengths z
    #[arg(long, allow_hyphen_values = true, conflicts_with = "gamma_z")]
    pub z: Option<String>,
    /// Rescaled lengths |gamma_nl| z
    #[arg(long = "gamma-z", allow_hyphen_values = true)]
    pub gamma_z: Option<String>,
    /// Second sweep axis, name=min:max:count with name one of delta_k, k_magnitude, phi, gamma_nl
    #[arg(long)]
    pub secondary: Option<String>,
    /// Parameter preset: fig2, fig3 or fig4
    #[arg(long)]
    pub preset: Option<String>,
    /// Classification tolerance on delta_n_z (coeffs, zeno, sweep) or oracle convergence tolerance (oracle, validate)
    #[arg(long)]
    pub tol: Option<String>,
    /// Fock cutoffs n_a/n_b1/n_b2 for the oracle [default: 12/12/8]
    #[arg(long)]
    pub cutoffs: Option<String>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<String>,
    /// key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    fn settings(&self) -> Settings {
        let mut s = Settings::default();
        let pairs = [
            ("k", &self.k),
            ("gamma-nl", &self.gamma_nl),
            ("delta-k", &self.delta_k),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("z", &self.z),
            ("gamma-z", &self.gamma_z),
            ("secondary", &self.secondary),
            ("preset", &self.preset),
            ("tol", &self.tol),
            ("cutoffs", &self.cutoffs),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v.clone());
            }
        }
        s
    }

    /// Flags over config file over preset.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let flags = self.settings();
        let merged = match &self.config {
            Some(path) => flags.over(&Settings::load(path)?),
            None => flags,
        };
        let mut config = RunConfig::from_settings(&merged)?;
        config.apply_preset();
        Ok(config)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "zeno-coupler",
    version,
    about = "Photon statistics and Zeno parameter of an asymmetric nonlinear coupler",
    after_help = PARAMETER_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field-operator coefficients f1..f4, g1..g4, h1..h4 along z
    #[command(after_help = concat!(
        "Columns: z,gamma_z,f1_re,f1_im,...,h4_re,h4_im,status\n\n",
        "Complex values: re, re+imI, re-imI, imI or mag@phase_rad.\n",
        "Ranges: min:max:count (inclusive, evenly spaced) or a single value."
    ))]
    Coeffs(RunArgs),
    /// Second-harmonic photon number and Zeno parameter along z
    #[command(after_help = concat!(
        "Columns: z,gamma_z,n_b2,n_b2_uncoupled,delta_n_z,classification,status\n\n",
        "Complex values: re, re+imI, re-imI, imI or mag@phase_rad.\n",
        "Ranges: min:max:count (inclusive, evenly spaced) or a single value."
    ))]
    Zeno(RunArgs),
    /// Zeno parameter over a (z, secondary) grid
    #[command(after_help = concat!(
        "Columns: secondary_axis,secondary_index,secondary_value,z_index,z,gamma_z,",
        "n_b2,n_b2_uncoupled,delta_n_z,classification,status\n\n",
        "Rows are ordered by secondary index, then z index. Cells the model rejects keep\n",
        "their row with NaN values and a non-ok status.\n",
        "Complex values: re, re+imI, re-imI, imI or mag@phase_rad.\n",
        "Ranges: min:max:count (inclusive, evenly spaced) or a single value."
    ))]
    Sweep(RunArgs),
    /// Exact truncated Fock-space propagation
    #[command(after_help = concat!(
        "Columns: z,gamma_z,n_a,n_b1,n_b2,conservation_drift,norm_drift,steps_used,status\n\n",
        "Complex values: re, re+imI, re-imI, imI or mag@phase_rad.\n",
        "Ranges: min:max:count (inclusive, evenly spaced) or a single value."
    ))]
    Oracle(RunArgs),
    /// Run the invariant suite; exit 1 if any check fails
    #[command(after_help = "Columns: check,measured,lower,upper,passed\n\nOnly --cutoffs, --tol and --out affect the suite.")]
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Force a failure, for testing the exit status
    #[arg(long, hide = true, value_enum)]
    pub inject: Option<checks::Injection>,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Coeffs(args) => commands::coeffs(&args.resolve()?),
        Command::Zeno(args) => commands::zeno(&args.resolve()?),
        Command::Sweep(args) => commands::sweep(&args.resolve()?),
        Command::Oracle(args) => commands::oracle(&args.resolve()?),
        Command::Validate(args) => commands::validate(&args.run.resolve()?, args.inject),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
