//! xy-entropy: ground-state block entanglement entropy of the infinite XY
//! spin chain, by exact finite-L diagonalization and by the theta-function
//! asymptotics of the associated block Toeplitz determinant.
//!
//! Exit codes: 0 success; 2 for rejected parameters (phase boundary,
//! excluded lambda, domain or usage errors); 1 for numerical failures.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{MethodSet, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;
use xy_entropy_core::{Complex64, Error, Settings};

#[derive(Parser)]
#[command(name = "xy-entropy", version, about)]
struct Cli {
    /// Key=value config file (eps_phase, tau0_min, quad_tol, l_max);
    /// overrides the XY_ENTROPY_CONFIG env var.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Block entropy at one (gamma, h) point, by the selected methods.
    Entropy(EntropyArgs),
    /// Finite-L convergence toward the asymptotic entropy, with a fitted
    /// decay slope and its reference -ln|lambda_C|.
    Converge(ConvergeArgs),
    /// Cross-check ln|D_L(lambda)| between the exact spectral product, the
    /// theta-function asymptotics, and (L <= 8) the Fredholm determinant.
    Detcheck(DetcheckArgs),
    /// Evaluate a (gamma, h) grid and emit CSV or JSON rows.
    Sweep(SweepArgs),
    /// Dump the finite-L correlation spectrum nu_m (descending).
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Exact finite-L eigensolve (requires --L).
    Exact,
    /// Theta-function zero series.
    Series,
    /// Theta-function integral representation.
    Integral,
    /// Closed form in complete elliptic integrals.
    Closed,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

/// Method selection shared by entropy and sweep: --method lists, --all, or
/// the per-method shorthand flags. Default: series, integral, and closed,
/// plus exact when --L is given.
#[derive(Args)]
struct MethodFlags {
    /// Methods to run (comma-separated or repeated).
    #[arg(long, value_enum, value_delimiter = ',')]
    method: Vec<MethodArg>,
    /// Run every method (exact requires --L).
    #[arg(long)]
    all: bool,
    /// Shorthand for --method exact.
    #[arg(long)]
    exact: bool,
    /// Shorthand for --method series.
    #[arg(long)]
    series: bool,
    /// Shorthand for --method integral.
    #[arg(long)]
    integral: bool,
    /// Shorthand for --method closed.
    #[arg(long)]
    closed: bool,
}

impl MethodFlags {
    fn resolve(&self, have_l: bool) -> MethodSet {
        let mut set = MethodSet::default();
        for m in &self.method {
            match m {
                MethodArg::Exact => set.exact = true,
                MethodArg::Series => set.series = true,
                MethodArg::Integral => set.integral = true,
                MethodArg::Closed => set.closed = true,
            }
        }
        set.exact |= self.exact;
        set.series |= self.series;
        set.integral |= self.integral;
        set.closed |= self.closed;
        if self.all {
            set = MethodSet::all();
        }
        if set.is_empty() {
            set = MethodSet {
                exact: have_l,
                series: true,
                integral: true,
                closed: true,
            };
        }
        set
    }
}

#[derive(Args)]
struct EntropyArgs {
    /// Anisotropy, in (0, 1).
    #[arg(long)]
    gamma: f64,
    /// Transverse field, positive and off the critical lines.
    #[arg(long)]
    h: f64,
    /// Block length for the exact finite-L route.
    #[arg(long = "L", value_name = "L")]
    l: Option<usize>,
    #[command(flatten)]
    methods: MethodFlags,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    h: f64,
    /// Largest block length; rows run over L = 4, 8, ..., L_max.
    #[arg(long = "L", value_name = "L_MAX", default_value_t = 64)]
    l: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct DetcheckArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    h: f64,
    /// Re lambda of the determinant argument.
    #[arg(long, default_value_t = 2.0)]
    lambda_re: f64,
    /// Im lambda of the determinant argument.
    #[arg(long, default_value_t = 0.0)]
    lambda_im: f64,
    /// Block length.
    #[arg(long = "L", value_name = "L")]
    l: usize,
    /// Nystrom nodes for the Fredholm column (even, >= 16 L; default 512).
    #[arg(long = "N", value_name = "N")]
    n: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    /// Gamma grid: a number, "a,b,c", or "start:stop:count".
    #[arg(long)]
    gamma: String,
    /// Field grid: a number, "a,b,c", or "start:stop:count".
    #[arg(long)]
    h: String,
    /// Block length for the exact finite-L route.
    #[arg(long = "L", value_name = "L")]
    l: Option<usize>,
    #[command(flatten)]
    methods: MethodFlags,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    h: f64,
    /// Block length.
    #[arg(long = "L", value_name = "L")]
    l: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

enum CliError {
    /// Bad arguments or rejected parameters: exit 2.
    Usage(String),
    /// Core library failure, mapped to exit 1 or 2 by kind.
    Core(Error),
    /// Output I/O failure: exit 1.
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// Domain-style rejections exit 2 (the input was refused); everything else
/// is a numerical failure and exits 1.
fn core_exit_code(e: &Error) -> u8 {
    match e {
        Error::PhaseBoundary(_)
        | Error::DomainError(_)
        | Error::Degenerate(_)
        | Error::SizeError(_)
        | Error::ExcludedPoint(_)
        | Error::SingularityError(_)
        | Error::OnCutError(_) => 2,
        Error::NumericalError(_)
        | Error::ConvergenceError(_)
        | Error::QuadratureError(_)
        | Error::PurityError(_)
        | Error::SmallTauError(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(core_exit_code(&e))
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_settings(cli_config: Option<&PathBuf>) -> Result<Settings, CliError> {
    let path = cli_config
        .cloned()
        .or_else(|| std::env::var_os("XY_ENTROPY_CONFIG").map(PathBuf::from));
    match path {
        Some(p) => config::load_settings(&p).map_err(CliError::Usage),
        None => Ok(Settings::default()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = load_settings(cli.config.as_ref())?;
    match cli.cmd {
        Cmd::Entropy(a) => {
            let methods = a.methods.resolve(a.l.is_some());
            if methods.exact && a.l.is_none() {
                return Err(CliError::Usage(
                    "the exact finite-L route requires --L".into(),
                ));
            }
            let row = commands::compute_row(a.gamma, a.h, methods, a.l, &settings)?;
            let text = commands::render_row(&row, a.format.into());
            output::write_output(a.out.as_deref(), &text).map_err(CliError::Io)
        }
        Cmd::Converge(a) => {
            let rep = commands::converge(a.gamma, a.h, a.l, &settings)?;
            let text = commands::render_converge(&rep, a.format.into());
            output::write_output(a.out.as_deref(), &text).map_err(CliError::Io)
        }
        Cmd::Detcheck(a) => {
            let lambda = Complex64::new(a.lambda_re, a.lambda_im);
            let d = commands::detcheck(a.gamma, a.h, lambda, a.l, a.n, &settings)?;
            let text = commands::render_detcheck(&d, a.format.into());
            output::write_output(a.out.as_deref(), &text).map_err(CliError::Io)
        }
        Cmd::Sweep(a) => {
            let gammas = commands::parse_grid(&a.gamma).map_err(CliError::Usage)?;
            let hs = commands::parse_grid(&a.h).map_err(CliError::Usage)?;
            commands::validate_grid("gamma", &gammas, true).map_err(CliError::Usage)?;
            commands::validate_grid("h", &hs, false).map_err(CliError::Usage)?;
            let methods = a.methods.resolve(a.l.is_some());
            if methods.exact && a.l.is_none() {
                return Err(CliError::Usage(
                    "the exact finite-L route requires --L".into(),
                ));
            }
            let rows = commands::sweep_rows(&gammas, &hs, methods, a.l, &settings);
            let text = commands::render_rows(&rows, a.format.into());
            output::write_output(a.out.as_deref(), &text).map_err(CliError::Io)
        }
        Cmd::Spectrum(a) => {
            let nu = commands::spectrum_list(a.gamma, a.h, a.l, &settings)?;
            let text = commands::render_spectrum(a.gamma, a.h, a.l, &nu, a.format.into());
            output::write_output(a.out.as_deref(), &text).map_err(CliError::Io)
        }
    }
}
