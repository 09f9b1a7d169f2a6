mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bloch_core::constructions::{
    counterexample_scan, counterexample_verify, example42_verify, threshold_n,
};
use bloch_core::error::Error;
use bloch_core::extremal::{search_extremal, SearchConfig};
use bloch_core::functionals::{functional_value, FunctionalSpec};
use bloch_core::norm::{
    seminorm, seminorm_general, seminorm_radial, DEFAULT_GENERAL_TOL, DEFAULT_RADIAL_TOL,
};
use bloch_core::poly::Coefficients;
use bloch_core::report::{
    bn_table, validate_payload, CommandEcho, CounterexamplePayload, FunctionalReport,
    ReportEnvelope,
};
use bloch_core::verify::{verify_suites, Suite};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use output::Format;

/// Numerical experiments on truncated area functionals over the Bloch space.
#[derive(Debug, Parser)]
#[command(name = "bloch", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for every random choice (search restarts).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Auto,
    General,
    Radial,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    All,
    Lemma,
    Prop41,
    Example42,
    Parseval,
    Counterexample,
    Marty,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Lemma => Suite::Lemma,
            SuiteArg::Prop41 => Suite::Prop41,
            SuiteArg::Example42 => Suite::Example42,
            SuiteArg::Parseval => Suite::Parseval,
            SuiteArg::Counterexample => Suite::Counterexample,
            SuiteArg::Marty => Suite::Marty,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
enum Command {
    /// Table of B_n, n B_n², the crude bound and their ratio.
    Bn {
        #[arg(long)]
        n_max: usize,
    },
    /// Bloch seminorm of a coefficient file.
    Norm {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Weighted functional F_n^t of a coefficient file.
    Functional {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
    },
    /// Multi-start estimate of the extremal value M_n^t.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        /// Degree cap D (defaults to n + 2, or n with --nonneg).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Restrict to nonnegative real coefficients.
        #[arg(long)]
        nonneg: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 4000)]
        max_iters: usize,
    },
    /// The z + b_n z^n construction for t < 1.
    Counterexample {
        #[arg(long)]
        t: f64,
        /// Defaults to the threshold N(t).
        #[arg(long)]
        n: Option<usize>,
        /// Also scan every n below N(t) and report where the norm test starts passing.
        #[arg(long)]
        scan_min_failing: bool,
    },
    /// Norm chain ‖F‖ > ‖p_n‖ > ‖f‖ around z + B_n z^n.
    Example42 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bn { .. } => "bn",
            Command::Norm { .. } => "norm",
            Command::Functional { .. } => "functional",
            Command::Search { .. } => "search",
            Command::Counterexample { .. } => "counterexample",
            Command::Example42 { .. } => "example42",
            Command::Verify { .. } => "verify",
        }
    }
}

enum Failure {
    Invalid(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => Failure::Violation(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_coeffs(path: &PathBuf) -> Result<Coefficients, Failure> {
    Coefficients::read_json(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Runs the command; the boolean is false when a verify suite failed.
fn dispatch(command: &Command, seed: u64) -> Result<(Value, bool), Failure> {
    let payload = match *command {
        Command::Bn { n_max } => {
            if n_max == 0 {
                return Err(Failure::Invalid("n_max must be at least 1".into()));
            }
            to_value(bn_table(n_max)?)
        }
        Command::Norm {
            ref coeffs,
            method,
            tol,
        } => {
            let f = read_coeffs(coeffs)?;
            let result = match method {
                Method::Auto if f.is_nonnegative_real() => {
                    seminorm_radial(&f, tol.unwrap_or(DEFAULT_RADIAL_TOL))
                }
                Method::Auto => seminorm(&f, tol.unwrap_or(DEFAULT_GENERAL_TOL)),
                Method::General => seminorm_general(&f, tol.unwrap_or(DEFAULT_GENERAL_TOL)),
                Method::Radial => seminorm_radial(&f, tol.unwrap_or(DEFAULT_RADIAL_TOL)),
            }?;
            to_value(result)
        }
        Command::Functional { ref coeffs, n, t } => {
            let f = read_coeffs(coeffs)?;
            let spec = FunctionalSpec::new(n, t)?;
            to_value(FunctionalReport {
                n,
                t,
                value: functional_value(&f, spec),
                conjectured_bound: spec.conjectured_bound(),
            })
        }
        Command::Search {
            n,
            t,
            degree,
            restarts,
            nonneg,
            tol,
            max_iters,
        } => {
            let mut config = SearchConfig::new(n, t, nonneg);
            if let Some(d) = degree {
                config.degree_cap = d;
            }
            config.restarts = restarts;
            config.seed = seed;
            config.tol = tol;
            config.max_iters = max_iters;
            to_value(search_extremal(&config)?)
        }
        Command::Counterexample {
            t,
            n,
            scan_min_failing,
        } => {
            let n = match n {
                Some(n) => n,
                None => usize::try_from(threshold_n(t)?)
                    .map_err(|_| Failure::Invalid("threshold does not fit in memory".into()))?,
            };
            let report = counterexample_verify(t, n)?;
            let scan = scan_min_failing
                .then(|| counterexample_scan(t))
                .transpose()?;
            to_value(CounterexamplePayload { report, scan })
        }
        Command::Example42 { n, epsilon } => to_value(example42_verify(n, epsilon)?),
        Command::Verify { suite } => {
            let summary = verify_suites(suite.into())?;
            let passed = summary.passed;
            return Ok((to_value(summary), passed));
        }
    };
    Ok((payload, true))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let start = Instant::now();
    let (payload, passed) = dispatch(&cli.command, cli.seed)?;
    let name = cli.command.name();
    validate_payload(name, &payload)
        .map_err(|e| Failure::Violation(format!("payload failed schema validation: {e}")))?;
    let parameters = match to_value(&cli.command) {
        Value::Object(map) => map,
        _ => Map::new(),
    };
    let envelope = ReportEnvelope::new(
        CommandEcho {
            name: name.to_string(),
            parameters,
        },
        cli.seed,
        payload,
        start.elapsed().as_secs_f64(),
    );
    let text = output::render(&envelope, cli.format)
        .map_err(|e| Failure::Invalid(format!("cannot render report: {e}")))?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("bloch: verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("bloch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("bloch: invalid input: {msg}");
            ExitCode::from(2)
        }
    }
}
