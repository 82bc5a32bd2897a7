//! Command-line front end for the `pittlab` library.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pittlab::config::Config;
use pittlab::experiments::{write_report, Status};
use pittlab::funcdsl::ScalarFn;
use pittlab::hankel::{radial_ft, RadialProfile};
use pittlab::varlp::{luxemburg_norm, scalar_profile, ExponentProfile, LineFunction};
use pittlab::weights::{check_21, check_bp, default_r_grid, Verdict, WeightProfile};
use pittlab::Error;

#[derive(Parser)]
#[command(
    name = "pittlab",
    version,
    about = "Variable-exponent norms, radial Fourier transforms and weight conditions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cond {
    Bp,
    #[value(name = "21")]
    TwoOne,
}

#[derive(Subcommand)]
enum Command {
    /// Luxemburg norm of the even extension of a profile.
    Norm {
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Fourier transform of a radial function at one frequency.
    Ft {
        #[arg(long)]
        f0: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Decide a weight condition.
    Check {
        #[arg(long, value_enum)]
        cond: Cond,
        #[arg(long)]
        v: String,
        #[arg(long)]
        p: String,
        /// Required for `bp`; `21` uses `n - 1`.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: usize,
    },
    /// Run the scenarios of a config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_FAILS: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 5;
const EXIT_SCENARIO_FAILED: u8 = 6;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotBracketable(_) | Error::Divergent(_) => 3,
        Error::NonConvergence(_) => 4,
        Error::InconsistentWithChecker(_) => EXIT_SCENARIO_FAILED,
        _ => 2,
    }
}

fn print_json<T: Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // A closed stdout (e.g. piped into `head`) is not an error for us.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("PITTLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("PITTLAB_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Error> {
    configure_threads()?;
    match cli.command {
        Command::Norm { f, p, tol } => {
            let f = ScalarFn::parse(&f)?;
            let p = ExponentProfile::parse(&p)?;
            let profile = scalar_profile(&f);
            let result = luxemburg_norm(&LineFunction::new(&profile, f.knots()), &p, tol)?;
            print_json(&result);
            Ok(0)
        }
        Command::Ft { f0, n, xi, tol } => {
            let sample = radial_ft(&RadialProfile::parse(&f0, n)?, xi, tol)?;
            print_json(&sample);
            Ok(0)
        }
        Command::Check { cond, v, p, alpha, n } => {
            let v = WeightProfile::parse(&v)?;
            let report = match cond {
                Cond::Bp => {
                    let alpha = alpha.ok_or_else(|| Error::InvalidInput("--alpha is required for bp".into()))?;
                    let p: f64 = p
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("--p must be a number for bp, got `{p}`")))?;
                    check_bp(&v, p, alpha, n, &default_r_grid())?
                }
                Cond::TwoOne => check_21(&v, &ExponentProfile::parse(&p)?, n, &default_r_grid())?,
            };
            print_json(&report);
            Ok(match report.verdict {
                Verdict::Holds => 0,
                Verdict::Fails => EXIT_FAILS,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::Experiment { config, scenario, out } => {
            let cfg = Config::load(&config)?;
            let mut scenarios = cfg.resolve()?;
            if let Some(name) = &scenario {
                scenarios.retain(|(n, _)| n == name);
                if scenarios.is_empty() {
                    return Err(Error::Config(format!("no scenario named `{name}`")));
                }
            }
            let dir = out.unwrap_or_else(|| cfg.output.path.clone());
            let mut failed = false;
            for (name, sc) in &scenarios {
                match sc.run(name) {
                    Ok(report) => {
                        write_report(&report, &dir, &cfg.output.formats)?;
                        println!("{} {name}", report.status);
                        failed |= report.status == Status::Fail;
                    }
                    Err(e) => {
                        eprintln!("{name}: {e}");
                        println!("{} {name}", Status::Fail);
                        failed = true;
                    }
                }
            }
            Ok(if failed { EXIT_SCENARIO_FAILED } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
