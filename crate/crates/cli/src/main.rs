use std::path::PathBuf;
use std::process::ExitCode;

use asympolar::asymlimit::Side;
use asympolar_cli::commands::{self, IterateArgs, LieArgs, PredictArgs};
use asympolar_cli::config::{parse_schedule, parse_vector, tolerances_from_env};
use asympolar_cli::selftest::{self, SelftestConfig, CONVERGENCE_TOL};
use asympolar_cli::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "asympolar", version, about = "Limits of |B A^m C|^(1/m) and their SL(n,R) analogue")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Exponents as start:factor:max.
    #[arg(long)]
    schedule: Option<String>,
    /// Pass threshold for the final error.
    #[arg(long, default_value_t = CONVERGENCE_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "right")]
    side: SideArg,
    /// Seed for matrices given as "random".
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Schedule entries evaluated in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form limit.
    Predict {
        /// Matrix or Jordan spec of A.
        #[arg(long)]
        a: String,
        /// Left factor (identity when absent; "random" for a seeded draw).
        #[arg(long)]
        b: Option<String>,
        /// Right factor (identity when absent; "random" for a seeded draw).
        #[arg(long)]
        c: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Iterates along a schedule and writes a CSV convergence report.
    Iterate {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Growth rate of ||A^m x||^(1/m) and the modulus group of x.
    Classify {
        #[arg(long)]
        a: String,
        /// Comma-separated entries, each re or re:im.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        common: Common,
    },
    /// Limit of |g1 g^m g2|^(1/m) in SL(n,R) with an Ad-level cross-check.
    Lie {
        #[arg(long)]
        g: String,
        #[arg(long)]
        g1: Option<String>,
        #[arg(long)]
        g2: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the acceptance suites.
    Selftest {
        /// Short schedules (m up to 2^10).
        #[arg(long, conflicts_with = "full")]
        fast: bool,
        /// Full schedules (m up to 2^16); the default.
        #[arg(long)]
        full: bool,
        /// Run a single suite by name.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => commands::write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = tolerances_from_env()?;
    match cli.command {
        Cmd::Predict { a, b, c, common } => {
            let args = PredictArgs {
                a,
                b,
                c,
                side: common.side.into(),
                seed: common.seed,
            };
            let v = commands::predict(&args, &tol)?;
            emit(common.out.as_ref(), &json_text(&v))
        }
        Cmd::Iterate { a, b, c, common } => {
            let args = IterateArgs {
                a,
                b,
                c,
                schedule: parse_schedule(common.schedule.as_deref())?,
                side: common.side.into(),
                seed: common.seed,
                jobs: common.jobs,
                tol: common.tol,
            };
            let o = commands::iterate(&args, &tol)?;
            emit(common.out.as_ref(), &o.csv)?;
            eprintln!("{}", o.summary(common.tol));
            if o.passed {
                Ok(())
            } else {
                Err(CliError::CheckFailed(o.summary(common.tol)))
            }
        }
        Cmd::Classify { a, x, common } => {
            let x = parse_vector(&x)?;
            let schedule = parse_schedule(common.schedule.as_deref())?;
            let v = commands::classify(&a, &x, &schedule, &tol)?;
            emit(common.out.as_ref(), &json_text(&v))
        }
        Cmd::Lie { g, g1, g2, common } => {
            let schedule = parse_schedule(common.schedule.as_deref())?;
            let args = LieArgs {
                g,
                g1,
                g2,
                m: *schedule.last().expect("nonempty schedule"),
                tol: common.tol,
            };
            let o = commands::lie(&args)?;
            emit(common.out.as_ref(), &json_text(&o.report))?;
            if o.agree {
                Ok(())
            } else {
                Err(CliError::CheckFailed("group limit and Ad-level prediction disagree".into()))
            }
        }
        Cmd::Selftest {
            fast,
            full: _,
            suite,
            seed,
            jobs,
        } => {
            let mut cfg = if fast {
                SelftestConfig::fast(seed)
            } else {
                SelftestConfig::full(seed)
            };
            cfg.jobs = jobs;
            let outcomes = match suite {
                Some(name) => vec![selftest::run_suite(&name, &cfg)?],
                None => selftest::run_all(&cfg),
            };
            print!("{}", selftest::render(&outcomes));
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!("{failed} suite(s) failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
