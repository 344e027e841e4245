//! `shootout`: tables, curves and checks for penalty-shootout kicking rules.

mod check;
mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use shootout::engine::{KickPair, Probability, ScoringModel};
use shootout::mechanisms::Mechanism;

use commands::{load_model, parse_pair, ComplexityArgs, Outcome, SweepArgs};
use error::CliError;
use output::{digest, emit, Format, RunManifest};

#[derive(Parser)]
#[command(
    name = "shootout",
    version,
    about = "Exact analysis of penalty-shootout kicking rules"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Directory for data files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Compare against published values; exit 1 on mismatch.
    #[arg(long, global = true)]
    check: bool,
    /// RNG seed for `simulate`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Preset (`brams`, `apesteguia2010`) or path to a model config file.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Arith::Exact)]
    arith: Arith,
    /// Print errors to stderr as JSON.
    #[arg(long, global = true)]
    error_json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arith {
    /// Rational arithmetic; results carry `num/den`.
    Exact,
    Float,
}

impl Arith {
    fn label(self) -> &'static str {
        match self {
            Arith::Exact => "exact-rational",
            Arith::Float => "f64",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Win probability of A for 1 to 8 regular rounds under each alternative rule.
    Table3,
    /// Win probability of A as q varies with p held fixed.
    Sweep {
        #[arg(long)]
        p: Probability,
        #[arg(long, default_value = "1/2")]
        q_from: Probability,
        /// Defaults to p.
        #[arg(long)]
        q_to: Option<Probability>,
        #[arg(long, default_value = "1/100")]
        q_step: Probability,
        /// Repeatable; defaults to catchup, adj-catchup and abba.
        #[arg(long = "mechanism")]
        mechanisms: Vec<Mechanism>,
        #[arg(long, default_value_t = 5)]
        rounds: u32,
    },
    /// Per-round model under several sudden-death pairs.
    Empirical {
        /// Sudden-death pair `p,q`; repeatable.
        #[arg(long = "sd", value_parser = parse_pair)]
        sd: Vec<KickPair>,
        #[arg(long)]
        rounds: Option<u32>,
    },
    /// Critical sudden-death first-mover probabilities and the region boundaries.
    Region {
        #[arg(long)]
        rounds: Option<u32>,
    },
    /// Probability of reaching sudden death and expected number of kicks.
    Ties {
        /// Uniform pair `p,q`, compared alongside the model; repeatable.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<KickPair>,
        #[arg(long)]
        rounds: Option<u32>,
    },
    /// Fewest yes/no history questions that name each round's first kicker.
    Complexity {
        /// Defaults to the rules with published values.
        mechanisms: Vec<Mechanism>,
        #[arg(long, default_value_t = 5)]
        rounds: u32,
        #[arg(long, default_value_t = 8)]
        horizon: u32,
        #[arg(long, default_value_t = shootout::complexity::MAX_SEARCH_DEPTH)]
        max_depth: usize,
    },
    /// States where a deliberate miss raises the kicker's winning chance.
    Strategy {
        mechanism: Mechanism,
        /// With --q, a uniform model in place of --model.
        #[arg(long, requires = "q")]
        p: Option<Probability>,
        #[arg(long, requires = "p")]
        q: Option<Probability>,
        #[arg(long, default_value_t = 5)]
        rounds: u32,
    },
    /// Monte Carlo estimate of the outcome distribution.
    Simulate {
        mechanism: Mechanism,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long)]
        rounds: Option<u32>,
    },
    /// First kicker of each round for a sequence of kicks such as `SS.MM.SM`.
    Replay {
        mechanism: Mechanism,
        kicks: String,
        #[arg(long, default_value_t = 5)]
        rounds: u32,
    },
}

macro_rules! with_scalar {
    ($arith:expr, $f:ident ( $($a:expr),* $(,)? )) => {
        match $arith {
            Arith::Exact => commands::$f::<BigRational>($($a),*),
            Arith::Float => commands::$f::<f64>($($a),*),
        }
    };
}

fn no_model(c: &Common, command: &str) -> Result<(), CliError> {
    match c.model {
        Some(_) => Err(CliError::Usage(format!("{command} does not take --model"))),
        None => Ok(()),
    }
}

fn dispatch(c: &Common, command: Command) -> Result<Outcome, CliError> {
    let model = |default| load_model(c.model.as_deref(), default);
    if c.seed.is_some() && !matches!(command, Command::Simulate { .. }) {
        return Err(CliError::Usage("--seed only applies to simulate".into()));
    }
    match command {
        Command::Table3 => with_scalar!(c.arith, cmd_table3(model("brams")?)),
        Command::Sweep {
            p,
            q_from,
            q_to,
            q_step,
            mechanisms,
            rounds,
        } => {
            let m = c.model.as_deref().map(|_| model("brams")).transpose()?;
            let args = SweepArgs {
                p,
                q_from,
                q_to,
                q_step,
                mechanisms,
                rounds,
            };
            with_scalar!(c.arith, cmd_sweep(args, m))
        }
        Command::Empirical { sd, rounds } => {
            with_scalar!(c.arith, cmd_empirical(model("apesteguia2010")?, rounds, sd))
        }
        Command::Region { rounds } => commands::cmd_region(model("apesteguia2010")?, rounds),
        Command::Ties { pairs, rounds } => {
            with_scalar!(c.arith, cmd_ties(model("apesteguia2010")?, rounds, pairs))
        }
        Command::Complexity {
            mechanisms,
            rounds,
            horizon,
            max_depth,
        } => {
            no_model(c, "complexity")?;
            commands::cmd_complexity(ComplexityArgs {
                mechanisms,
                rounds,
                horizon,
                max_depth,
            })
        }
        Command::Strategy {
            mechanism,
            p,
            q,
            rounds,
        } => {
            let m = match (p, q) {
                (Some(p), Some(q)) => {
                    if c.model.is_some() {
                        return Err(CliError::Usage("give either --p/--q or --model".into()));
                    }
                    ScoringModel::uniform(KickPair::new(p, q))?
                }
                _ => model("brams")?,
            };
            with_scalar!(c.arith, cmd_strategy(mechanism, m, rounds))
        }
        Command::Simulate {
            mechanism,
            trials,
            rounds,
        } => commands::cmd_simulate(
            mechanism,
            model("brams")?,
            rounds,
            c.seed.unwrap_or(0),
            trials,
        ),
        Command::Replay {
            mechanism,
            kicks,
            rounds,
        } => {
            no_model(c, "replay")?;
            commands::cmd_replay(mechanism, &kicks, rounds)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = cli.common;
    let outcome = dispatch(&c, cli.command)?;
    let mut manifest = RunManifest::new(std::env::args().skip(1).collect(), c.arith.label());
    manifest.config_digest = outcome
        .model
        .as_ref()
        .map(|m| digest(&m.to_config_string()));
    manifest.seeds = outcome.seeds.clone();
    for path in emit(&outcome.datasets, c.format, c.out.as_deref(), manifest)? {
        eprintln!("wrote {}", path.display());
    }
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    if c.check {
        eprintln!("{}", outcome.check.finish()?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let error_json = cli.common.error_json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if error_json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {e}");
                if let CliError::Check(failures) = &e {
                    const SHOWN: usize = 20;
                    for f in failures.iter().take(SHOWN) {
                        eprintln!("  {f}");
                    }
                    if failures.len() > SHOWN {
                        eprintln!("  ... and {} more", failures.len() - SHOWN);
                    }
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
