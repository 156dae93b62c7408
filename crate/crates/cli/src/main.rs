use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use garbage_game::Threshold;
use garbage_game_cli::{
    cmd_simulate, cmd_spectral, cmd_verify, CliError, GraphSource, InitSource, RunConfig, Suite,
};

#[derive(Parser)]
#[command(name = "gdgame", version, about = "Garbage disposal game simulator and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Generator: path:N, cycle:N, star:N, complete:N, erdos_renyi:N:P
    #[arg(long, value_name = "KIND:PARAMS")]
    generate: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the dynamic and emit a trajectory CSV and summary JSON
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated initial amounts, one per vertex
        #[arg(long, conflicts_with = "init_random")]
        init: Option<String>,
        /// Seeded random initial amounts, e.g. uniform:0:10
        #[arg(long, value_name = "DIST")]
        init_random: Option<String>,
        /// Confidence threshold: positive real or "inf"
        #[arg(long, default_value = "inf")]
        epsilon: String,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Trajectory CSV path
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Summary JSON path; printed to stdout when omitted
        #[arg(long, value_name = "PATH")]
        summary: Option<PathBuf>,
        /// Re-check every step's invariants before writing
        #[arg(long)]
        validate: bool,
    },
    /// Run a randomized property suite
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph order range lo:hi
        #[arg(long, default_value = "3:10")]
        sizes: String,
    },
    /// Print the spectral report of a connected graph (order <= 20)
    Spectral {
        #[command(flatten)]
        graph: GraphArgs,
    },
}

fn parse_sizes(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid size range {text:?}, expected lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?))
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Simulate {
            graph,
            init,
            init_random,
            epsilon,
            max_steps,
            tol,
            out,
            summary,
            validate,
        } => {
            let source = GraphSource::from_flags(graph.graph.as_deref(), graph.generate.as_deref())?;
            let init = match (init, init_random) {
                (Some(list), None) => InitSource::parse_list(&list)?,
                (None, Some(dist)) => InitSource::parse_distribution(&dist)?,
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --init or --init-random is required".into(),
                    ))
                }
            };
            let mut config = RunConfig::new(source, init);
            config.epsilon = epsilon.parse::<Threshold>()?;
            config.max_steps = max_steps;
            config.convergence_tol = tol;
            config.seed = graph.seed;
            config.csv_out = out;
            config.summary_out = summary;
            config.validate = validate;
            let output = cmd_simulate(&config)?;
            if config.summary_out.is_none() {
                print!("{}", output.summary_json);
            }
            Ok(true)
        }
        Command::Verify {
            suite,
            trials,
            seed,
            sizes,
        } => {
            let report = cmd_verify(suite.parse::<Suite>()?, trials, seed, parse_sizes(&sizes)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
        Command::Spectral { graph } => {
            let source = GraphSource::from_flags(graph.graph.as_deref(), graph.generate.as_deref())?;
            let (_, json) = cmd_spectral(&source, graph.seed)?;
            print!("{json}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
