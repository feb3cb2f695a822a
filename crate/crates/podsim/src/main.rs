use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use podsim::commands;
use podsim::config::{self, CensusFile, GraphFile, HomophilyFile, ModelFile, RunFile};
use podsim::runner::Runner;
use podsim::{presets, CliError, Result};

/// Belief contagion experiments on social graphs.
#[derive(Debug, Parser)]
#[command(name = "podsim", version)]
struct Cli {
    /// Directory that receives every output file.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the seed (or a suite's root seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for independent runs; defaults to one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run repeated simulations and write the mean/variance trace.
    Run { config: String },
    /// Run one of the bundled suites.
    Suite { name: String },
    /// Generate a graph and write it in the edge-list format.
    Graph { config: String },
    /// Write the 7x7 table of a cognitive model's adoption probabilities.
    BetaTable { config: String },
    /// Path census: how often a belief-bounded route reaches each belief level.
    Census { config: String },
    /// Per-edge homophily over consecutive seeds.
    Homophily { config: String },
    /// List the bundled presets.
    Presets,
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn execute(cli: Cli) -> Result<()> {
    let Format::Csv = cli.format;
    let runner = Runner::new(cli.workers)?;
    let out = cli.out.as_path();
    match cli.command {
        Command::Run { config } => {
            let (mut file, stem) = config::load::<RunFile>(&config)?;
            if let Some(s) = cli.seed {
                file.seed = s;
            }
            let e = file.validate(&stem)?;
            print_paths(&commands::run(&e, &runner, out)?);
        }
        Command::Suite { name } => {
            print_paths(&commands::suite(&name, cli.seed, &runner, out)?);
        }
        Command::Graph { config } => {
            let (mut file, stem) = config::load::<GraphFile>(&config)?;
            if let Some(s) = cli.seed {
                file.seed = s;
            }
            let name = file.name.clone().unwrap_or(stem);
            let (paths, report) = commands::graph(&file, &name, out)?;
            let h = report
                .homophily
                .map(|h| format!("{h:.4}"))
                .unwrap_or_else(|| "n/a".into());
            eprintln!(
                "nodes {} edges {} homophily {h}",
                report.nodes, report.edges
            );
            print_paths(&paths);
        }
        Command::BetaTable { config } => {
            let (file, stem) = config::load::<ModelFile>(&config)?;
            let name = file.name.clone().unwrap_or(stem);
            print_paths(&commands::beta_table_cmd(&file, &name, out)?);
        }
        Command::Census { config } => {
            let (mut file, stem) = config::load::<CensusFile>(&config)?;
            if let Some(s) = cli.seed {
                file.seed = s;
            }
            let name = file.name.clone().unwrap_or(stem);
            print_paths(&commands::census(&file, &name, out)?);
        }
        Command::Homophily { config } => {
            let (mut file, stem) = config::load::<HomophilyFile>(&config)?;
            if let Some(s) = cli.seed {
                file.seed = s;
            }
            let name = file.name.clone().unwrap_or(stem);
            print_paths(&commands::homophily_cmd(&file, &name, &runner, out)?);
        }
        Command::Presets => {
            for name in presets::names() {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_owned());
            eprintln!("{}", err.to_json_line());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json_line());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
