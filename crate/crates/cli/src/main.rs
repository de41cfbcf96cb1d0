mod output;
mod pipeline;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use stages::*;

/// Citation and semantic landscapes from a bibliographic corpus.
#[derive(Parser, Debug)]
#[command(name = "scholnet")]
struct Cli {
    /// Worker threads for parallel stages (output does not depend on it).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Random seed, recorded in every output [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read references and links into a corpus store.
    Ingest(IngestArgs),
    /// Fill missing abstracts from a bibliographic catalog.
    Enrich(EnrichArgs),
    /// Build the citation graph and its core.
    CitationGraph(CitationGraphArgs),
    /// Louvain communities of a graph, optionally with a bootstrap test.
    Communities(CommunitiesArgs),
    /// Rank-size regimes of citation counts.
    Ranksize(RanksizeArgs),
    /// Maximal cliques of a graph.
    Cliques(CliquesArgs),
    /// Extract and score keywords from abstracts.
    Keywords(KeywordsArgs),
    /// Filter the keyword co-occurrence network and find its communities.
    SemanticGraph(SemanticGraphArgs),
    /// Evaluate the semantic network over a parameter grid.
    Sweep(SweepArgs),
    /// Originality, composition and correlation of the two classifications.
    Measures(MeasuresArgs),
    /// Run every stage from a configuration file.
    Pipeline(PipelineArgs),
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn version() -> String {
    format!(
        "{} (format {}, {}, rng {})",
        env!("CARGO_PKG_VERSION"),
        scholnet::FORMAT_VERSION,
        scholnet::keywords::SCORE_VERSION,
        scholnet::RNG_ALGORITHM
    )
}

fn set_threads(n: usize) -> Result<()> {
    if n == 0 {
        bail!("--threads must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    if let Some(n) = cli.threads {
        set_threads(n.into())?;
    }
    match cli.command {
        Command::Ingest(a) => ingest(&a, seed),
        Command::Enrich(a) => enrich_cmd(&a, seed),
        Command::CitationGraph(a) => citation_graph(&a, seed),
        Command::Communities(a) => {
            println!("{}", communities(&a, seed)?);
            Ok(())
        }
        Command::Ranksize(a) => ranksize(&a, seed),
        Command::Cliques(a) => {
            let n = cliques(&a, seed)?;
            eprintln!("cliques: {n}");
            Ok(())
        }
        Command::Keywords(a) => keywords(&a, seed),
        Command::SemanticGraph(a) => {
            println!("{}", semantic_graph(&a, seed)?);
            Ok(())
        }
        Command::Sweep(a) => {
            let grid = read_grid(&a.grid)?;
            let seed = cli.seed.unwrap_or(grid.seed);
            let n = sweep(&a.keywords, &grid, a.band, &a.out, seed)?;
            eprintln!("sweep: {n} points");
            Ok(())
        }
        Command::Measures(a) => measures(&a, seed),
        Command::Pipeline(a) => {
            let cfg = pipeline::RunConfig::load(&a.config)?;
            if cli.threads.is_none() {
                if let Some(n) = cfg.threads {
                    set_threads(n)?;
                }
            }
            let out = a.out.clone().unwrap_or_else(|| cfg.output.clone());
            for line in pipeline::run(&cfg, &out, cli.seed.unwrap_or(cfg.seed))? {
                println!("{line}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let version: &'static str = Box::leak(version().into_boxed_str());
    let matches = Cli::command().version(version).try_get_matches();
    let cli = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
