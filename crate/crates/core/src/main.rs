use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use ddapprox::approx::{LevelStrategy, Scheme};
use ddapprox::cli::{self, OutputFormat, RunConfig, Source};
use ddapprox::{Error, Normalization, Result};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Sampling,
    Threshold,
    TargetFidelity,
    PerLevel,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Human,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormalizationArg {
    Magnitude,
    Phase,
}

/// Approximate quantum states represented as decision diagrams.
#[derive(Debug, Parser)]
#[command(name = "ddapprox", version)]
#[command(group(ArgGroup::new("source").required(true).args(["circuit", "builtin"])))]
struct Args {
    /// Circuit file to simulate.
    #[arg(long)]
    circuit: Option<PathBuf>,

    /// Built-in state: fig2 | ghz [n] | qft [n] | random [n] [depth] [seed].
    #[arg(long, num_args = 1..=4, value_names = ["NAME", "N", "DEPTH", "SEED"])]
    builtin: Option<Vec<String>>,

    #[arg(long, value_enum, default_value = "target-fidelity")]
    scheme: SchemeArg,

    /// Number of sampled traversals (sampling, threshold).
    #[arg(long, default_value_t = 1000)]
    traversals: u64,

    /// Keep threshold on visit counts (threshold).
    #[arg(long, default_value_t = 0)]
    tau: u64,

    /// Target fidelity (target-fidelity, per-level).
    #[arg(long, default_value_t = 0.9)]
    fidelity: f64,

    /// Elimination level for target-fidelity: `best` or a level index.
    #[arg(long, default_value = "best")]
    level: String,

    /// Seed for the traversal sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Write the report row (or sweep table) as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,

    #[arg(long)]
    dot_before: Option<PathBuf>,

    #[arg(long)]
    dot_after: Option<PathBuf>,

    /// Dump the approximated amplitudes (at most 20 qubits).
    #[arg(long)]
    dump_vector: Option<PathBuf>,

    /// Comma-separated values for the scheme's main parameter (L, tau or f).
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,

    #[arg(long, value_enum, default_value = "magnitude")]
    normalization: NormalizationArg,
}

fn config(args: &Args) -> Result<RunConfig> {
    let source = match (&args.circuit, &args.builtin) {
        (Some(path), _) => Source::Circuit(path.clone()),
        (None, Some(b)) => Source::builtin(b)?,
        (None, None) => return Err(Error::InvalidParameter("no state source given".into())),
    };
    let level = match args.level.as_str() {
        "best" => LevelStrategy::Best,
        l => LevelStrategy::Fixed(
            l.parse()
                .map_err(|_| Error::InvalidParameter(format!("invalid level `{l}`")))?,
        ),
    };
    let scheme = match args.scheme {
        SchemeArg::Sampling => Scheme::Sampling { traversals: args.traversals, seed: args.seed },
        SchemeArg::Threshold => Scheme::Threshold { traversals: args.traversals, tau: args.tau, seed: args.seed },
        SchemeArg::TargetFidelity => Scheme::TargetFidelity { fidelity: args.fidelity, level },
        SchemeArg::PerLevel => Scheme::FidelityPerLevel { fidelity: args.fidelity },
    };
    let mut config = RunConfig::new(source, scheme);
    config.normalization = match args.normalization {
        NormalizationArg::Magnitude => Normalization::Magnitude,
        NormalizationArg::Phase => Normalization::Phase,
    };
    config.format = match args.format {
        FormatArg::Human => OutputFormat::Human,
        FormatArg::Csv => OutputFormat::Csv,
    };
    config.dot_before = args.dot_before.clone();
    config.dot_after = args.dot_after.clone();
    config.dump_vector = args.dump_vector.clone();
    if args.sweep.is_none() {
        config.csv = args.csv.clone();
    }
    Ok(config)
}

fn execute(args: &Args) -> Result<()> {
    let config = config(args)?;
    if let Some(grid) = &args.sweep {
        let table = cli::sweep_csv(&cli::sweep(&config, grid)?);
        match &args.csv {
            Some(path) => fs::write(path, table)?,
            None => print!("{table}"),
        }
        return Ok(());
    }
    let out = cli::run(&config)?;
    match config.format {
        OutputFormat::Human => print!("{}", cli::human_report(&out.benchmark, &out.report)),
        OutputFormat::Csv => println!("{}\n{}", cli::CSV_HEADER, cli::csv_row(&out.benchmark, &out.report)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
