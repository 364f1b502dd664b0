use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pdpalign::alignment::{
    check_intra_cell, full_shift_domain, optimize_exhaustive, optimize_full_length, AlignmentPlan,
    FullLengthOptions, DEFAULT_PLAN_CAP,
};
use pdpalign::harness::{emit_results, run_experiment, ExperimentConfig, OutputFormat};
use pdpalign::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Multi-cell pilot alignment simulator")]
struct Cli {
    /// Overrides master_seed of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte-Carlo experiment and write its results.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the plan chosen for one run's geometry.
    Align {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Search::ToneGroup)]
        scheme: Search,
        #[arg(long, default_value_t = 0)]
        run: usize,
    },
    /// Check intra-cell orthogonality of a plan (the configured one by default).
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    ToneGroup,
    FullLength,
    Exhaustive,
}

fn load(path: &std::path::Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            format,
        } => {
            let cfg = load(&config, cli.seed)?;
            let records = run_experiment(&cfg)?;
            let format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            };
            emit_results(&records, &cfg, &out, format)?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Align {
            config,
            scheme,
            run,
        } => {
            let cfg = load(&config, cli.seed)?;
            let problem = cfg.problem(run)?;
            let plan = match scheme {
                Search::ToneGroup => cfg.best_plan(&problem)?,
                Search::FullLength => optimize_full_length(&problem, FullLengthOptions::default())?,
                Search::Exhaustive => {
                    optimize_exhaustive(&problem, &full_shift_domain(&problem), DEFAULT_PLAN_CAP)?
                }
            };
            let cost = problem.alignment_cost(&plan)?;
            println!("{}", plan.to_json());
            eprintln!("cost {:.8e}", cost.total);
        }
        Command::Check { config, plan } => {
            let cfg = load(&config, cli.seed)?;
            let plan = match plan {
                Some(p) => AlignmentPlan::load(&p)?,
                None => cfg.plan.clone().ok_or_else(|| {
                    Error::InvalidConfig("no plan given and none in the config".into())
                })?,
            };
            plan.validate_shape(cfg.topology.n_cells, cfg.topology.users_per_cell)?;
            check_intra_cell(&plan, &cfg.pdp_set()?.on_grid(plan.sequence_length)?)?;
            println!("ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
