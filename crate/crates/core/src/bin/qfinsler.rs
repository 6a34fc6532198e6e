use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qfinsler::lab::{run, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(version, about = "Girth, Holmes-Thompson volume and duality checks for quotient Finsler structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment config; its `experiment` field is overridden by the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for `<suite>.csv` and `<suite>.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Planar girths, bounds, pointwise comparison and continuity.
    Girth2d,
    /// Girths in space and the characteristic flow.
    Girth3d,
    /// Holmes-Thompson volumes.
    Htvol,
    /// Grassmannian girth, rank constancy and the geodesic correspondence.
    Grassmann,
    /// Every suite.
    All,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Girth2d => Experiment::Girth2d,
            Command::Girth3d => Experiment::Girth3d,
            Command::Htvol => Experiment::Htvol,
            Command::Grassmann => Experiment::Grassmann,
            Command::All => Experiment::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::new(cli.command.into()),
    };
    cfg.experiment = cli.command.into();
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 || rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            eprintln!("--jobs must be a positive thread count");
            return ExitCode::from(2);
        }
    }
    let report = run(&cfg);
    for row in &report.rows {
        let mark = if row.pass { "ok  " } else { "FAIL" };
        println!("{mark} {:<40} {:<44} {:>14.8} ref {:>14.8} margin {:+.3e}", row.case_id, row.quantity, row.value, row.reference, row.margin);
    }
    let failed = report.failures().count();
    println!("{} rows, {failed} failed, {:.1} s", report.rows.len(), report.metadata.wall_time_s);
    if let Some(dir) = cli.out.as_ref().or(cfg.output.as_ref()) {
        match report.write(dir) {
            Ok((csv, json)) => println!("wrote {} and {}", csv.display(), json.display()),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) }
}
