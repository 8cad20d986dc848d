use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gevrey_lab::lab::{run_criterion, run_stage, RunOptions, Scenario, Stage, CRITERIA};
use gevrey_lab::LabError;

/// Pseudospectral Navier–Stokes/Burgers lab with Gevrey-norm diagnostics.
#[derive(Parser)]
#[command(name = "gevrey-lab", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the scenario output directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Print nothing but errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Norm series, radius and decay fits of the exact Burgers example.
    Oracle,
    /// March the scenario on the torus and run its checks.
    Simulate,
    /// Picard iteration with contraction constants.
    Fixpoint,
    /// Growth-bound and differential-inequality checks.
    Diagnose,
    /// Paired perturbed runs and the linear-response report.
    Stability,
    /// Run the acceptance checks.
    Verify {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

fn fail(e: &LabError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    if let Some(n) = c.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let stage = match &cli.command {
        Command::Verify { only } => {
            let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only.clone() };
            let mut all = true;
            for id in ids {
                let r = run_criterion(id);
                all &= r.passed;
                if !c.quiet || !r.passed {
                    println!("{r}");
                }
            }
            return if all { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
        Command::Oracle => Stage::Oracle,
        Command::Simulate => Stage::Simulate,
        Command::Fixpoint => Stage::Fixpoint,
        Command::Diagnose => Stage::Diagnose,
        Command::Stability => Stage::Stability,
    };
    let Some(path) = &c.config else {
        eprintln!("error: --config <path> is required for this command");
        return ExitCode::from(2);
    };
    let scenario = match Scenario::parse_file(path) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let opts = RunOptions {
        out_dir: c.out_dir.clone(),
        seed: c.seed,
    };
    match run_stage(&scenario, stage, &opts) {
        Ok(summary) => {
            if !c.quiet {
                for line in &summary.lines {
                    println!("{line}");
                }
                for p in &summary.artifacts {
                    println!("wrote {}", p.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
