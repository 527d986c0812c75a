use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use specshift_cli::config::{ExperimentConfig, Overrides, Suite};
use specshift_cli::suites::run_suite;

/// Verification harness for two-variable spectral shift trace identities.
#[derive(Parser)]
#[command(name = "specshift", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dyadic band reconstruction checks.
    Dyadic(RunArgs),
    /// Corner-space compression diagnostics.
    Berg(RunArgs),
    /// Cross-path agreement of the four trace evaluators.
    TraceIdentity(RunArgs),
    /// Convergence of the compressed-measure integrals.
    MuConvergence(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; omitted fields are not supported (the file is a
    /// complete config). Flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Dimension override (system dim, or ambient dim for the corner
    /// suites).
    #[arg(long)]
    dim: Option<usize>,
    /// Number of seeded cases.
    #[arg(long)]
    cases: Option<usize>,
    /// Perturbation scale.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Output directory for report.json and CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Freeze timestamps and omit runtimes for byte-identical reports.
    #[arg(long)]
    fixed_clock: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (suite, args) = match &cli.command {
        Command::Dyadic(a) => (Suite::Dyadic, a),
        Command::Berg(a) => (Suite::Berg, a),
        Command::TraceIdentity(a) => (Suite::TraceIdentity, a),
        Command::MuConvergence(a) => (Suite::MuConvergence, a),
    };
    match execute(suite, args) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(suite: Suite, args: &RunArgs) -> anyhow::Result<bool> {
    let base = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            anyhow::ensure!(
                cfg.suite == suite,
                "config file is for suite '{}', command is '{}'",
                cfg.suite.name(),
                suite.name()
            );
            cfg
        }
        None => ExperimentConfig::default_for(suite),
    };
    let overrides = Overrides {
        seed: args.seed,
        dim: args.dim,
        cases: args.cases,
        epsilon: args.epsilon,
        fixed_clock: args.fixed_clock,
        out_dir: args.out.clone(),
    };
    let cfg = overrides.apply(base);

    let run = run_suite(&cfg)?;
    for rec in &run.report.records {
        println!(
            "{} {} seed={} case={} deviation={:.3e} tolerance={:.3e}",
            if rec.passed { "ok  " } else { "FAIL" },
            run.report.suite,
            rec.seed,
            rec.case_id,
            rec.deviation,
            rec.tolerance,
        );
    }
    println!(
        "{}: {} records, {} passed, {} failed, max deviation {:.3e}",
        run.report.suite,
        run.report.summary.total,
        run.report.summary.passed,
        run.report.summary.failed,
        run.report.summary.max_deviation,
    );

    if let Some(out) = &args.out {
        std::fs::create_dir_all(out)?;
        run.report.write_json(&out.join("report.json"))?;
        for artifact in &run.artifacts {
            std::fs::write(out.join(artifact.filename), &artifact.content)?;
        }
        println!("wrote {}", out.display());
    }

    if let Some(first) = run.report.first_failure() {
        eprintln!(
            "first failing record: {} (deviation {:.3e} > tolerance {:.3e})",
            first.case_id, first.deviation, first.tolerance
        );
    }
    Ok(run.report.all_passed())
}
