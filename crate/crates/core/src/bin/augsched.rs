use std::path::PathBuf;
use std::process::ExitCode;

use augsched::experiment::{Algorithm, Experiment, ExperimentConfig, GraphSource, DEFAULT_SLOPE_THRESHOLD};
use augsched::traffic::LoadPreset;
use clap::Parser;

/// Simulate the size-k augmentation scheduler (or the maximal-matching
/// baseline) over a sweep of loads and write per-run metrics as CSV.
#[derive(Parser, Debug)]
#[command(name = "augsched", version)]
struct Cli {
    /// Network: `grid:<rows>x<cols>` or `file:<path>`.
    #[arg(long, default_value = "grid:11x11")]
    graph: GraphSource,

    /// Scheduler: `aug` or `mm`.
    #[arg(long, default_value = "aug")]
    algo: Algorithm,

    /// Maximum augmentation size.
    #[arg(long, default_value_t = 2)]
    k: usize,

    /// Probability that a node becomes a seed.
    #[arg(long, default_value_t = 0.2)]
    p: f64,

    /// Load direction: `fig5`, `fig6` (grids) or `uniform` (λ/Δ per link).
    #[arg(long, default_value = "fig5")]
    preset: LoadPreset,

    /// Comma-separated load values λ.
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,

    /// Slots per run.
    #[arg(long, default_value_t = 100_000)]
    slots: u64,

    /// Slots excluded from the backlog average (default: 20% of --slots).
    #[arg(long)]
    warmup: Option<u64>,

    /// Comma-separated RNG seeds; each λ runs once per seed.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seed: Vec<u64>,

    /// Stability threshold on the backlog slope, packets per slot.
    #[arg(long, default_value_t = DEFAULT_SLOPE_THRESHOLD)]
    threshold: f64,

    /// Phase duration, for the control-overhead column.
    #[arg(long, requires = "cycle_time")]
    phase_time: Option<f64>,

    /// Scheduling-cycle duration, for the control-overhead column.
    #[arg(long, requires = "phase_time")]
    cycle_time: Option<f64>,

    /// Metrics CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write control-part message traces of the first slots of the first run.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = ExperimentConfig {
        graph: cli.graph,
        algorithm: cli.algo,
        k: cli.k,
        p: cli.p,
        preset: cli.preset,
        lambdas: cli.lambda,
        horizon: cli.slots,
        warmup: cli.warmup.unwrap_or(cli.slots / 5),
        seeds: cli.seed,
        slope_threshold: cli.threshold,
        phase_time: cli.phase_time,
        cycle_time: cli.cycle_time,
        out: cli.out,
        trace: cli.trace,
    };
    let rows = match Experiment::new(config).and_then(|e| e.run_and_write()) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("augsched: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("{:>8} {:>5} {:>6} {:>14} {:>12} {:>7}", "lambda", "algo", "seed", "avg_backlog", "slope", "stable");
    for r in rows {
        println!(
            "{:>8} {:>5} {:>6} {:>14.2} {:>12.5} {:>7}",
            r.lambda, r.algorithm, r.seed, r.avg_total_backlog, r.backlog_slope, r.stable
        );
    }
    ExitCode::SUCCESS
}
