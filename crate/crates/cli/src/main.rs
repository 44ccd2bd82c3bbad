use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use sdplan_cli::bench::{write_records, RESULTS_FILE};
use sdplan_cli::{
    emit_curves, emit_svg_layers, emit_svg_scene, load_scenario, run_benchmark, run_planner, run_sweep, write_sweep,
    BalanceArg, BenchOptions, PlannerKind, PlannerOptions,
};
use sdplan_core::smooth::DEFAULT_SMOOTH_ITERATIONS;
use sdplan_core::{path_cost, shortcut, Outcome, SmoothParams};
use serde_json::json;

#[derive(Parser)]
#[command(name = "sdplan", version, about = "Layered-roadmap motion planning and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one query and print a JSON summary.
    Plan(PlanArgs),
    /// Run several planners over every trial seed and write CSV results and plots.
    Bench(BenchArgs),
    /// Run `sd` for several values of w_t.
    SweepWt(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Shortcut smoothing iterations.
    #[arg(long, default_value_t = DEFAULT_SMOOTH_ITERATIONS)]
    smooth_iters: usize,
    /// Direction rule for `sd-bi`.
    #[arg(long, value_enum, default_value_t = BalanceArg::Time)]
    balance: BalanceArg,
    /// Inflation for `wastar`; defaults to 1 + w_t * n_D.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Refinement budget for `sd-anytime` in milliseconds; unlimited if absent.
    #[arg(long)]
    anytime_budget_ms: Option<u64>,
    /// Override the scenario's per-query time limit.
    #[arg(long)]
    time_limit_ms: Option<u64>,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = PlannerKind::Sd)]
    planner: PlannerKind,
    #[arg(long, default_value_t = 1.0)]
    wt: f64,
    /// Graph and planner seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smoothing seed; the planner seed if absent.
    #[arg(long)]
    smooth_seed: Option<u64>,
    /// Write scene.svg and layers.svg here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    planners: Vec<PlannerKind>,
    #[arg(long, default_value_t = 1.0)]
    wt: f64,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.01, 0.1, 1.0, 10.0])]
    values: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

fn planner_options(common: &Common, w_t: f64, scenario_limit_ms: u64) -> PlannerOptions {
    PlannerOptions {
        w_t,
        balance: common.balance.into(),
        epsilon: common.epsilon,
        time_limit: Some(Duration::from_millis(common.time_limit_ms.unwrap_or(scenario_limit_ms))),
        anytime_budget: common.anytime_budget_ms.map(Duration::from_millis),
        ..PlannerOptions::default()
    }
}

fn plan(args: PlanArgs) -> Result<()> {
    let scenario = load_scenario(&args.common.scenario)?;
    let opts = planner_options(&args.common, args.wt, scenario.spec.time_limit_ms);
    let mut graph = scenario.build_graph(args.seed);
    let mut world = scenario.world();
    let result = run_planner(
        args.planner,
        &mut world,
        &mut graph,
        &scenario.start,
        &scenario.goal,
        &opts,
        args.seed,
    )?;
    let smoothed = result.path().map(|p| {
        let params = SmoothParams {
            iterations: args.common.smooth_iters,
            seed: args.smooth_seed.unwrap_or(args.seed),
        };
        shortcut(&mut world, p, &params)
    });
    let status = match &result.outcome {
        Outcome::Path { .. } => "path",
        Outcome::NoPath if args.planner.uses_graph() => "no path at built density",
        Outcome::NoPath => "no path",
        Outcome::TimedOut => "timed out",
    };
    let summary = json!({
        "scenario": scenario.name(),
        "planner": args.planner.name(),
        "w_t": args.wt,
        "seed": args.seed,
        "status": status,
        "cost_raw": result.cost(),
        "cost_smoothed": smoothed.as_deref().map(path_cost),
        "path": result.path().map(|p| p.iter().map(|q| q.as_slice().to_vec()).collect::<Vec<_>>()),
        "smoothed_path": smoothed.as_ref().map(|p| p.iter().map(|q| q.as_slice().to_vec()).collect::<Vec<_>>()),
        "stats": &result.stats,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(dir) = &args.svg {
        let graph_ref = args.planner.uses_graph().then_some(&graph);
        emit_svg_scene(&world, graph_ref, &result, &dir.join("scene.svg"))?;
        if args.planner.uses_graph() {
            emit_svg_layers(&graph, &result, &dir.join("layers.svg"))?;
        }
        log::info!("figures written to {}", dir.display());
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let scenario = load_scenario(&args.common.scenario)?;
    let opts = BenchOptions {
        planners: args.planners,
        planner: planner_options(&args.common, args.wt, scenario.spec.time_limit_ms),
        smooth_iters: args.common.smooth_iters,
        jobs: args.jobs,
    };
    let records = run_benchmark(&scenario, &opts)?;
    write_records(&args.out.join(RESULTS_FILE), &records)?;
    emit_curves(&records, &args.out)?;
    println!(
        "{} rows written to {}",
        records.len(),
        args.out.join(RESULTS_FILE).display()
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let scenario = load_scenario(&args.common.scenario)?;
    let base = BenchOptions {
        planners: vec![PlannerKind::Sd],
        planner: planner_options(&args.common, 0.0, scenario.spec.time_limit_ms),
        smooth_iters: args.common.smooth_iters,
        jobs: args.jobs,
    };
    let (rows, records) = run_sweep(&scenario, &args.values, &base)?;
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_sweep(&args.out, &rows, &records)?;
    for r in &rows {
        println!(
            "w_t {:<8} solved {:>2}/{:<2} median raw cost {:<10} median expansions {}",
            r.w_t,
            r.successes,
            r.trials,
            r.median_cost_raw.map_or("-".into(), |c| format!("{c:.4}")),
            r.median_expansions.map_or("-".into(), |e| e.to_string()),
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Plan(a) => plan(a),
        Command::Bench(a) => bench(a),
        Command::SweepWt(a) => sweep(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
