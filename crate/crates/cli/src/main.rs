//! Command-line surface binding the laboratory's modules for reproducible
//! runs. All randomness flows from explicit --seed flags; a missing seed is
//! an error, never the wall clock.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use xoptlab_core::adversarial::construct_long_tour;
use xoptlab_core::experiment::{
    render_plot, run_experiment, summarize_csv, ExperimentConfig, SummaryRow,
};
use xoptlab_core::generators::{gen_counterexample, gen_uniform, gen_worstcase};
use xoptlab_core::oracle::{
    enumerate_tours, longest_noncrossing_tour, optimal_tour_exact, TourFilter,
};
use xoptlab_core::search::{random_tour, run_search, Heuristic, SearchConfig};
use xoptlab_core::tour::{count_crossings, tour_length, Instance, Tour};

#[derive(Parser)]
#[command(
    name = "xoptlab",
    version,
    about = "Euclidean TSP tour-uncrossing laboratory"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance (and companion tours for the adversarial kinds).
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Point count (uniform, worstcase).
        #[arg(long)]
        n: Option<usize>,
        /// Epsilon of the worst-case family.
        #[arg(long)]
        eps: Option<f64>,
        /// Scale L of the counterexample family.
        #[arg(long)]
        bigl: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a local search on an instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        heuristic: HeuristicArg,
        #[arg(long, value_enum, default_value_t = StartArg::Random)]
        start: StartArg,
        /// Required when --start random.
        #[arg(long)]
        seed: Option<u64>,
        /// Exchange budget; defaults to n³.
        #[arg(long)]
        max_iters: Option<u64>,
        #[arg(long)]
        tour_out: Option<PathBuf>,
    },
    /// Build the strip-construction tour on a fresh uniform instance.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        c: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Print length and crossing count of a tour file.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        tour: PathBuf,
    },
    /// Brute-force ground truth on a small instance.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: OracleMode,
    },
    /// Run a batch experiment described by a JSON config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Render the summary of a CSV as an SVG chart.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Uniform,
    Worstcase,
    Counterexample,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    Xopt,
    Twoopt,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum StartArg {
    Random,
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Optimal,
    Enumerate,
    LongestNoncrossing,
}

/// Prints one output line, treating a closed stdout (e.g. piped into
/// `head`) as a normal early exit instead of a panic.
macro_rules! say {
    ($($arg:tt)*) => {{
        let mut out = std::io::stdout().lock();
        if writeln!(out, $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn sibling(base: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", base.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Gen {
            kind,
            n,
            eps,
            bigl,
            seed,
            out,
        } => cmd_gen(kind, n, eps, bigl, seed, &out),
        Cmd::Solve {
            instance,
            heuristic,
            start,
            seed,
            max_iters,
            tour_out,
        } => cmd_solve(
            &instance,
            heuristic,
            start,
            seed,
            max_iters,
            tour_out.as_deref(),
        ),
        Cmd::Construct { n, alpha, c, seed } => cmd_construct(n, alpha, c, seed),
        Cmd::Verify { instance, tour } => cmd_verify(&instance, &tour),
        Cmd::Oracle { instance, mode } => cmd_oracle(&instance, mode),
        Cmd::Experiment { config } => cmd_experiment(&config),
        Cmd::Plot { csv, out } => cmd_plot(&csv, &out),
    }
}

fn cmd_gen(
    kind: GenKind,
    n: Option<usize>,
    eps: Option<f64>,
    bigl: Option<f64>,
    seed: Option<u64>,
    out: &Path,
) -> anyhow::Result<()> {
    match kind {
        GenKind::Uniform => {
            let n = n.context("--n is required for --kind uniform")?;
            let seed = seed.context("--seed is required for --kind uniform")?;
            let inst = gen_uniform(n, seed)?;
            inst.write_file(out)?;
            say!("wrote {}", out.display());
        }
        GenKind::Worstcase => {
            let n = n.context("--n is required for --kind worstcase")?;
            let eps = eps.context("--eps is required for --kind worstcase")?;
            let bundle = gen_worstcase(n, eps)?;
            bundle.instance.write_file(out)?;
            say!("wrote {}", out.display());
            let bad = sibling(out, ".bad.tour");
            bundle.bad_tour.write_file(&bad)?;
            say!("wrote {}", bad.display());
            let good = sibling(out, ".good.tour");
            bundle.good_tour.write_file(&good)?;
            say!("wrote {}", good.display());
        }
        GenKind::Counterexample => {
            let bigl = bigl.context("--bigl is required for --kind counterexample")?;
            let bundle = gen_counterexample(bigl)?;
            bundle.instance.write_file(out)?;
            say!("wrote {}", out.display());
            let no_x = sibling(out, ".without_x");
            bundle.without_x.write_file(&no_x)?;
            say!("wrote {}", no_x.display());
            let tour_t = sibling(out, ".tour_t.tour");
            bundle.tour_t.write_file(&tour_t)?;
            say!("wrote {}", tour_t.display());
        }
    }
    Ok(())
}

fn cmd_solve(
    instance: &Path,
    heuristic: HeuristicArg,
    start: StartArg,
    seed: Option<u64>,
    max_iters: Option<u64>,
    tour_out: Option<&Path>,
) -> anyhow::Result<()> {
    let inst = Instance::read_file(instance)?;
    let start_tour = match start {
        StartArg::Random => {
            let seed = seed.context("--seed is required for --start random")?;
            random_tour(&inst, seed)
        }
        StartArg::Identity => Tour::identity(&inst),
    };
    let cfg = SearchConfig {
        heuristic: match heuristic {
            HeuristicArg::Xopt => Heuristic::XOpt,
            HeuristicArg::Twoopt => Heuristic::TwoOpt,
        },
        max_iterations: max_iters.unwrap_or_else(|| SearchConfig::cubic_budget(inst.n())),
        seed: seed.unwrap_or(0),
    };
    if cfg.max_iterations == 0 {
        bail!("--max-iters must be at least 1");
    }
    let report = run_search(&inst, &start_tour, &cfg)?;
    say!("initial_length: {}", report.initial_length);
    say!("final_length: {}", report.final_length);
    say!("iterations: {}", report.iterations);
    say!(
        "final_crossings: {}",
        count_crossings(&inst, &report.final_tour)
    );
    if let Some(path) = tour_out {
        report.final_tour.write_file(path)?;
        say!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_construct(n: usize, alpha: f64, c: f64, seed: u64) -> anyhow::Result<()> {
    let inst = gen_uniform(n, seed)?;
    let res = construct_long_tour(&inst, alpha, c)?;
    say!("valid: {}", res.valid);
    say!("length: {}", res.tour.cached_length());
    say!("strips: {}", res.strip_path_lengths.len());
    say!(
        "failure_reason: {}",
        match res.failure_reason {
            None => "none".to_string(),
            Some(r) => format!("{r:?}"),
        }
    );
    Ok(())
}

fn cmd_verify(instance: &Path, tour: &Path) -> anyhow::Result<()> {
    let inst = Instance::read_file(instance)?;
    let t = Tour::read_file(&inst, tour)?;
    say!("n: {}", inst.n());
    say!("length: {}", tour_length(&inst, &t));
    say!("crossings: {}", count_crossings(&inst, &t));
    Ok(())
}

fn cmd_oracle(instance: &Path, mode: OracleMode) -> anyhow::Result<()> {
    let inst = Instance::read_file(instance)?;
    match mode {
        OracleMode::Optimal => {
            let (tour, len) = optimal_tour_exact(&inst)?;
            say!("optimal_length: {len}");
            say!("tour: {}", tour.to_text().trim_end());
        }
        OracleMode::Enumerate => {
            let mut total = 0usize;
            let mut noncrossing = 0usize;
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for (tour, len) in enumerate_tours(&inst, TourFilter::All)? {
                total += 1;
                if count_crossings(&inst, &tour) == 0 {
                    noncrossing += 1;
                }
                min = min.min(len);
                max = max.max(len);
            }
            say!("tours: {total}");
            say!("noncrossing: {noncrossing}");
            say!("min_length: {min}");
            say!("max_length: {max}");
        }
        OracleMode::LongestNoncrossing => {
            let (tour, len) = longest_noncrossing_tour(&inst)?;
            say!("length: {len}");
            say!("tour: {}", tour.to_text().trim_end());
        }
    }
    Ok(())
}

fn print_summary(rows: &[SummaryRow]) {
    say!("n,samples,invalid,mean_ratio_proxy,sd,se,mean_final_length");
    for row in rows {
        say!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6}",
            row.n,
            row.samples,
            row.invalid,
            row.mean_ratio_proxy,
            row.sd_ratio_proxy,
            row.se_ratio_proxy,
            row.mean_final_length
        );
    }
}

fn cmd_experiment(config: &Path) -> anyhow::Result<()> {
    let text =
        std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let cfg: ExperimentConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
    let outcome = run_experiment(&cfg)?;
    print_summary(&outcome.summary);
    say!("records: {}", outcome.records.len());
    say!("elapsed_ms: {}", outcome.elapsed_ms);
    say!("wrote {}", cfg.output_path.display());
    Ok(())
}

fn cmd_plot(csv: &Path, out: &Path) -> anyhow::Result<()> {
    let rows = summarize_csv(csv)?;
    render_plot(&rows, out)?;
    say!("wrote {}", out.display());
    Ok(())
}
