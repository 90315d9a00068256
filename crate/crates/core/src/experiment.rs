//! Batch sampling, statistics, CSV emission and plot rendering for the
//! average-case studies.
//!
//! Every sample's seed is derived from (master_seed, n, sample_index), so a
//! run is fully determined by its config: the CSV is byte-identical across
//! reruns and across worker counts. Records are keyed by (n, sample_index),
//! never by completion order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversarial::construct_long_tour;
use crate::generators::gen_uniform;
use crate::rng;
use crate::search::{random_tour, run_search, Heuristic, SearchConfig};
use crate::{Error, Result};

/// CSV header, exact column order.
pub const CSV_HEADER: &str =
    "n,sample_seed,initial_length,final_length,iterations,ratio_proxy,wall_time_ms";

/// Strip-construction constants for the growth mode; these values make the
/// expected constructed length linear in n.
pub const GROWTH_ALPHA: f64 = 10.0;
pub const GROWTH_C: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentMode {
    /// Uniform instance, uniform random start, X-opt to a local optimum.
    XOptRatio,
    /// Strip construction of a long noncrossing tour.
    AdversarialGrowth,
    /// Same pipeline as XOptRatio with the 2-opt baseline; identical seeds
    /// per (n, sample_index) make per-instance comparison possible offline.
    TwoOptComparison,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub samples_per_n: usize,
    pub master_seed: u64,
    pub mode: ExperimentMode,
    pub output_path: PathBuf,
    pub workers: usize,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values.iter().any(|&n| n < 3) {
            return Err(Error::InvalidParameter(
                "n_values must be nonempty with every n >= 3".into(),
            ));
        }
        if self.samples_per_n < 1 {
            return Err(Error::InvalidParameter("samples_per_n must be >= 1".into()));
        }
        if self.workers < 1 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// One (n, seed) sample's measurements.
///
/// `wall_time_ms` is pinned to 0: the CSV is a reproducibility artifact and
/// must be byte-identical across reruns, which a measured wall clock cannot
/// be. Aggregate timing is reported alongside the summary instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRecord {
    pub n: usize,
    pub sample_seed: u64,
    pub initial_length: f64,
    pub final_length: f64,
    pub iterations: u64,
    /// final_length / √n, the approximation-ratio proxy.
    pub ratio_proxy: f64,
    pub wall_time_ms: u64,
}

/// Per-n aggregate of ratio_proxy over valid samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub samples: usize,
    /// Growth-mode constructions that failed verification; excluded from
    /// the means. Always 0 for the search modes.
    pub invalid: usize,
    pub mean_ratio_proxy: f64,
    pub sd_ratio_proxy: f64,
    pub se_ratio_proxy: f64,
    pub mean_final_length: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub records: Vec<ExperimentRecord>,
    /// Validity per record, aligned with `records`.
    pub valid: Vec<bool>,
    pub summary: Vec<SummaryRow>,
    /// Total wall time of the batch, milliseconds.
    pub elapsed_ms: u64,
}

/// Child seed for sample `index` at size `n`; documented splitting function
/// shared with any external reproduction.
pub fn sample_seed(master_seed: u64, n: usize, index: usize) -> u64 {
    rng::child_seed(master_seed, n as u64, index as u64)
}

fn run_one(mode: ExperimentMode, n: usize, seed: u64) -> Result<(ExperimentRecord, bool)> {
    match mode {
        ExperimentMode::XOptRatio | ExperimentMode::TwoOptComparison => {
            let inst = gen_uniform(n, seed)?;
            let start = random_tour(&inst, rng::splitmix64(seed));
            let cfg = SearchConfig {
                heuristic: if mode == ExperimentMode::XOptRatio {
                    Heuristic::XOpt
                } else {
                    Heuristic::TwoOpt
                },
                max_iterations: SearchConfig::cubic_budget(n),
                seed,
            };
            let report = run_search(&inst, &start, &cfg)?;
            Ok((
                ExperimentRecord {
                    n,
                    sample_seed: seed,
                    initial_length: report.initial_length,
                    final_length: report.final_length,
                    iterations: report.iterations,
                    ratio_proxy: report.final_length / (n as f64).sqrt(),
                    wall_time_ms: 0,
                },
                true,
            ))
        }
        ExperimentMode::AdversarialGrowth => {
            let inst = gen_uniform(n, seed)?;
            let res = construct_long_tour(&inst, GROWTH_ALPHA, GROWTH_C)?;
            let len = res.tour.cached_length();
            Ok((
                ExperimentRecord {
                    n,
                    sample_seed: seed,
                    initial_length: len,
                    final_length: len,
                    iterations: 0,
                    ratio_proxy: len / (n as f64).sqrt(),
                    wall_time_ms: 0,
                },
                res.valid,
            ))
        }
    }
}

/// Runs the configured batch, writes the CSV to `output_path`, and returns
/// records, validity flags and the per-n summary.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let started = std::time::Instant::now();
    let jobs: Vec<(usize, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| (0..cfg.samples_per_n).map(move |i| (n, i)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let mode = cfg.mode;
    let master = cfg.master_seed;
    let results: Vec<(ExperimentRecord, bool)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, i)| run_one(mode, n, sample_seed(master, n, i)))
            .collect::<Result<Vec<_>>>()
    })?;

    let records: Vec<ExperimentRecord> = results.iter().map(|(r, _)| *r).collect();
    let valid: Vec<bool> = results.iter().map(|&(_, v)| v).collect();

    let mut summary = Vec::with_capacity(cfg.n_values.len());
    let mut offset = 0;
    for &n in &cfg.n_values {
        let slice = &records[offset..offset + cfg.samples_per_n];
        let flags = &valid[offset..offset + cfg.samples_per_n];
        summary.push(summarize_group(n, slice, flags));
        offset += cfg.samples_per_n;
        if log_enabled() {
            eprintln!(
                "[xoptlab] n={n}: {}/{} sizes done",
                summary.len(),
                cfg.n_values.len()
            );
        }
    }

    std::fs::write(&cfg.output_path, records_to_csv(&records))?;

    Ok(ExperimentOutcome {
        records,
        valid,
        summary,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

fn log_enabled() -> bool {
    std::env::var("XOPTLAB_LOG").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn summarize_group(n: usize, records: &[ExperimentRecord], valid: &[bool]) -> SummaryRow {
    let kept: Vec<&ExperimentRecord> = records
        .iter()
        .zip(valid)
        .filter_map(|(r, &v)| v.then_some(r))
        .collect();
    let invalid = records.len() - kept.len();
    let count = kept.len();
    let (mean, sd, mean_len) = if count == 0 {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        let mean = kept.iter().map(|r| r.ratio_proxy).sum::<f64>() / count as f64;
        let sd = if count < 2 {
            0.0
        } else {
            let ss: f64 = kept
                .iter()
                .map(|r| (r.ratio_proxy - mean) * (r.ratio_proxy - mean))
                .sum();
            (ss / (count - 1) as f64).sqrt()
        };
        let mean_len = kept.iter().map(|r| r.final_length).sum::<f64>() / count as f64;
        (mean, sd, mean_len)
    };
    SummaryRow {
        n,
        samples: records.len(),
        invalid,
        mean_ratio_proxy: mean,
        sd_ratio_proxy: sd,
        se_ratio_proxy: if count == 0 {
            f64::NAN
        } else {
            sd / (count as f64).sqrt()
        },
        mean_final_length: mean_len,
    }
}

/// Nine significant digits, scientific notation.
fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Serializes records in the declared schema, LF newlines.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.sample_seed,
            fmt9(r.initial_length),
            fmt9(r.final_length),
            r.iterations,
            fmt9(r.ratio_proxy),
            r.wall_time_ms
        )
        .unwrap();
    }
    out
}

/// Parses a CSV in the declared schema back into records.
pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    if header != CSV_HEADER {
        return Err(Error::Parse(format!(
            "schema mismatch: expected header {CSV_HEADER:?}, got {header:?}"
        )));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse(format!(
                "row {}: expected 7 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let bad = |what: &str, e: &dyn std::fmt::Display| {
            Error::Parse(format!("row {}: bad {what}: {e}", lineno + 2))
        };
        records.push(ExperimentRecord {
            n: fields[0].parse().map_err(|e| bad("n", &e))?,
            sample_seed: fields[1].parse().map_err(|e| bad("sample_seed", &e))?,
            initial_length: fields[2].parse().map_err(|e| bad("initial_length", &e))?,
            final_length: fields[3].parse().map_err(|e| bad("final_length", &e))?,
            iterations: fields[4].parse().map_err(|e| bad("iterations", &e))?,
            ratio_proxy: fields[5].parse().map_err(|e| bad("ratio_proxy", &e))?,
            wall_time_ms: fields[6].parse().map_err(|e| bad("wall_time_ms", &e))?,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptySummary);
    }
    Ok(records)
}

/// Per-n aggregates recomputed from a CSV file, ascending in n. Validity is
/// not recorded in the CSV, so every row counts here.
pub fn summarize_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let records = parse_csv(&std::fs::read_to_string(path)?)?;
    let mut by_n: std::collections::BTreeMap<usize, Vec<ExperimentRecord>> = Default::default();
    for r in records {
        by_n.entry(r.n).or_default().push(r);
    }
    Ok(by_n
        .into_iter()
        .map(|(n, group)| {
            let flags = vec![true; group.len()];
            summarize_group(n, &group, &flags)
        })
        .collect())
}

// ---- plot rendering ----------------------------------------------------

const PLOT_W: f64 = 800.0;
const PLOT_H: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;

/// Data ranges covered by the axes: x over n with 5% margin, y over
/// mean ± se with 10% margin.
fn axis_ranges(rows: &[SummaryRow]) -> ((f64, f64), (f64, f64)) {
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let (mut x0, mut x1) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let xpad = (0.05 * (x1 - x0)).max(1.0);
    x0 -= xpad;
    x1 += xpad;

    let mut y0 = f64::INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for r in rows {
        y0 = y0.min(r.mean_ratio_proxy - r.se_ratio_proxy);
        y1 = y1.max(r.mean_ratio_proxy + r.se_ratio_proxy);
    }
    let ypad = (0.1 * (y1 - y0)).max(0.1 * y1.abs().max(1e-9));
    ((x0, x1), (y0 - ypad, y1 + ypad))
}

/// Writes a line chart of mean ratio_proxy vs n with standard-error bars as
/// a self-contained SVG. Rendering is deterministic: the same summary
/// produces identical bytes.
pub fn render_plot(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let finite: Vec<SummaryRow> = rows
        .iter()
        .filter(|r| r.mean_ratio_proxy.is_finite() && r.se_ratio_proxy.is_finite())
        .cloned()
        .collect();
    if finite.is_empty() {
        return Err(Error::EmptySummary);
    }
    let ((x0, x1), (y0, y1)) = axis_ranges(&finite);
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (PLOT_W - MARGIN_L - MARGIN_R);
    let sy = |y: f64| PLOT_H - MARGIN_B - (y - y0) / (y1 - y0) * (PLOT_H - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" viewBox=\"0 0 {PLOT_W} {PLOT_H}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{PLOT_W}\" height=\"{PLOT_H}\" fill=\"white\"/>"
    );

    // axes
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L,
        PLOT_H - MARGIN_B,
        PLOT_W - MARGIN_R,
        PLOT_H - MARGIN_B
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L,
        MARGIN_T,
        MARGIN_L,
        PLOT_H - MARGIN_B
    );

    // ticks and grid
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>",
            sx(fx),
            MARGIN_T,
            sx(fx),
            PLOT_H - MARGIN_B
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{:.0}</text>",
            sx(fx),
            PLOT_H - MARGIN_B + 18.0,
            fx
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>",
            MARGIN_L,
            sy(fy),
            PLOT_W - MARGIN_R,
            sy(fy)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{:.4}</text>",
            MARGIN_L - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">n</text>",
        (MARGIN_L + PLOT_W - MARGIN_R) / 2.0,
        PLOT_H - 10.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"14\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">mean final length / sqrt(n)</text>",
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0,
        (MARGIN_T + PLOT_H - MARGIN_B) / 2.0
    );

    // error bars
    for r in &finite {
        let x = sx(r.n as f64);
        let (lo, hi) = (
            sy(r.mean_ratio_proxy - r.se_ratio_proxy),
            sy(r.mean_ratio_proxy + r.se_ratio_proxy),
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{lo:.2}\" x2=\"{x:.2}\" y2=\"{hi:.2}\" stroke=\"#3465a4\"/>"
        );
        for y in [lo, hi] {
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#3465a4\"/>",
                x - 4.0,
                x + 4.0
            );
        }
    }

    // mean polyline and markers
    let pts: Vec<String> = finite
        .iter()
        .map(|r| format!("{:.2},{:.2}", sx(r.n as f64), sy(r.mean_ratio_proxy)))
        .collect();
    let _ = writeln!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#3465a4\" stroke-width=\"1.5\"/>",
        pts.join(" ")
    );
    for r in &finite {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#3465a4\"/>",
            sx(r.n as f64),
            sy(r.mean_ratio_proxy)
        );
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}
