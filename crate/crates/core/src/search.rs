//! X-opt (crossing-removal 2-opt) and full 2-opt local search with a
//! first-improvement pivot rule.
//!
//! Both searches scan edges in the tour's cyclic order and act on the first
//! eligible pair; after an exchange the scan resumes at the smaller index of
//! the two removed edges. X-opt accepts exactly the crossing pairs (decided
//! by the exact predicate, no tolerance); 2-opt accepts any pair whose gain
//! clears a small relative tolerance that keeps floating-point noise from
//! looping forever.

use crate::rng;
use crate::tour::{exchange_gain, find_crossing_from, tour_length, two_exchange, Instance, Tour};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    XOpt,
    TwoOpt,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub heuristic: Heuristic,
    /// Exchange budget; exceeding it is reported as an error since the
    /// worst-case bound on crossing-removal iterations is cubic.
    pub max_iterations: u64,
    /// Seed for random start tours; recorded for provenance, not consumed by
    /// the search itself.
    pub seed: u64,
}

impl SearchConfig {
    /// Default budget n³ for an n-point instance.
    pub fn cubic_budget(n: usize) -> u64 {
        let n = n as u64;
        n.saturating_mul(n).saturating_mul(n)
    }
}

/// Outcome of a local-search run.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub final_tour: Tour,
    /// Count of executed exchanges.
    pub iterations: u64,
    pub initial_length: f64,
    pub final_length: f64,
    /// Length after each exchange; strictly decreasing.
    pub length_trace: Option<Vec<f64>>,
}

/// Uniformly random tour via seeded Fisher–Yates; deterministic per seed.
pub fn random_tour(inst: &Instance, seed: u64) -> Tour {
    let mut rng = rng::stream(seed);
    let n = inst.n();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng::gen_index(&mut rng, i + 1);
        order.swap(i, j);
    }
    Tour::new(inst, order).expect("shuffle preserves bijection")
}

/// Runs the heuristic selected by the config.
pub fn run_search(inst: &Instance, start: &Tour, cfg: &SearchConfig) -> Result<SearchReport> {
    match cfg.heuristic {
        Heuristic::XOpt => run_xopt(inst, start, cfg),
        Heuristic::TwoOpt => run_twoopt(inst, start, cfg),
    }
}

/// Crossing-removal local search: repeatedly exchanges the first crossing
/// edge pair until a full scan finds none. The returned tour is noncrossing.
pub fn run_xopt(inst: &Instance, start: &Tour, cfg: &SearchConfig) -> Result<SearchReport> {
    let initial_length = tour_length(inst, start);
    let mut tour = start.clone();
    let mut iterations = 0u64;
    let mut trace = Vec::new();
    let mut scan_from = 0usize;
    while let Some(pair) = find_crossing_from(inst, &tour, scan_from) {
        if iterations >= cfg.max_iterations {
            return Err(Error::BudgetExhausted {
                budget: cfg.max_iterations,
            });
        }
        tour = two_exchange(inst, &tour, pair.i, pair.j)?;
        iterations += 1;
        trace.push(tour.cached_length());
        scan_from = pair.i;
    }
    let final_length = tour.cached_length();
    Ok(SearchReport {
        final_tour: tour,
        iterations,
        initial_length,
        final_length,
        length_trace: Some(trace),
    })
}

/// First-improvement 2-opt: same scan order as X-opt, accepting any pair
/// whose gain exceeds the relative tolerance. Terminates at a 2-opt local
/// optimum.
pub fn run_twoopt(inst: &Instance, start: &Tour, cfg: &SearchConfig) -> Result<SearchReport> {
    let initial_length = tour_length(inst, start);
    let n = start.n();
    let mut tour = start.clone();
    let mut iterations = 0u64;
    let mut trace = Vec::new();
    let mut scan_from = 0usize;
    'descent: loop {
        let tolerance = 1e-12 * (1.0 + tour.cached_length());
        for step in 0..n {
            let e = (scan_from + step) % n;
            for off in 2..=(n.saturating_sub(2)) {
                let f = (e + off) % n;
                let gain = exchange_gain(inst, &tour, e, f)?;
                if gain > tolerance {
                    if iterations >= cfg.max_iterations {
                        return Err(Error::BudgetExhausted {
                            budget: cfg.max_iterations,
                        });
                    }
                    tour = two_exchange(inst, &tour, e, f)?;
                    iterations += 1;
                    trace.push(tour.cached_length());
                    scan_from = e.min(f);
                    continue 'descent;
                }
            }
        }
        break;
    }
    let final_length = tour.cached_length();
    Ok(SearchReport {
        final_tour: tour,
        iterations,
        initial_length,
        final_length,
        length_trace: Some(trace),
    })
}
