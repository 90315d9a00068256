//! A laboratory for studying crossing-removal local search on Euclidean TSP
//! instances in the unit square.
//!
//! The crate provides exact-decision planar predicates ([`geometry`]), tour
//! representation and 2-exchange moves ([`tour`]), the X-opt and 2-opt local
//! searches ([`search`]), adversarial and random instance factories
//! ([`generators`]), the strip construction that produces long noncrossing
//! tours on uniform instances ([`adversarial`]), brute-force ground truth
//! ([`oracle`]) and a seeded, reproducible experiment harness
//! ([`experiment`]).
//!
//! X-opt is 2-opt restricted to exchanges that remove a pair of crossing
//! tour edges; its local optima are exactly the noncrossing tours.

pub mod adversarial;
pub mod experiment;
pub mod generators;
pub mod geometry;
pub mod oracle;
pub mod rng;
pub mod search;
pub mod tour;

pub use geometry::{dist, orientation, segments_cross, Orientation, Point, Rect, Segment};
pub use search::{
    random_tour, run_search, run_twoopt, run_xopt, Heuristic, SearchConfig, SearchReport,
};
pub use tour::{
    count_crossings, exchange_gain, find_crossing_from, tour_length, two_exchange, CrossingPair,
    Instance, Provenance, Tour,
};

/// Errors produced by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coordinate is not finite")]
    NonFiniteCoordinate,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("instance contains duplicate points")]
    DuplicatePoint,
    #[error("need at least {min} points, got {n}")]
    TooFewPoints { n: usize, min: usize },
    #[error("invalid tour: {0}")]
    InvalidTour(&'static str),
    #[error("edge indices {i} and {j} are equal or adjacent")]
    InvalidEdgePair { i: usize, j: usize },
    #[error("iteration budget of {budget} exhausted (geometry predicates may be inconsistent)")]
    BudgetExhausted { budget: u64 },
    #[error("collinear points make an uncrossing exchange non-improving")]
    CollinearTriple,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("instance size {n} exceeds limit {max} for this oracle")]
    SizeLimit { n: usize, max: usize },
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("no noncrossing tour found")]
    NoNoncrossingTour,
    #[error("construction invariant violated: {0}")]
    ConstructionViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty summary: no records to aggregate")]
    EmptySummary,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
