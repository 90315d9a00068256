//! Tour representation, length accounting, crossing detection and the
//! 2-exchange move.
//!
//! A tour is a cyclic permutation of instance indices; edge `i` runs from
//! `order[i]` to `order[(i+1) % n]`, and "next edge" always means `i+1 mod n`
//! in that fixed order. Tours are immutable after construction; every
//! operation returns a new tour.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{dist, seg_cross, Point};
use crate::{Error, Result};

/// Where an instance came from: generator kind, parameters, seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Uniform { n: usize, seed: u64 },
    WorstCase { n: usize, epsilon: f64 },
    Counterexample { big_l: f64, without_x: bool },
    External,
}

/// An ordered set of distinct points plus provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    points: Vec<Point>,
    provenance: Provenance,
}

impl Instance {
    /// At least 3 pairwise-distinct, finite points.
    pub fn new(points: Vec<Point>, provenance: Provenance) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints {
                n: points.len(),
                min: 3,
            });
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        // Duplicate detection via sort; the n² pairwise scan would dominate
        // construction for the larger experiment instances.
        let mut sorted: Vec<usize> = (0..points.len()).collect();
        sorted.sort_by(|&i, &j| {
            points[i]
                .x
                .total_cmp(&points[j].x)
                .then(points[i].y.total_cmp(&points[j].y))
        });
        for w in sorted.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::DuplicatePoint);
            }
        }
        Ok(Self { points, provenance })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Text form: optional `# meta {json}` header, then n, then one `x y`
    /// line per point in full round-trip precision.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.provenance).expect("provenance serializes");
        writeln!(out, "# meta {meta}").unwrap();
        writeln!(out, "{}", self.n()).unwrap();
        for p in &self.points {
            writeln!(out, "{} {}", p.x, p.y).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut provenance = Provenance::External;
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(json) = rest.trim().strip_prefix("meta ") {
                    provenance = serde_json::from_str(json)
                        .map_err(|e| Error::Parse(format!("bad meta header: {e}")))?;
                }
                lines.next();
            } else {
                break;
            }
        }
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing point count".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad point count: {e}")))?;
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing point line {i}")))?;
            let mut it = line.split_whitespace();
            let x: f64 = it
                .next()
                .ok_or_else(|| Error::Parse(format!("point {i}: missing x")))?
                .parse()
                .map_err(|e| Error::Parse(format!("point {i}: {e}")))?;
            let y: f64 = it
                .next()
                .ok_or_else(|| Error::Parse(format!("point {i}: missing y")))?
                .parse()
                .map_err(|e| Error::Parse(format!("point {i}: {e}")))?;
            if it.next().is_some() {
                return Err(Error::Parse(format!("point {i}: trailing fields")));
            }
            points.push(Point::new(x, y)?);
        }
        Instance::new(points, provenance)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// A cyclic permutation of instance indices with cached length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    order: Vec<usize>,
    cached_length: f64,
}

impl Tour {
    /// Validates that `order` is a bijection on 0..n and caches the length.
    pub fn new(inst: &Instance, order: Vec<usize>) -> Result<Self> {
        let n = inst.n();
        if order.len() != n {
            return Err(Error::InvalidTour(
                "order length differs from instance size",
            ));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::InvalidTour("index out of range"));
            }
            if seen[v] {
                return Err(Error::InvalidTour("repeated index"));
            }
            seen[v] = true;
        }
        let cached_length = cycle_length(inst, &order);
        Ok(Self {
            order,
            cached_length,
        })
    }

    /// The identity-order tour 0,1,…,n−1.
    pub fn identity(inst: &Instance) -> Self {
        Tour::new(inst, (0..inst.n()).collect()).expect("identity order is a bijection")
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn cached_length(&self) -> f64 {
        self.cached_length
    }

    /// Endpoints of cyclic edge `e`.
    #[inline]
    pub fn edge(&self, e: usize) -> (usize, usize) {
        let n = self.order.len();
        (self.order[e], self.order[(e + 1) % n])
    }

    /// Canonical representative of the rotation/reflection class: vertex 0
    /// first, then the direction whose second vertex is smaller.
    pub fn canonical_order(&self) -> Vec<usize> {
        let n = self.order.len();
        let pos = self
            .order
            .iter()
            .position(|&v| v == 0)
            .expect("bijection contains 0");
        let mut rotated: Vec<usize> = (0..n).map(|k| self.order[(pos + k) % n]).collect();
        if n > 2 && rotated[1] > rotated[n - 1] {
            rotated[1..].reverse();
        }
        rotated
    }

    /// Equality up to rotation and reflection.
    pub fn same_tour(&self, other: &Tour) -> bool {
        self.n() == other.n() && self.canonical_order() == other.canonical_order()
    }

    /// Single line of n space-separated 0-based indices.
    pub fn to_text(&self) -> String {
        let mut s = self
            .order
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        s.push('\n');
        s
    }

    pub fn from_text(inst: &Instance, text: &str) -> Result<Self> {
        let order = text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad tour index {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Tour::new(inst, order)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn read_file(inst: &Instance, path: &Path) -> Result<Self> {
        Self::from_text(inst, &std::fs::read_to_string(path)?)
    }
}

fn cycle_length(inst: &Instance, order: &[usize]) -> f64 {
    let n = order.len();
    (0..n)
        .map(|i| dist(inst.point(order[i]), inst.point(order[(i + 1) % n])))
        .sum()
}

/// Recomputed sum of the n cyclic edge lengths.
pub fn tour_length(inst: &Instance, t: &Tour) -> f64 {
    cycle_length(inst, t.order())
}

/// A pair of non-adjacent edge indices whose segments intersect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingPair {
    pub i: usize,
    pub j: usize,
}

#[inline]
fn adjacent(n: usize, i: usize, j: usize) -> bool {
    i == j || (i + 1) % n == j || (j + 1) % n == i
}

/// First crossing pair in the cyclic scan order starting at `start_edge`.
///
/// Edges e = start, start+1, … are scanned in tour order; for each e the
/// non-adjacent candidates e+2, e+3, … are tested in the same order. Returns
/// the first crossing found, or `None` once a full scan comes up empty (the
/// tour is then noncrossing).
pub fn find_crossing_from(inst: &Instance, t: &Tour, start_edge: usize) -> Option<CrossingPair> {
    let n = t.n();
    if n < 4 {
        return None; // every edge pair shares a vertex
    }
    let start = start_edge % n;
    for step in 0..n {
        let e = (start + step) % n;
        let (a, b) = t.edge(e);
        let (pa, pb) = (inst.point(a), inst.point(b));
        for off in 2..=(n - 2) {
            let f = (e + off) % n;
            let (c, d) = t.edge(f);
            if seg_cross(pa, pb, inst.point(c), inst.point(d)) {
                return Some(CrossingPair {
                    i: e.min(f),
                    j: e.max(f),
                });
            }
        }
    }
    None
}

/// Number of non-adjacent edge pairs whose segments cross; O(n²).
pub fn count_crossings(inst: &Instance, t: &Tour) -> usize {
    let n = t.n();
    let mut count = 0;
    for i in 0..n {
        let (a, b) = t.edge(i);
        let (pa, pb) = (inst.point(a), inst.point(b));
        for j in (i + 1)..n {
            if adjacent(n, i, j) {
                continue;
            }
            let (c, d) = t.edge(j);
            if seg_cross(pa, pb, inst.point(c), inst.point(d)) {
                count += 1;
            }
        }
    }
    count
}

/// Old-minus-new length of the 2-exchange on edges i and j:
/// d(a,b) + d(c,d) − d(a,c) − d(b,d).
///
/// Strictly positive whenever the two edges properly cross.
pub fn exchange_gain(inst: &Instance, t: &Tour, i: usize, j: usize) -> Result<f64> {
    let n = t.n();
    let (lo, hi) = (i.min(j), i.max(j));
    if lo >= n || hi >= n || adjacent(n, lo, hi) {
        return Err(Error::InvalidEdgePair { i, j });
    }
    let (a, b) = t.edge(lo);
    let (c, d) = t.edge(hi);
    let (pa, pb, pc, pd) = (inst.point(a), inst.point(b), inst.point(c), inst.point(d));
    Ok(dist(pa, pb) + dist(pc, pd) - dist(pa, pc) - dist(pb, pd))
}

/// The 2-exchange move: removes edges (a,b) and (c,d), adds (a,c) and (b,d),
/// and reverses the intervening path (whichever side is shorter).
///
/// The cached length is updated by the gain formula rather than recomputed.
pub fn two_exchange(inst: &Instance, t: &Tour, i: usize, j: usize) -> Result<Tour> {
    let gain = exchange_gain(inst, t, i, j)?;
    let n = t.n();
    let (lo, hi) = (i.min(j), i.max(j));
    let mut order = t.order().to_vec();
    let inner = hi - lo;
    if inner <= n - inner {
        order[lo + 1..=hi].reverse();
    } else {
        let (mut p, mut q) = (hi + 1, lo + n);
        while p < q {
            order.swap(p % n, q % n);
            p += 1;
            q -= 1;
        }
    }
    Ok(Tour {
        order,
        cached_length: t.cached_length - gain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y).unwrap()
    }

    /// Unit-square corners indexed 0..4 counterclockwise from the origin.
    fn square() -> Instance {
        Instance::new(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)],
            Provenance::External,
        )
        .unwrap()
    }

    fn diagonal_tour(inst: &Instance) -> Tour {
        Tour::new(inst, vec![0, 2, 1, 3]).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            Instance::new(vec![p(0.0, 0.0), p(1.0, 0.0)], Provenance::External),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            Instance::new(
                vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0)],
                Provenance::External
            ),
            Err(Error::DuplicatePoint)
        ));
    }

    #[test]
    fn length_examples() {
        let inst = square();
        let perimeter = Tour::identity(&inst);
        assert!((tour_length(&inst, &perimeter) - 4.0).abs() < 1e-12);
        let diag = diagonal_tour(&inst);
        assert!((tour_length(&inst, &diag) - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn three_point_tours_coincide() {
        let inst = Instance::new(
            vec![p(0.0, 0.0), p(2.0, 0.3), p(0.7, 1.9)],
            Provenance::External,
        )
        .unwrap();
        let t1 = Tour::new(&inst, vec![0, 1, 2]).unwrap();
        let t2 = Tour::new(&inst, vec![0, 2, 1]).unwrap();
        assert_eq!(tour_length(&inst, &t1), tour_length(&inst, &t2));
        assert!(t1.same_tour(&t2));
    }

    #[test]
    fn tour_validation() {
        let inst = square();
        assert!(Tour::new(&inst, vec![0, 1, 2]).is_err());
        assert!(Tour::new(&inst, vec![0, 1, 2, 2]).is_err());
        assert!(Tour::new(&inst, vec![0, 1, 2, 4]).is_err());
    }

    #[test]
    fn find_crossing_examples() {
        let inst = square();
        let diag = diagonal_tour(&inst);
        // only the two diagonal edges cross
        let pair = find_crossing_from(&inst, &diag, 0).unwrap();
        assert_eq!(pair, CrossingPair { i: 0, j: 2 });
        assert_eq!(count_crossings(&inst, &diag), 1);

        let perimeter = Tour::identity(&inst);
        for start in 0..4 {
            assert!(find_crossing_from(&inst, &perimeter, start).is_none());
        }
        assert_eq!(count_crossings(&inst, &perimeter), 0);
    }

    #[test]
    fn crossing_scan_starts_where_asked() {
        // two bowties plus connector diagonals that slice through the left
        // one: 7 crossing pairs in total, and the first pair found depends
        // on the start edge
        let inst = Instance::new(
            vec![
                p(0.0, 0.0),
                p(1.0, 1.0),
                p(1.0, 0.0),
                p(0.0, 1.0),
                p(3.0, 0.0),
                p(4.0, 1.0),
                p(4.0, 0.0),
                p(3.0, 1.0),
            ],
            Provenance::External,
        )
        .unwrap();
        let t = Tour::identity(&inst);
        assert_eq!(count_crossings(&inst, &t), 7);
        assert_eq!(
            find_crossing_from(&inst, &t, 0),
            Some(CrossingPair { i: 0, j: 2 })
        );
        assert_eq!(
            find_crossing_from(&inst, &t, 3),
            Some(CrossingPair { i: 3, j: 7 })
        );
        assert_eq!(
            find_crossing_from(&inst, &t, 4),
            Some(CrossingPair { i: 4, j: 6 })
        );
    }

    #[test]
    fn crossing_scan_none_iff_count_zero() {
        let inst = square();
        for order in [vec![0, 1, 2, 3], vec![0, 2, 1, 3], vec![0, 1, 3, 2]] {
            let t = Tour::new(&inst, order).unwrap();
            assert_eq!(
                find_crossing_from(&inst, &t, 0).is_none(),
                count_crossings(&inst, &t) == 0
            );
        }
    }

    #[test]
    fn exchange_examples() {
        let inst = square();
        let diag = diagonal_tour(&inst);
        let gain = exchange_gain(&inst, &diag, 0, 2).unwrap();
        assert!((gain - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-12);

        let fixed = two_exchange(&inst, &diag, 0, 2).unwrap();
        assert!((fixed.cached_length() - 4.0).abs() < 1e-12);
        assert_eq!(count_crossings(&inst, &fixed), 0);
        assert!((fixed.cached_length() - tour_length(&inst, &fixed)).abs() < 1e-9);

        // perimeter exchanges are the reverse move
        let perimeter = Tour::identity(&inst);
        let g = exchange_gain(&inst, &perimeter, 0, 2).unwrap();
        assert!((g - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(g < 0.0);
    }

    #[test]
    fn exchange_is_involution() {
        let inst = square();
        let diag = diagonal_tour(&inst);
        let once = two_exchange(&inst, &diag, 0, 2).unwrap();
        let twice = two_exchange(&inst, &once, 0, 2).unwrap();
        assert!(twice.same_tour(&diag));
    }

    #[test]
    fn exchange_rejects_adjacent() {
        let inst = square();
        let t = Tour::identity(&inst);
        assert!(two_exchange(&inst, &t, 0, 1).is_err());
        assert!(two_exchange(&inst, &t, 0, 3).is_err());
        assert!(two_exchange(&inst, &t, 2, 2).is_err());
    }

    #[test]
    fn gain_matches_length_difference() {
        let inst = square();
        let diag = diagonal_tour(&inst);
        let gain = exchange_gain(&inst, &diag, 0, 2).unwrap();
        let after = two_exchange(&inst, &diag, 0, 2).unwrap();
        let direct = tour_length(&inst, &diag) - tour_length(&inst, &after);
        assert!((gain - direct).abs() < 1e-9);
    }

    #[test]
    fn canonicalization() {
        let inst = Instance::new(
            vec![
                p(0.0, 0.0),
                p(1.0, 0.0),
                p(2.0, 0.5),
                p(1.5, 1.5),
                p(0.2, 1.0),
            ],
            Provenance::External,
        )
        .unwrap();
        let t = Tour::new(&inst, vec![3, 2, 0, 4, 1]).unwrap();
        let canon = t.canonical_order();
        assert_eq!(canon[0], 0);
        assert!(canon[1] <= canon[4]);
        // rotation and reflection give the same canonical form
        let rot = Tour::new(&inst, vec![0, 4, 1, 3, 2]).unwrap();
        assert!(t.same_tour(&rot));
    }

    #[test]
    fn instance_text_round_trip() {
        let inst = Instance::new(
            vec![
                p(0.123456789012345, 0.9),
                p(1.0 / 3.0, 2f64.sqrt()),
                p(-0.25, 1e-17),
            ],
            Provenance::Uniform { n: 3, seed: 42 },
        )
        .unwrap();
        let round = Instance::from_text(&inst.to_text()).unwrap();
        assert_eq!(inst, round);
    }

    #[test]
    fn tour_text_round_trip() {
        let inst = square();
        let t = diagonal_tour(&inst);
        assert_eq!(t.to_text(), "0 2 1 3\n");
        let round = Tour::from_text(&inst, &t.to_text()).unwrap();
        assert_eq!(round.order(), t.order());
    }
}
