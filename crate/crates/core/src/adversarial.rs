//! The constructive machinery behind the long-noncrossing-tour lower bound
//! on uniform instances: uncrossing Hamiltonian paths with fixed endpoints,
//! a partition of the unit square into border regions and thin vertical
//! strips, and the assembly of per-region paths into one noncrossing tour of
//! expected length Ω(n).
//!
//! The construction mirrors the crossing-removal search: a path 2-exchange
//! (reverse the subpath between two crossing edges) strictly decreases
//! length and preserves both endpoints, so repeated application terminates
//! in a noncrossing path.

use crate::geometry::{dist, seg_cross, Point, Rect};
use crate::rng;
use crate::tour::{Instance, Tour};
use crate::{Error, Result};

/// The six border regions and the vertical strips of the top-middle region.
#[derive(Debug, Clone)]
pub struct RegionPartition {
    pub c: f64,
    pub alpha: f64,
    /// Number of strips, ⌊n/α⌋.
    pub k: usize,
    /// C1..C6 in order: bottom-left, bottom-right, bottom-middle, left,
    /// right, top-middle (the strip carrier).
    pub regions: [Rect; 6],
    /// Strips of C6, left to right. Width (1−2c)/k so the strips tile C6
    /// exactly (equal to α(1−2c)/n whenever α divides n).
    pub strips: Vec<Rect>,
}

/// Which part of the partition a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assignment {
    /// Index 0..=4 for C1..C5.
    Region(usize),
    /// Strip index 0..k−1.
    Strip(usize),
}

/// Builds the partition for an n-point instance.
pub fn build_region_partition(n: usize, alpha: f64, c: f64) -> Result<RegionPartition> {
    if c.is_nan() || c <= 0.0 || c >= 0.5 {
        return Err(Error::InvalidParameter(format!(
            "c must lie in (0, 1/2), got {c}"
        )));
    }
    if alpha.is_nan() || alpha < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be >= 1, got {alpha}"
        )));
    }
    if (n as f64) < alpha {
        return Err(Error::InvalidParameter(format!(
            "need n >= alpha, got n = {n}, alpha = {alpha}"
        )));
    }
    let k = (n as f64 / alpha).floor() as usize;
    let regions = [
        Rect::new(0.0, 0.0, c, c)?,       // C1
        Rect::new(1.0 - c, 0.0, 1.0, c)?, // C2
        Rect::new(c, 0.0, 1.0 - c, c)?,   // C3
        Rect::new(0.0, c, c, 1.0)?,       // C4
        Rect::new(1.0 - c, c, 1.0, 1.0)?, // C5
        Rect::new(c, c, 1.0 - c, 1.0)?,   // C6
    ];
    let width = (1.0 - 2.0 * c) / k as f64;
    let strips = (0..k)
        .map(|i| {
            let x0 = c + i as f64 * width;
            let x1 = if i + 1 == k {
                1.0 - c
            } else {
                c + (i + 1) as f64 * width
            };
            Rect::new(x0, c, x1, 1.0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionPartition {
        c,
        alpha,
        k,
        regions,
        strips,
    })
}

/// Assigns a point of \[0,1\]² to its region or strip. Points on shared
/// borders resolve toward the bottom row first, then the side columns;
/// strip intervals are half-open on the right.
pub fn assign(partition: &RegionPartition, p: Point) -> Assignment {
    let c = partition.c;
    if p.y <= c {
        if p.x <= c {
            Assignment::Region(0) // C1
        } else if p.x >= 1.0 - c {
            Assignment::Region(1) // C2
        } else {
            Assignment::Region(2) // C3
        }
    } else if p.x <= c {
        Assignment::Region(3) // C4
    } else if p.x >= 1.0 - c {
        Assignment::Region(4) // C5
    } else {
        let width = (1.0 - 2.0 * c) / partition.k as f64;
        let idx = ((p.x - c) / width).floor() as usize;
        Assignment::Strip(idx.min(partition.k - 1))
    }
}

/// An open walk over distinct instance indices; the first and last vertices
/// are its fixed endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    vertices: Vec<usize>,
}

impl PathState {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTour("repeated vertex in path"));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], self.vertices[self.vertices.len() - 1])
    }

    pub fn length(&self, inst: &Instance) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| dist(inst.point(w[0]), inst.point(w[1])))
            .sum()
    }
}

/// First crossing pair of path edges (i < j, j ≥ i+2) in cyclic scan order
/// from `start`.
fn find_path_crossing_from(
    inst: &Instance,
    verts: &[usize],
    start: usize,
) -> Option<(usize, usize)> {
    let edges = verts.len().saturating_sub(1);
    if edges < 3 {
        return None;
    }
    let start = start % edges;
    for step in 0..edges {
        let e = (start + step) % edges;
        let (pa, pb) = (inst.point(verts[e]), inst.point(verts[e + 1]));
        for f in (e + 2)..edges {
            if seg_cross(pa, pb, inst.point(verts[f]), inst.point(verts[f + 1])) {
                return Some((e, f));
            }
        }
    }
    None
}

/// Removes crossings from a path by repeated subpath reversal until none
/// remain. Endpoints and vertex set are preserved; every exchange strictly
/// decreases the path length.
///
/// A crossing whose exchange does not improve the length can only arise from
/// collinear points; that degenerate case is reported as an error, as is an
/// exhausted exchange budget (which would signal inconsistent predicates).
pub fn uncross_path(inst: &Instance, path: PathState, budget: u64) -> Result<PathState> {
    let mut verts = path.vertices;
    if verts.iter().any(|&v| v >= inst.n()) {
        return Err(Error::InvalidTour("path index out of range"));
    }
    let mut exchanges = 0u64;
    let mut scan_from = 0usize;
    while let Some((i, j)) = find_path_crossing_from(inst, &verts, scan_from) {
        if exchanges >= budget {
            return Err(Error::BudgetExhausted { budget });
        }
        let (a, b) = (inst.point(verts[i]), inst.point(verts[i + 1]));
        let (c, d) = (inst.point(verts[j]), inst.point(verts[j + 1]));
        let gain = dist(a, b) + dist(c, d) - dist(a, c) - dist(b, d);
        if gain <= 0.0 {
            return Err(Error::CollinearTriple);
        }
        verts[i + 1..=j].reverse();
        exchanges += 1;
        scan_from = i;
    }
    Ok(PathState { vertices: verts })
}

/// Why a construction is not certified, when it is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// Some region C1..C5 held fewer than 2 points.
    UnderPopulatedRegion,
    /// Designated path endpoints of some region coincided.
    NotNice,
    /// The assembled tour failed the final crossing check.
    CrossingDetected,
}

/// Outcome of [`construct_long_tour`].
///
/// `failure_reason` records the first construction anomaly even when the
/// final tour happens to verify clean; `valid` is decided solely by the
/// final check (noncrossing and complete).
#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub tour: Tour,
    pub valid: bool,
    /// Per-strip path length, one entry per strip (0 for strips with fewer
    /// than two points).
    pub strip_path_lengths: Vec<f64>,
    pub failure_reason: Option<FailureReason>,
}

/// Picks (start, end) extremes for a region path; when the two criteria
/// select the same point, the end is re-picked among the remaining points
/// and the coincidence is reported.
fn designated_endpoints<F, G>(points: &Instance, idxs: &[usize], f: F, g: G) -> (usize, usize, bool)
where
    F: Fn(Point, Point) -> bool, // "strictly better" for the start role
    G: Fn(Point, Point) -> bool, // "strictly better" for the end role
{
    let best_by = |crit: &dyn Fn(Point, Point) -> bool, exclude: Option<usize>| -> usize {
        let mut best = usize::MAX;
        for &i in idxs {
            if Some(i) == exclude {
                continue;
            }
            if best == usize::MAX || crit(points.point(i), points.point(best)) {
                best = i;
            }
        }
        best
    };
    let start = best_by(&f, None);
    let end = best_by(&g, None);
    if start == end && idxs.len() >= 2 {
        (start, best_by(&g, Some(start)), true)
    } else {
        (start, end, false)
    }
}

/// Builds an initial path from `start` to `end` through `idxs`, interior
/// sorted by the given key, then uncrosses it. Falls back to the initial
/// path if uncrossing fails (the final verification will catch it).
fn build_path<K: Fn(Point) -> f64>(
    inst: &Instance,
    idxs: &[usize],
    start: usize,
    end: usize,
    key: K,
    budget: u64,
) -> (Vec<usize>, bool) {
    let mut interior: Vec<usize> = idxs
        .iter()
        .copied()
        .filter(|&i| i != start && i != end)
        .collect();
    interior.sort_by(|&i, &j| {
        key(inst.point(i))
            .total_cmp(&key(inst.point(j)))
            .then(i.cmp(&j))
    });
    let mut verts = Vec::with_capacity(idxs.len());
    verts.push(start);
    verts.extend(interior);
    verts.push(end);
    let initial = PathState { vertices: verts };
    match uncross_path(inst, initial.clone(), budget) {
        Ok(p) => (p.vertices, true),
        Err(_) => (initial.vertices, false),
    }
}

/// Assembles a noncrossing tour through all points of a unit-square
/// instance: per-strip uncrossed paths joined rightmost-to-leftmost, border
/// region paths joined across their shared borders, closed into one cycle
/// C1–C4–S₁…S_k–C5–C2–C3–C1, then verified.
///
/// Sample-dependent failures (too few points in a region, coinciding
/// endpoints, a failed final check) are encoded in the result, never thrown;
/// errors are reserved for parameter violations and points outside \[0,1\]².
pub fn construct_long_tour(inst: &Instance, alpha: f64, c: f64) -> Result<ConstructionResult> {
    let n = inst.n();
    let partition = build_region_partition(n, alpha, c)?;
    let unit = Rect::new(0.0, 0.0, 1.0, 1.0).expect("unit square");
    if inst.points().iter().any(|&p| !unit.contains(p)) {
        return Err(Error::InvalidParameter(
            "instance has points outside the unit square".into(),
        ));
    }

    let mut region_pts: [Vec<usize>; 5] = Default::default();
    let mut strip_pts: Vec<Vec<usize>> = vec![Vec::new(); partition.k];
    for (i, &p) in inst.points().iter().enumerate() {
        match assign(&partition, p) {
            Assignment::Region(r) => region_pts[r].push(i),
            Assignment::Strip(s) => strip_pts[s].push(i),
        }
    }

    let under_populated = region_pts.iter().any(|v| v.len() < 2);
    let mut not_nice = false;
    let mut uncross_ok = true;
    let budget = {
        let n = n as u64;
        n.saturating_mul(n).saturating_mul(n)
    };

    // Strip paths: leftmost to rightmost, interior pre-sorted by y.
    let mut strip_paths: Vec<Vec<usize>> = Vec::with_capacity(partition.k);
    let mut strip_path_lengths = Vec::with_capacity(partition.k);
    for idxs in &strip_pts {
        let path = match idxs.len() {
            0 => Vec::new(),
            1 => vec![idxs[0]],
            _ => {
                let (l, r, coincided) =
                    designated_endpoints(inst, idxs, |p, q| p.x < q.x, |p, q| p.x > q.x);
                not_nice |= coincided;
                let (verts, ok) = build_path(inst, idxs, l, r, |p| p.y, budget);
                uncross_ok &= ok;
                verts
            }
        };
        let len: f64 = path
            .windows(2)
            .map(|w| dist(inst.point(w[0]), inst.point(w[1])))
            .sum();
        strip_path_lengths.push(len);
        strip_paths.push(path);
    }

    // Region paths oriented by the cycle direction; the interior is
    // pre-sorted by projection onto the endpoint axis, which leaves few
    // crossings for the uncrossing pass.
    let right = |p: Point, q: Point| p.x > q.x;
    let left = |p: Point, q: Point| p.x < q.x;
    let top = |p: Point, q: Point| p.y > q.y;
    let bottom = |p: Point, q: Point| p.y < q.y;
    let mut oriented_region_path = |r: usize,
                                    f: &dyn Fn(Point, Point) -> bool,
                                    g: &dyn Fn(Point, Point) -> bool|
     -> Vec<usize> {
        let idxs = &region_pts[r];
        match idxs.len() {
            0 => Vec::new(),
            1 => vec![idxs[0]],
            _ => {
                let (s, t, coincided) = designated_endpoints(inst, idxs, f, g);
                not_nice |= coincided;
                let (ps, pt) = (inst.point(s), inst.point(t));
                let axis = (pt.x - ps.x, pt.y - ps.y);
                let (verts, ok) = build_path(
                    inst,
                    idxs,
                    s,
                    t,
                    |p| (p.x - ps.x) * axis.0 + (p.y - ps.y) * axis.1,
                    budget,
                );
                uncross_ok &= ok;
                verts
            }
        }
    };

    // C1: rightmost (from C3) -> topmost (to C4)
    let c1 = oriented_region_path(0, &right, &top);
    // C4: bottom-most (from C1) -> rightmost (to S1)
    let c4 = oriented_region_path(3, &bottom, &right);
    // C5: leftmost (from Sk) -> bottom-most (to C2)
    let c5 = oriented_region_path(4, &left, &bottom);
    // C2: topmost (from C5) -> leftmost (to C3)
    let c2 = oriented_region_path(1, &top, &left);
    // C3: rightmost (from C2) -> leftmost (to C1)
    let c3 = oriented_region_path(2, &right, &left);

    let mut order = Vec::with_capacity(n);
    order.extend(c1);
    order.extend(c4);
    for path in &strip_paths {
        order.extend(path.iter().copied());
    }
    order.extend(c5);
    order.extend(c2);
    order.extend(c3);

    let tour = Tour::new(inst, order)?;
    let crossings = count_crossings_sweep(inst, &tour);
    let valid = crossings == 0;
    let failure_reason = if under_populated {
        Some(FailureReason::UnderPopulatedRegion)
    } else if not_nice {
        Some(FailureReason::NotNice)
    } else if !valid || !uncross_ok {
        Some(FailureReason::CrossingDetected)
    } else {
        None
    };

    Ok(ConstructionResult {
        tour,
        valid,
        strip_path_lengths,
        failure_reason,
    })
}

/// Crossing count of a tour via an interval sweep over edge x-extents;
/// agrees with `tour::count_crossings` but skips the quadratic blowup for
/// tours whose edges are mostly short, as the constructed tours are.
pub fn count_crossings_sweep(inst: &Instance, t: &Tour) -> usize {
    let n = t.n();
    #[derive(Clone, Copy)]
    struct Span {
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
        edge: usize,
    }
    let mut spans: Vec<Span> = (0..n)
        .map(|e| {
            let (i, j) = t.edge(e);
            let (p, q) = (inst.point(i), inst.point(j));
            Span {
                xmin: p.x.min(q.x),
                xmax: p.x.max(q.x),
                ymin: p.y.min(q.y),
                ymax: p.y.max(q.y),
                edge: e,
            }
        })
        .collect();
    spans.sort_by(|a, b| a.xmin.total_cmp(&b.xmin).then(a.edge.cmp(&b.edge)));

    let mut count = 0usize;
    let mut active: Vec<Span> = Vec::new();
    for s in &spans {
        active.retain(|a| a.xmax >= s.xmin);
        let (si, sj) = t.edge(s.edge);
        let (sp, sq) = (inst.point(si), inst.point(sj));
        for a in &active {
            if a.ymax < s.ymin || s.ymax < a.ymin {
                continue;
            }
            let lo = a.edge.min(s.edge);
            let hi = a.edge.max(s.edge);
            if (lo + 1) % n == hi || (hi + 1) % n == lo {
                continue;
            }
            let (ai, aj) = t.edge(a.edge);
            if seg_cross(sp, sq, inst.point(ai), inst.point(aj)) {
                count += 1;
            }
        }
        active.push(*s);
    }
    count
}

/// Closed form E|X−Y| = (b−a)/3 for X, Y independent uniform on \[a,b\].
pub fn expected_abs_uniform_gap(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!(
            "need a < b, got a = {a}, b = {b}"
        )));
    }
    Ok((b - a) / 3.0)
}

/// Monte-Carlo estimate of E|X−Y| on \[a,b\]: (mean, standard error).
pub fn mc_abs_uniform_gap(a: f64, b: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = rng::stream(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let x = a + (b - a) * rng::unit_f64(&mut rng);
        let y = a + (b - a) * rng::unit_f64(&mut rng);
        let gap = (x - y).abs();
        sum += gap;
        sum_sq += gap * gap;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    (mean, (var / samples as f64).sqrt())
}
