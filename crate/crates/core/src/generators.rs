//! Instance factories: uniform random points, the worst-case family whose
//! noncrossing tour is a factor ~n/2 longer than the optimum, the 7-point
//! counterexample family, and the niceness predicate for rectangles.
//!
//! Every generator is a deterministic function of its parameters (and seed
//! where applicable), and validates its own geometric invariants at
//! construction rather than trusting the placement arithmetic.

use std::collections::HashSet;

use crate::geometry::{dist, orientation, Orientation, Point, Rect};
use crate::rng;
use crate::tour::{count_crossings, tour_length, Instance, Provenance, Tour};
use crate::{Error, Result};

/// Largest epsilon accepted by [`gen_worstcase`]; beyond this the good-tour
/// construction degrades.
pub const MAX_EPSILON: f64 = 0.3;

/// Smallest scale accepted by [`gen_counterexample`].
pub const MIN_SCALE_L: f64 = 10.0;

/// n i.i.d. uniform points in \[0,1\]²; duplicates (probability ~0) are
/// resampled.
pub fn gen_uniform(n: usize, seed: u64) -> Result<Instance> {
    if n < 3 {
        return Err(Error::TooFewPoints { n, min: 3 });
    }
    let mut rng = rng::stream(seed);
    let mut points = Vec::with_capacity(n);
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(n);
    while points.len() < n {
        let x = rng::unit_f64(&mut rng);
        let y = rng::unit_f64(&mut rng);
        if seen.insert((x.to_bits(), y.to_bits())) {
            points.push(Point { x, y });
        }
    }
    Instance::new(points, Provenance::Uniform { n, seed })
}

/// An instance together with its long noncrossing tour and a short tour.
#[derive(Debug, Clone)]
pub struct WorstCaseBundle {
    pub instance: Instance,
    /// Noncrossing tour of length ≥ √2·n·(1−ε/2).
    pub bad_tour: Tour,
    /// Tour of length ≤ 2√2·(1+ε/2).
    pub good_tour: Tour,
    pub epsilon: f64,
    pub n: usize,
}

/// Builds the worst-case family: one point at the origin, k = n/2 points on
/// a short segment near the far corner, and k−1 points on the perpendicular
/// chord of the cone spanned by the far points, close to the origin.
///
/// Instance index layout: 0 = s, 1..=k = y₁..y_k, k+1..=2k−1 = x₁..x_{k−1}.
/// The bad tour zigzags s,y₁,x₁,y₂,x₂,…,x_{k−1},y_k; the good tour walks the
/// x-chain then the y-chain. All claimed bounds are re-checked numerically
/// and construction fails loudly if any is violated.
pub fn gen_worstcase(n: usize, epsilon: f64) -> Result<WorstCaseBundle> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "worst-case family needs even n >= 4, got {n}"
        )));
    }
    if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be in (0, {MAX_EPSILON}], got {epsilon}"
        )));
    }
    let k = n / 2;
    let s = Point { x: 0.0, y: 0.0 };

    // y-points equally spaced on the segment (1−ε/2,1) – (1,1−ε/2), by
    // increasing x.
    let step = (epsilon / 2.0) / (k - 1) as f64;
    let ys: Vec<Point> = (0..k)
        .map(|i| Point {
            x: 1.0 - epsilon / 2.0 + i as f64 * step,
            y: 1.0 - i as f64 * step,
        })
        .collect();

    // x-points on the chord of the cone spanned by {y₁, y_k}, perpendicular
    // to its axis (the diagonal) at height ε/√8. The chord's half-width is
    // h·ε/(4−ε); the k−1 points are equally spaced with the endpoints
    // excluded, by increasing x.
    let height = epsilon / 8f64.sqrt();
    let half_width = height * epsilon / (4.0 - epsilon);
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let center = (height * inv_sqrt2, height * inv_sqrt2);
    let xs: Vec<Point> = (1..k)
        .map(|i| {
            let t = -half_width + i as f64 * (2.0 * half_width) / k as f64;
            Point {
                x: center.0 + t * inv_sqrt2,
                y: center.1 - t * inv_sqrt2,
            }
        })
        .collect();

    let mut points = Vec::with_capacity(n);
    points.push(s);
    points.extend_from_slice(&ys);
    points.extend_from_slice(&xs);
    let instance = Instance::new(points, Provenance::WorstCase { n, epsilon })?;

    let mut bad_order = Vec::with_capacity(n);
    bad_order.push(0);
    for i in 1..k {
        bad_order.push(i); // y_i
        bad_order.push(k + i); // x_i
    }
    bad_order.push(k); // y_k
    let bad_tour = Tour::new(&instance, bad_order)?;

    let mut good_order = Vec::with_capacity(n);
    good_order.push(0);
    good_order.extend(k + 1..2 * k); // x-chain left to right
    good_order.extend(1..=k); // y-chain
    let good_tour = Tour::new(&instance, good_order)?;

    let sqrt2 = 2f64.sqrt();
    if let Some(p) = instance
        .points()
        .iter()
        .find(|p| !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y))
    {
        return Err(Error::ConstructionViolated(format!(
            "point ({}, {}) outside the unit square",
            p.x, p.y
        )));
    }
    let crossings = count_crossings(&instance, &bad_tour);
    if crossings != 0 {
        return Err(Error::ConstructionViolated(format!(
            "bad tour has {crossings} crossings"
        )));
    }
    let bad_len = tour_length(&instance, &bad_tour);
    let bad_bound = sqrt2 * n as f64 * (1.0 - epsilon / 2.0);
    if bad_len < bad_bound {
        return Err(Error::ConstructionViolated(format!(
            "bad tour length {bad_len} below bound {bad_bound}"
        )));
    }
    let good_len = tour_length(&instance, &good_tour);
    let good_bound = 2.0 * sqrt2 * (1.0 + epsilon / 2.0);
    if good_len > good_bound {
        return Err(Error::ConstructionViolated(format!(
            "good tour length {good_len} above bound {good_bound}"
        )));
    }

    Ok(WorstCaseBundle {
        instance,
        bad_tour,
        good_tour,
        epsilon,
        n,
    })
}

/// Point labels of the counterexample instance, in index order.
pub const COUNTEREXAMPLE_LABELS: [&str; 7] = ["x", "a", "b", "c", "u", "v", "w"];

/// The 7-point counterexample: a unit equilateral triangle abc with center x
/// and three distant points u,v,w, such that the noncrossing tour T through
/// all points but x is longer than every noncrossing tour through all seven.
#[derive(Debug, Clone)]
pub struct CounterexampleBundle {
    /// All 7 points, indexed x=0, a=1, b=2, c=3, u=4, v=5, w=6.
    pub instance: Instance,
    /// The 6 points a,b,c,u,v,w (same coordinates, x removed).
    pub without_x: Instance,
    /// The noncrossing tour a,v,c,u,b,w on `without_x`.
    pub tour_t: Tour,
    pub scale_l: f64,
}

/// Edge-length class of a point pair in the 7-point instance, 1..=7 from
/// shortest to longest: 1 = x–near, 2 = triangle side, 3/4/6 = the three
/// near–far classes, 5 = x–far, 7 = far–far.
pub fn counterexample_edge_type(i: usize, j: usize) -> u8 {
    let (lo, hi) = (i.min(j), i.max(j));
    assert!(lo != hi && hi < 7, "expected distinct 7-point indices");
    match (lo, hi) {
        (0, 1..=3) => 1,
        (0, _) => 5,
        (1..=3, 1..=3) => 2,
        (3, 4) | (1, 5) | (2, 6) => 3,
        (1, 4) | (2, 5) | (3, 6) => 4,
        (2, 4) | (3, 5) | (1, 6) => 6,
        _ => 7,
    }
}

/// Builds the counterexample at scale L.
///
/// a,b,c form a unit equilateral triangle centered at the origin with a on
/// top; x is the centroid; u, v, w sit at distance L from b, c, a along the
/// rays b→c, c→a, a→b, each rotated clockwise by 1/L so that no three
/// points are collinear and the tour T = a,v,c,u,b,w is noncrossing.
pub fn gen_counterexample(big_l: f64) -> Result<CounterexampleBundle> {
    if !big_l.is_finite() || big_l < MIN_SCALE_L {
        return Err(Error::InvalidParameter(format!(
            "scale L must be >= {MIN_SCALE_L}, got {big_l}"
        )));
    }
    let s3 = 3f64.sqrt();
    let x = Point { x: 0.0, y: 0.0 };
    let a = Point {
        x: 0.0,
        y: 1.0 / s3,
    };
    let b = Point {
        x: -0.5,
        y: -1.0 / (2.0 * s3),
    };
    let c = Point {
        x: 0.5,
        y: -1.0 / (2.0 * s3),
    };
    let theta = -1.0 / big_l; // clockwise
    let far = |from: Point, toward: Point| -> Point {
        let dx = toward.x - from.x;
        let dy = toward.y - from.y;
        let norm = (dx * dx + dy * dy).sqrt();
        let (ux, uy) = (dx / norm, dy / norm);
        let (cos_t, sin_t) = (theta.cos(), theta.sin());
        Point {
            x: from.x + big_l * (ux * cos_t - uy * sin_t),
            y: from.y + big_l * (ux * sin_t + uy * cos_t),
        }
    };
    let u = far(b, c);
    let v = far(c, a);
    let w = far(a, b);

    let instance = Instance::new(
        vec![x, a, b, c, u, v, w],
        Provenance::Counterexample {
            big_l,
            without_x: false,
        },
    )?;
    let without_x = Instance::new(
        vec![a, b, c, u, v, w],
        Provenance::Counterexample {
            big_l,
            without_x: true,
        },
    )?;
    // T = a v c u b w over without_x indices a=0 b=1 c=2 u=3 v=4 w=5.
    let tour_t = Tour::new(&without_x, vec![0, 4, 2, 3, 1, 5])?;

    let check = |label: &str, got: f64, want: f64| -> Result<()> {
        if (got - want).abs() > 1e-9 {
            return Err(Error::ConstructionViolated(format!(
                "{label}: {got} != {want}"
            )));
        }
        Ok(())
    };
    check("d(a,b)", dist(a, b), 1.0)?;
    check("d(b,c)", dist(b, c), 1.0)?;
    check("d(a,c)", dist(a, c), 1.0)?;
    check("d(b,u)", dist(b, u), big_l)?;
    check("d(c,v)", dist(c, v), big_l)?;
    check("d(a,w)", dist(a, w), big_l)?;
    check("d(x,a)", dist(x, a), 1.0 / s3)?;
    check("d(x,b)", dist(x, b), 1.0 / s3)?;
    check("d(x,c)", dist(x, c), 1.0 / s3)?;

    // x must lie strictly inside the triangle uvw (the far points surround
    // the instance).
    let hull_ok = match orientation(u, v, w) {
        Orientation::Counterclockwise => {
            orientation(u, v, x) == Orientation::Counterclockwise
                && orientation(v, w, x) == Orientation::Counterclockwise
                && orientation(w, u, x) == Orientation::Counterclockwise
        }
        Orientation::Clockwise => {
            orientation(u, v, x) == Orientation::Clockwise
                && orientation(v, w, x) == Orientation::Clockwise
                && orientation(w, u, x) == Orientation::Clockwise
        }
        Orientation::Collinear => false,
    };
    if !hull_ok {
        return Err(Error::ConstructionViolated(
            "centroid not inside the hull of the far points".into(),
        ));
    }
    let crossings = count_crossings(&without_x, &tour_t);
    if crossings != 0 {
        return Err(Error::ConstructionViolated(format!(
            "tour T has {crossings} crossings"
        )));
    }

    Ok(CounterexampleBundle {
        instance,
        without_x,
        tour_t,
        scale_l: big_l,
    })
}

/// True iff the closest points to the rectangle's four edges are pairwise
/// distinct. Ties are broken toward the lowest point index.
///
/// All points must lie inside `rect`, so the distance to an edge is the
/// perpendicular distance to its side.
pub fn is_nice(points: &[Point], rect: &Rect) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let edge_dists = [
        |p: Point, r: &Rect| p.x - r.x0, // left
        |p: Point, r: &Rect| r.x1 - p.x, // right
        |p: Point, r: &Rect| p.y - r.y0, // bottom
        |p: Point, r: &Rect| r.y1 - p.y, // top
    ];
    let mut winners = [0usize; 4];
    for (slot, d) in edge_dists.iter().enumerate() {
        let mut best = 0usize;
        for (i, &p) in points.iter().enumerate().skip(1) {
            if d(p, rect) < d(points[best], rect) {
                best = i;
            }
        }
        winners[slot] = best;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if winners[i] == winners[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
