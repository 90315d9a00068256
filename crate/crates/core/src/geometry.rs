//! Exact-decision planar primitives: orientation, segment intersection and
//! Euclidean distance.
//!
//! The orientation sign is evaluated with adaptive-precision arithmetic
//! (Shewchuk's predicates via the `robust` crate), so crossing decisions are
//! consistent no matter how close a configuration is to degenerate. The
//! local searches rely on that consistency for termination: a predicate that
//! flip-flops under rounding could report a "crossing" whose removal does not
//! shorten the tour.
//!
//! Crossing convention: two closed segments cross iff their intersection is
//! nonempty. That includes proper crossings, endpoint touches, T-touches and
//! collinear overlaps. Adjacent tour edges always meet at their shared
//! vertex, so tour-level code only ever tests non-adjacent edge pairs.

use crate::{Error, Result};

/// A location in the plane, in unit-square units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFiniteCoordinate)
        }
    }
}

/// Euclidean distance √((aₓ−bₓ)² + (a_y−b_y)²).
#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Sign of the determinant (b−a)×(c−a), decided exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
    Collinear,
}

/// Exact orientation of the triple (a, b, c).
///
/// Counterclockwise means c lies strictly left of the directed line a→b.
pub fn orientation(a: Point, b: Point, c: Point) -> Orientation {
    let det = robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    );
    if det > 0.0 {
        Orientation::Counterclockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// A closed line segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    /// Zero-length segments are rejected.
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            Err(Error::DegenerateSegment)
        } else {
            Ok(Self { a, b })
        }
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }
}

/// True iff the closed segments have nonempty intersection.
pub fn segments_cross(s: Segment, t: Segment) -> bool {
    seg_cross(s.a, s.b, t.a, t.b)
}

/// Four-point form of [`segments_cross`] used by the tour scans, where
/// endpoints are known to be distinct instance points.
#[inline]
pub fn seg_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    // Cheap reject: disjoint bounding boxes cannot intersect. This is what
    // keeps the O(n²) crossing scans affordable.
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return false;
    }

    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);

    if opposite(d1, d2) && opposite(d3, d4) {
        return true; // proper crossing
    }
    // Degenerate cases: a collinear endpoint lying within the other
    // segment's bounding box is on the other segment.
    (d1 == Orientation::Collinear && in_box(c, d, a))
        || (d2 == Orientation::Collinear && in_box(c, d, b))
        || (d3 == Orientation::Collinear && in_box(a, b, c))
        || (d4 == Orientation::Collinear && in_box(a, b, d))
}

#[inline]
fn opposite(u: Orientation, v: Orientation) -> bool {
    matches!(
        (u, v),
        (Orientation::Clockwise, Orientation::Counterclockwise)
            | (Orientation::Counterclockwise, Orientation::Clockwise)
    )
}

#[inline]
fn in_box(p: Point, q: Point, r: Point) -> bool {
    p.x.min(q.x) <= r.x && r.x <= p.x.max(q.x) && p.y.min(q.y) <= r.y && r.y <= p.y.max(q.y)
}

/// Axis-aligned rectangle \[x0,x1\]×\[y0,y1\].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::InvalidParameter(format!(
                "degenerate rectangle [{x0},{x1}]x[{y0},{y1}]"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn contains(&self, p: Point) -> bool {
        self.x0 <= p.x && p.x <= self.x1 && self.y0 <= p.y && p.y <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y).unwrap()
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(p(0.0, 0.0), p(3.0, 4.0)), 5.0);
        assert_eq!(dist(p(1.0, 1.0), p(1.0, 1.0)), 0.0);
        assert!((dist(p(0.0, 0.0), p(1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dist_symmetric() {
        let (a, b) = (p(0.3, -1.7), p(2.5, 0.9));
        assert_eq!(dist(a, b), dist(b, a));
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point::new(f64::NAN, 0.0).is_err());
        assert!(Point::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(
            orientation(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)),
            Orientation::Counterclockwise
        );
        assert_eq!(
            orientation(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)),
            Orientation::Collinear
        );
        assert_eq!(
            orientation(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)),
            Orientation::Clockwise
        );
    }

    #[test]
    fn segment_rejects_zero_length() {
        assert!(Segment::new(p(1.0, 2.0), p(1.0, 2.0)).is_err());
    }

    #[test]
    fn crossing_examples() {
        let seg = |a: Point, b: Point| Segment::new(a, b).unwrap();
        // diagonals of the unit square
        assert!(segments_cross(
            seg(p(0.0, 0.0), p(1.0, 1.0)),
            seg(p(0.0, 1.0), p(1.0, 0.0))
        ));
        // parallel disjoint
        assert!(!segments_cross(
            seg(p(0.0, 0.0), p(1.0, 0.0)),
            seg(p(0.0, 1.0), p(1.0, 1.0))
        ));
        // collinear overlap
        assert!(segments_cross(
            seg(p(0.0, 0.0), p(2.0, 0.0)),
            seg(p(1.0, 0.0), p(3.0, 0.0))
        ));
    }

    #[test]
    fn crossing_degenerate_touches() {
        let seg = |a: Point, b: Point| Segment::new(a, b).unwrap();
        // T-touch: endpoint on the interior of the other segment
        assert!(segments_cross(
            seg(p(0.0, 0.0), p(2.0, 0.0)),
            seg(p(1.0, 0.0), p(1.0, 1.0))
        ));
        // shared endpoint
        assert!(segments_cross(
            seg(p(0.0, 0.0), p(1.0, 0.0)),
            seg(p(1.0, 0.0), p(2.0, 1.0))
        ));
        // collinear but disjoint
        assert!(!segments_cross(
            seg(p(0.0, 0.0), p(1.0, 0.0)),
            seg(p(2.0, 0.0), p(3.0, 0.0))
        ));
    }
}
