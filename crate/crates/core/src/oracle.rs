//! Brute-force ground truth: exact optimal tours via Held–Karp, exhaustive
//! enumeration of canonical tours, and noncrossing-tour extremes.
//!
//! Size caps keep every oracle call at desk scale: 2ⁿ·n² dynamic programming
//! up to n = 16 and (n−1)!/2 enumeration up to n = 10.

use crate::geometry::dist;
use crate::tour::{count_crossings, tour_length, Instance, Tour};
use crate::{Error, Result};

pub const MAX_EXACT_N: usize = 16;
pub const MAX_ENUMERATE_N: usize = 10;

/// Which tours [`enumerate_tours`] yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TourFilter {
    All,
    NoncrossingOnly,
}

/// Shortest tour and its length by Held–Karp dynamic programming over
/// vertex subsets, for 3 ≤ n ≤ 16.
///
/// The reported length is recomputed over the canonical vertex order, so it
/// is bitwise comparable with enumeration results for the same tour.
pub fn optimal_tour_exact(inst: &Instance) -> Result<(Tour, f64)> {
    let n = inst.n();
    if n > MAX_EXACT_N {
        return Err(Error::SizeLimit {
            n,
            max: MAX_EXACT_N,
        });
    }
    let d: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| dist(inst.point(i), inst.point(j))).collect())
        .collect();

    // dp over subsets of {1..n-1}; paths start at vertex 0.
    let m = n - 1;
    let full = 1usize << m;
    let mut cost = vec![f64::INFINITY; full * m];
    let mut parent = vec![usize::MAX; full * m];
    for last in 0..m {
        cost[(1 << last) * m + last] = d[0][last + 1];
    }
    for mask in 1..full {
        for last in 0..m {
            if mask & (1 << last) == 0 {
                continue;
            }
            let c = cost[mask * m + last];
            if !c.is_finite() {
                continue;
            }
            let rest = mask;
            for next in 0..m {
                if rest & (1 << next) != 0 {
                    continue;
                }
                let nmask = mask | (1 << next);
                let nc = c + d[last + 1][next + 1];
                if nc < cost[nmask * m + next] {
                    cost[nmask * m + next] = nc;
                    parent[nmask * m + next] = last;
                }
            }
        }
    }
    let mut best_last = 0;
    let mut best = f64::INFINITY;
    for last in 0..m {
        let total = cost[(full - 1) * m + last] + d[last + 1][0];
        if total < best {
            best = total;
            best_last = last;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full - 1;
    let mut last = best_last;
    while last != usize::MAX {
        order.push(last + 1);
        let p = parent[mask * m + last];
        mask &= !(1 << last);
        last = p;
    }
    order.push(0);
    order.reverse();
    let tour = Tour::new(inst, order)?;
    let canonical = Tour::new(inst, tour.canonical_order())?;
    let length = tour_length(inst, &canonical);
    Ok((canonical, length))
}

/// Iterator over canonical tours: vertex 0 first, direction fixed by
/// second-vertex < last-vertex. Yields (n−1)!/2 tours for `All`.
pub fn enumerate_tours<'a>(
    inst: &'a Instance,
    filter: TourFilter,
) -> Result<impl Iterator<Item = (Tour, f64)> + 'a> {
    let n = inst.n();
    if n > MAX_ENUMERATE_N {
        return Err(Error::SizeLimit {
            n,
            max: MAX_ENUMERATE_N,
        });
    }
    Ok(TourEnumerator {
        inst,
        filter,
        tail: (1..n).collect(),
        done: false,
    })
}

struct TourEnumerator<'a> {
    inst: &'a Instance,
    filter: TourFilter,
    tail: Vec<usize>,
    done: bool,
}

impl Iterator for TourEnumerator<'_> {
    type Item = (Tour, f64);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.done {
                return None;
            }
            let canonical = self.tail[0] < self.tail[self.tail.len() - 1];
            let candidate = if canonical {
                let mut order = Vec::with_capacity(self.tail.len() + 1);
                order.push(0);
                order.extend_from_slice(&self.tail);
                let tour = Tour::new(self.inst, order).expect("permutation is a bijection");
                match self.filter {
                    TourFilter::All => Some(tour),
                    TourFilter::NoncrossingOnly => {
                        (count_crossings(self.inst, &tour) == 0).then_some(tour)
                    }
                }
            } else {
                None
            };
            if !next_permutation(&mut self.tail) {
                self.done = true;
            }
            if let Some(tour) = candidate {
                let len = tour.cached_length();
                return Some((tour, len));
            }
        }
    }
}

/// Lexicographic next permutation in place; false when wrapped around.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Argmax of length over all noncrossing canonical tours, n ≤ 10.
pub fn longest_noncrossing_tour(inst: &Instance) -> Result<(Tour, f64)> {
    let mut best: Option<(Tour, f64)> = None;
    for (tour, len) in enumerate_tours(inst, TourFilter::NoncrossingOnly)? {
        if best.as_ref().is_none_or(|(_, b)| len > *b) {
            best = Some((tour, len));
        }
    }
    best.ok_or(Error::NoNoncrossingTour)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::tour::Provenance;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y).unwrap()
    }

    fn square() -> Instance {
        Instance::new(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)],
            Provenance::External,
        )
        .unwrap()
    }

    #[test]
    fn optimal_square_is_perimeter() {
        let inst = square();
        let (tour, len) = optimal_tour_exact(&inst).unwrap();
        assert!((len - 4.0).abs() < 1e-12);
        assert_eq!(tour.canonical_order(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn optimal_triangle() {
        let inst = Instance::new(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)],
            Provenance::External,
        )
        .unwrap();
        let (tour, len) = optimal_tour_exact(&inst).unwrap();
        assert_eq!(tour.n(), 3);
        assert!((len - (2.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn enumeration_counts() {
        let inst = square();
        let all: Vec<_> = enumerate_tours(&inst, TourFilter::All).unwrap().collect();
        assert_eq!(all.len(), 3);
        let noncrossing: Vec<_> = enumerate_tours(&inst, TourFilter::NoncrossingOnly)
            .unwrap()
            .collect();
        assert_eq!(noncrossing.len(), 1);
        assert_eq!(noncrossing[0].0.canonical_order(), vec![0, 1, 2, 3]);

        let seven = crate::generators::gen_uniform(7, 3).unwrap();
        assert_eq!(
            enumerate_tours(&seven, TourFilter::All).unwrap().count(),
            360
        );
    }

    #[test]
    fn enumeration_yields_distinct_canonical_tours() {
        let inst = crate::generators::gen_uniform(6, 9).unwrap();
        let mut seen = std::collections::HashSet::new();
        for (tour, _) in enumerate_tours(&inst, TourFilter::All).unwrap() {
            assert_eq!(tour.canonical_order(), tour.order().to_vec());
            assert!(seen.insert(tour.order().to_vec()), "duplicate tour");
        }
        assert_eq!(seen.len(), 60); // 5!/2
    }

    #[test]
    fn held_karp_matches_enumeration_exactly() {
        for seed in 0..10 {
            let inst = crate::generators::gen_uniform(8, seed).unwrap();
            let (_, hk) = optimal_tour_exact(&inst).unwrap();
            let enum_min = enumerate_tours(&inst, TourFilter::All)
                .unwrap()
                .map(|(_, len)| len)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(hk, enum_min, "seed {seed}");
        }
    }

    #[test]
    fn optimum_is_noncrossing() {
        for seed in 20..25 {
            let inst = crate::generators::gen_uniform(7, seed).unwrap();
            let min_all = enumerate_tours(&inst, TourFilter::All)
                .unwrap()
                .map(|(_, l)| l)
                .fold(f64::INFINITY, f64::min);
            let min_nc = enumerate_tours(&inst, TourFilter::NoncrossingOnly)
                .unwrap()
                .map(|(_, l)| l)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(min_all, min_nc, "seed {seed}");
        }
    }

    #[test]
    fn longest_noncrossing_square() {
        let inst = square();
        let (tour, _) = longest_noncrossing_tour(&inst).unwrap();
        assert_eq!(tour.canonical_order(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn size_limits() {
        let inst = crate::generators::gen_uniform(17, 0).unwrap();
        assert!(matches!(
            optimal_tour_exact(&inst),
            Err(Error::SizeLimit { .. })
        ));
        let inst = crate::generators::gen_uniform(11, 0).unwrap();
        assert!(enumerate_tours(&inst, TourFilter::All).is_err());
    }

    #[test]
    fn counterexample_longest_noncrossing() {
        // The noncrossing 7-point maximum is strictly below l(T), lands at
        // 6L − 4 + 1/√3 + o(1), and uses one x–far edge, three type-4 edges,
        // two type-3 edges and one x–near edge.
        let bundle = crate::generators::gen_counterexample(100.0).unwrap();
        let (tour, len) = longest_noncrossing_tour(&bundle.instance).unwrap();
        let l_t = tour_length(&bundle.without_x, &bundle.tour_t);
        assert!(len < l_t);
        let predicted = 6.0 * 100.0 - 4.0 + 1.0 / 3f64.sqrt();
        assert!((len - predicted).abs() < 0.05, "len {len} vs {predicted}");

        let mut profile: Vec<u8> = (0..7)
            .map(|e| {
                let (i, j) = tour.edge(e);
                crate::generators::counterexample_edge_type(i, j)
            })
            .collect();
        profile.sort_unstable();
        assert_eq!(profile, vec![1, 3, 3, 4, 4, 4, 5]);
    }
}
