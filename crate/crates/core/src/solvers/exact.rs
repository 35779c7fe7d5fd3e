//! Exact minimum disk cover.
//!
//! The solve alternates between two steps. An exact set cover is computed
//! over a small active subset of the UEs, using the finite candidate centers
//! of that subset. If the resulting disks cover every UE the count is
//! optimal for the whole instance, since the optimum of a subset never
//! exceeds the optimum of the full set. Otherwise the uncovered UEs farthest
//! from the current disks join the active subset and the cover is recomputed.
//!
//! The set cover is a best-first branch and bound: greedy incumbent,
//! dominance-reduced rows, branching on the uncovered UE with the fewest
//! covering rows, and a lower bound that takes the larger of a packing bound
//! (UEs no single disk can pair up) and `ceil(|uncovered| / max row size)`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::time::Instant;

use super::candidates::candidate_centers;
use super::spiral::spiral_centers;
use super::{
    check_points, check_radius, Algorithm, Budget, PlacementSolution, SolveStatus, SolverConfig,
};
use crate::geometry::{minimum_enclosing_circle, Disk, Point};
use crate::Result;

const GROWTH_BATCH: usize = 4;

pub fn solve_exact(
    points: &[Point],
    radius: f64,
    config: &SolverConfig,
) -> Result<PlacementSolution> {
    check_radius(radius)?;
    check_points(points)?;
    config.validate()?;
    let started = Instant::now();
    let done = |centers, status| {
        PlacementSolution::finish(points, centers, radius, Algorithm::Exact, started, status)
    };

    if points.is_empty() {
        return Ok(done(Vec::new(), SolveStatus::Complete));
    }
    let mec = minimum_enclosing_circle(points)?;
    if mec.radius <= radius {
        return Ok(done(vec![mec.center], SolveStatus::Complete));
    }

    let mut budget = Budget::new(config, started);
    let mut active = packing_seed(points, radius);
    let mut in_active = vec![false; points.len()];
    for &i in &active {
        in_active[i] = true;
    }
    let mut lower = active.len();

    loop {
        let subset: Vec<Point> = active.iter().map(|&i| points[i]).collect();
        match cover_subset(&subset, radius, lower, &mut budget) {
            SubsetCover::Optimal(centers) => {
                let disks: Vec<Disk> = centers.iter().map(|c| Disk::new(*c, radius)).collect();
                let uncovered: Vec<usize> = (0..points.len())
                    .filter(|&i| !disks.iter().any(|d| d.contains(&points[i])))
                    .collect();
                if uncovered.is_empty() {
                    return Ok(done(centers, SolveStatus::Complete));
                }
                lower = centers.len();
                for i in pick_far(points, &uncovered, &centers, GROWTH_BATCH) {
                    if !in_active[i] {
                        in_active[i] = true;
                        active.push(i);
                    }
                }
            }
            SubsetCover::Exhausted(partial) => {
                return Ok(done(
                    fallback_cover(points, radius, partial),
                    SolveStatus::BudgetExceeded,
                ));
            }
        }
    }
}

// Completes a partial cover with the spiral heuristic, and keeps plain
// spiral if that is smaller.
fn fallback_cover(points: &[Point], radius: f64, partial: Option<Vec<Point>>) -> Vec<Point> {
    let plain = spiral_centers(points, radius);
    let Some(mut centers) = partial else {
        return plain;
    };
    let disks: Vec<Disk> = centers.iter().map(|c| Disk::new(*c, radius)).collect();
    let rest: Vec<Point> = points
        .iter()
        .filter(|p| !disks.iter().any(|d| d.contains(p)))
        .copied()
        .collect();
    centers.extend(spiral_centers(&rest, radius));
    if centers.len() <= plain.len() {
        centers
    } else {
        plain
    }
}

// Farthest-first traversal from the lowest (y, x) point, stopping once the
// next pick is within 2r of the chosen set. The picks are pairwise more
// than 2r apart, so their count is a lower bound on the optimum.
fn packing_seed(points: &[Point], radius: f64) -> Vec<usize> {
    let start = (0..points.len())
        .min_by(|&a, &b| points[a].cmp_yx(&points[b]).then(a.cmp(&b)))
        .expect("non-empty");
    let mut chosen = vec![start];
    let mut nearest: Vec<f64> = points.iter().map(|p| p.dist(&points[start])).collect();
    let reach = 2.0 * radius * (1.0 + crate::geometry::REL_TOL);
    loop {
        let (far, d) =
            nearest.iter().enumerate().fold(
                (0, -1.0),
                |best, (i, &d)| if d > best.1 { (i, d) } else { best },
            );
        if d <= reach {
            return chosen;
        }
        chosen.push(far);
        for (i, p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(p.dist(&points[far]));
        }
    }
}

// Up to `count` uncovered points, greedily maximizing the distance to the
// current centers and to each other.
fn pick_far(points: &[Point], uncovered: &[usize], centers: &[Point], count: usize) -> Vec<usize> {
    let mut gap: Vec<f64> = uncovered
        .iter()
        .map(|&i| {
            centers
                .iter()
                .map(|c| c.dist(&points[i]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count.min(uncovered.len()) {
        let (k, _) = gap.iter().enumerate().fold(
            (0, -1.0),
            |best, (k, &g)| if g > best.1 { (k, g) } else { best },
        );
        let chosen = uncovered[k];
        picked.push(chosen);
        for (k2, &i) in uncovered.iter().enumerate() {
            gap[k2] = gap[k2].min(points[i].dist(&points[chosen]));
        }
        gap[k] = -1.0;
    }
    picked
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Self::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[cfg(test)]
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .position(|&w| w != 0)
            .map(|w| w * 64 + self.0[w].trailing_zeros() as usize)
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn intersection_len(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn difference(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }
}

enum SubsetCover {
    Optimal(Vec<Point>),
    /// Budget ran out; carries the incumbent cover of the subset if any.
    Exhausted(Option<Vec<Point>>),
}

struct CoverProblem {
    centers: Vec<Point>,
    rows: Vec<Bits>,
    /// Row indices covering each point.
    covering: Vec<Vec<usize>>,
    /// Points sharing at least one row with each point.
    partners: Vec<Bits>,
}

impl CoverProblem {
    fn build(subset: &[Point], radius: f64) -> Self {
        let n = subset.len();
        let cands = candidate_centers(subset, radius);
        let mut rows: Vec<(Bits, Point)> = cands
            .into_iter()
            .map(|c| {
                let disk = Disk::new(c, radius);
                let mut row = Bits::empty(n);
                for (i, p) in subset.iter().enumerate() {
                    if disk.contains(p) {
                        row.insert(i);
                    }
                }
                (row, c)
            })
            .collect();
        // Largest rows first; stable sort keeps generation order on ties.
        rows.sort_by_key(|(r, _)| Reverse(r.len()));

        let mut kept: Vec<(Bits, Point)> = Vec::new();
        for (row, c) in rows {
            if row.is_empty() || kept.iter().any(|(k, _)| row.is_subset(k)) {
                continue;
            }
            kept.push((row, c));
        }

        let mut covering = vec![Vec::new(); n];
        let mut partners = vec![Bits::empty(n); n];
        for (r, (row, _)) in kept.iter().enumerate() {
            for i in row.iter() {
                covering[i].push(r);
                partners[i].union_with(row);
            }
        }
        let (rows, centers) = kept.into_iter().unzip();
        Self {
            centers,
            rows,
            covering,
            partners,
        }
    }

    fn lower_bound(&self, uncovered: &Bits) -> usize {
        let count = uncovered.len();
        if count == 0 {
            return 0;
        }
        let widest = self
            .rows
            .iter()
            .map(|r| r.intersection_len(uncovered))
            .max()
            .unwrap_or(1)
            .max(1);
        let mut packing = 0;
        let mut left = uncovered.clone();
        while let Some(i) = left.first() {
            packing += 1;
            left = left.difference(&self.partners[i]);
        }
        count.div_ceil(widest).max(packing)
    }

    fn greedy(&self, all: &Bits) -> Vec<usize> {
        let mut left = all.clone();
        let mut chosen = Vec::new();
        while !left.is_empty() {
            let best = (0..self.rows.len())
                .max_by_key(|&r| (self.rows[r].intersection_len(&left), Reverse(r)))
                .expect("every point has a covering row");
            chosen.push(best);
            left = left.difference(&self.rows[best]);
        }
        chosen
    }
}

struct Node {
    bound: usize,
    chosen: Vec<usize>,
    uncovered: Bits,
    seq: u64,
}

impl Node {
    // Smallest bound first, deeper first on ties, then insertion order.
    fn key(&self) -> (Reverse<usize>, usize, Reverse<u64>) {
        (Reverse(self.bound), self.chosen.len(), Reverse(self.seq))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

// Minimum cover of `subset`; `known_lower` is a valid lower bound on its size.
fn cover_subset(
    subset: &[Point],
    radius: f64,
    known_lower: usize,
    budget: &mut Budget,
) -> SubsetCover {
    let problem = CoverProblem::build(subset, radius);
    let all = Bits::full(subset.len());
    let mut incumbent = problem.greedy(&all);
    let to_points = |rows: &[usize]| rows.iter().map(|&r| problem.centers[r]).collect::<Vec<_>>();

    let root_bound = problem.lower_bound(&all).max(known_lower);
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: root_bound,
        chosen: Vec::new(),
        uncovered: all,
        seq: 0,
    });
    let mut seq = 1u64;

    while let Some(node) = heap.pop() {
        if node.bound >= incumbent.len() || incumbent.len() <= known_lower {
            break;
        }
        if !budget.charge() {
            return SubsetCover::Exhausted(Some(to_points(&incumbent)));
        }
        let pivot = node
            .uncovered
            .iter()
            .min_by_key(|&i| (problem.covering[i].len(), i))
            .expect("open nodes have uncovered points");
        for &r in &problem.covering[pivot] {
            let rest = node.uncovered.difference(&problem.rows[r]);
            let mut chosen = node.chosen.clone();
            chosen.push(r);
            if rest.is_empty() {
                if chosen.len() < incumbent.len() {
                    incumbent = chosen;
                }
                continue;
            }
            let bound = chosen.len() + problem.lower_bound(&rest);
            if bound < incumbent.len() {
                heap.push(Node {
                    bound,
                    chosen,
                    uncovered: rest,
                    seq,
                });
                seq += 1;
            }
        }
    }
    SubsetCover::Optimal(to_points(&incumbent))
}
