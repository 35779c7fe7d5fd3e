use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_points, check_radius, Algorithm, PlacementSolution, SolveStatus, SolverConfig};
use crate::geometry::Point;
use crate::Result;

const CONVERGENCE_TOL: f64 = 1e-9;

/// K-means baseline: the smallest `k` for which some restart of Lloyd's
/// algorithm (k-means++ seeding) leaves every point within `radius` of its
/// nearest centroid.
pub fn solve_kmeans(
    points: &[Point],
    radius: f64,
    config: &SolverConfig,
) -> Result<PlacementSolution> {
    check_radius(radius)?;
    check_points(points)?;
    config.validate()?;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let limit = radius * (1.0 + crate::geometry::REL_TOL);

    let mut centers = Vec::new();
    'outer: for k in 1..=points.len() {
        for _ in 0..config.kmeans_restarts {
            let candidate = lloyd(points, k, config.kmeans_max_iter, &mut rng);
            if max_nearest_distance(points, &candidate) <= limit {
                centers = candidate;
                break 'outer;
            }
        }
    }
    Ok(PlacementSolution::finish(
        points,
        centers,
        radius,
        Algorithm::Kmeans,
        started,
        SolveStatus::Complete,
    ))
}

fn nearest(p: &Point, centers: &[Point]) -> (usize, f64) {
    centers
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.dist2(p)))
        .fold(
            (0, f64::INFINITY),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        )
}

fn max_nearest_distance(points: &[Point], centers: &[Point]) -> f64 {
    points
        .iter()
        .map(|p| nearest(p, centers).1.sqrt())
        .fold(0.0, f64::max)
}

fn kmeans_plus_plus(points: &[Point], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut centers = vec![points[rng.random_range(0..points.len())]];
    let mut d2: Vec<f64> = points.iter().map(|p| p.dist2(&centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut idx = points.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 && target < w {
                    idx = i;
                    break;
                }
                target -= w;
            }
            // Guard against rounding landing on a zero-weight tail.
            if d2[idx] == 0.0 {
                idx = d2.iter().rposition(|&w| w > 0.0).unwrap_or(idx);
            }
            idx
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[pick];
        centers.push(c);
        for (w, p) in d2.iter_mut().zip(points) {
            *w = w.min(p.dist2(&c));
        }
    }
    centers
}

fn lloyd(points: &[Point], k: usize, max_iter: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut centers = kmeans_plus_plus(points, k, rng);
    let mut sums = vec![(0.0, 0.0, 0usize); k];
    for _ in 0..max_iter {
        sums.iter_mut().for_each(|s| *s = (0.0, 0.0, 0));
        for p in points {
            let (c, _) = nearest(p, &centers);
            sums[c].0 += p.x;
            sums[c].1 += p.y;
            sums[c].2 += 1;
        }
        let mut moved: f64 = 0.0;
        for (c, &(sx, sy, n)) in centers.iter_mut().zip(&sums) {
            // Empty clusters keep their centroid.
            if n > 0 {
                let next = Point::new(sx / n as f64, sy / n as f64);
                moved = moved.max(next.dist(c));
                *c = next;
            }
        }
        if moved <= CONVERGENCE_TOL {
            break;
        }
    }
    centers
}
