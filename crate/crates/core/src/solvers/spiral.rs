use std::time::Instant;

use super::{check_points, check_radius, Algorithm, PlacementSolution, SolveStatus};
use crate::geometry::{convex_hull, minimum_enclosing_circle, Disk, Point};
use crate::Result;

/// Quasi-optimal sequential placement that peels the uncovered set from its
/// boundary inward.
///
/// Each round anchors on a hull vertex of the still-uncovered UEs (lowest-y
/// on the first round, otherwise the vertex nearest the previous disk), grows
/// a group around it in order of distance while the group's enclosing circle
/// stays within `radius`, places a disk at that circle's center and drops
/// every UE it covers.
pub fn solve_spiral(points: &[Point], radius: f64) -> Result<PlacementSolution> {
    check_radius(radius)?;
    check_points(points)?;
    let started = Instant::now();
    let centers = spiral_centers(points, radius);
    Ok(PlacementSolution::finish(
        points,
        centers,
        radius,
        Algorithm::Spiral,
        started,
        SolveStatus::Complete,
    ))
}

pub(crate) fn spiral_centers(points: &[Point], radius: f64) -> Vec<Point> {
    let mut uncovered: Vec<Point> = points.to_vec();
    let mut centers: Vec<Point> = Vec::new();
    let reach2 = (2.0 * radius).powi(2);

    while !uncovered.is_empty() {
        let hull = convex_hull(&uncovered);
        let anchor = match centers.last() {
            None => *hull
                .iter()
                .min_by(|a, b| a.cmp_yx(b))
                .expect("hull of a non-empty set"),
            Some(prev) => *hull
                .iter()
                .min_by(|a, b| {
                    a.dist2(prev)
                        .total_cmp(&b.dist2(prev))
                        .then_with(|| a.cmp_yx(b))
                })
                .expect("hull of a non-empty set"),
        };

        let mut nearby: Vec<(f64, Point)> = uncovered
            .iter()
            .map(|p| (p.dist2(&anchor), *p))
            .filter(|(d2, _)| *d2 <= reach2)
            .collect();
        nearby.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp_yx(&b.1)));

        let mut group = vec![anchor];
        let mut circle = Disk::new(anchor, 0.0);
        // The anchor itself shows up first at distance zero.
        for &(_, p) in &nearby {
            if circle.contains(&p) {
                group.push(p);
                continue;
            }
            group.push(p);
            let trial = minimum_enclosing_circle(&group).expect("group is non-empty");
            if trial.radius <= radius {
                circle = trial;
            } else {
                group.pop();
            }
        }

        let disk = Disk::new(circle.center, radius);
        centers.push(circle.center);
        uncovered.retain(|p| !disk.contains(p));
    }
    centers
}
