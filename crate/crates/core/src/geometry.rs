//! Planar primitives shared by every solver: points, disks, the minimum
//! enclosing circle and the convex hull.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative slack used by every containment test.
pub const REL_TOL: f64 = 1e-9;

// Fixed shuffle seed so the randomized MEC stays a pure function of its input.
const MEC_SHUFFLE_SEED: u64 = 0x5eed_c1c1e;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Ordering used for tie-breaks: lowest `y` first, then lowest `x`.
    pub fn cmp_yx(&self, other: &Point) -> std::cmp::Ordering {
        self.y.total_cmp(&other.y).then(self.x.total_cmp(&other.x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub const fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    /// Boundary-inclusive containment with [`REL_TOL`] relative slack.
    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        self.center.dist(p) <= self.radius * (1.0 + REL_TOL)
    }
}

/// Twice the signed area of the triangle `(o, a, b)`; positive for a
/// counter-clockwise turn.
#[inline]
pub fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Smallest disk enclosing every point.
///
/// Randomized incremental construction over a deterministically shuffled
/// copy of the input, expected linear time.
pub fn minimum_enclosing_circle(points: &[Point]) -> Result<Disk> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut shuffled = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(MEC_SHUFFLE_SEED);
    shuffled.shuffle(&mut rng);

    let mut circle = Disk::new(shuffled[0], 0.0);
    for i in 1..shuffled.len() {
        if !circle.contains(&shuffled[i]) {
            circle = mec_with_one(&shuffled[..i], shuffled[i]);
        }
    }
    Ok(circle)
}

// Smallest circle enclosing `points` with `p` on its boundary.
fn mec_with_one(points: &[Point], p: Point) -> Disk {
    let mut circle = Disk::new(p, 0.0);
    for (i, q) in points.iter().enumerate() {
        if !circle.contains(q) {
            circle = if circle.radius == 0.0 {
                diameter_circle(&p, q)
            } else {
                mec_with_two(&points[..i], p, *q)
            };
        }
    }
    circle
}

// Smallest circle enclosing `points` with both `p` and `q` on its boundary.
fn mec_with_two(points: &[Point], p: Point, q: Point) -> Disk {
    let base = diameter_circle(&p, &q);
    let mut left: Option<Disk> = None;
    let mut right: Option<Disk> = None;

    for r in points {
        if base.contains(r) {
            continue;
        }
        let side = cross(&p, &q, r);
        let Some(c) = circumcircle(&p, &q, r) else {
            continue;
        };
        let offset = cross(&p, &q, &c.center);
        if side > 0.0 {
            if left.is_none_or(|l| offset > cross(&p, &q, &l.center)) {
                left = Some(c);
            }
        } else if side < 0.0 && right.is_none_or(|rt| offset < cross(&p, &q, &rt.center)) {
            right = Some(c);
        }
    }

    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

pub(crate) fn diameter_circle(a: &Point, b: &Point) -> Disk {
    let center = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
    let radius = center.dist(a).max(center.dist(b));
    Disk::new(center, radius)
}

/// Circle through three points, `None` when they are collinear.
pub fn circumcircle(a: &Point, b: &Point, c: &Point) -> Option<Disk> {
    // Translate to the bounding-box midpoint for precision.
    let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
    let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
    let (ax, ay) = (a.x - ox, a.y - oy);
    let (bx, by) = (b.x - ox, b.y - oy);
    let (cx, cy) = (c.x - ox, c.y - oy);
    let d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
    if d == 0.0 {
        return None;
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let center = Point::new(x, y);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Disk::new(center, radius))
}

/// Convex hull in counter-clockwise order, starting from the lowest-x
/// (then lowest-y) vertex.
///
/// Duplicates are removed and collinear boundary points are dropped, so a
/// fully collinear input yields its two extreme points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }

    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() + 1);
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

/// Number of points covered by at least one disk (boundary inclusive).
pub fn coverage_count(points: &[Point], disks: &[Disk]) -> usize {
    points
        .iter()
        .filter(|p| disks.iter().any(|d| d.contains(p)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<Point> {
        raw.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    // Independent oracle: best enclosing circle over all 1-, 2- and 3-point
    // support candidates.
    fn brute_force_mec(points: &[Point]) -> f64 {
        let encloses = |d: &Disk| points.iter().all(|p| d.contains(p));
        let mut best = f64::INFINITY;
        let n = points.len();
        for i in 0..n {
            let d = Disk::new(points[i], 0.0);
            if encloses(&d) {
                best = best.min(0.0);
            }
            for j in i + 1..n {
                let d = diameter_circle(&points[i], &points[j]);
                if encloses(&d) {
                    best = best.min(d.radius);
                }
                for k in j + 1..n {
                    if let Some(d) = circumcircle(&points[i], &points[j], &points[k]) {
                        if encloses(&d) {
                            best = best.min(d.radius);
                        }
                    }
                }
            }
        }
        best
    }

    fn point_in_hull(hull: &[Point], p: &Point) -> bool {
        match hull.len() {
            0 => false,
            1 => hull[0].dist(p) <= 1e-9,
            2 => {
                let (a, b) = (hull[0], hull[1]);
                cross(&a, &b, p).abs() <= 1e-9 * (1.0 + a.dist(&b))
                    && (p.x - a.x) * (p.x - b.x) <= 1e-9
                    && (p.y - a.y) * (p.y - b.y) <= 1e-9
            }
            n => (0..n).all(|i| cross(&hull[i], &hull[(i + 1) % n], p) >= -1e-9),
        }
    }

    #[test]
    fn mec_single_point() {
        let d = minimum_enclosing_circle(&pts(&[(1.0, 1.0)])).unwrap();
        assert_eq!(d.center, Point::new(1.0, 1.0));
        assert_eq!(d.radius, 0.0);
    }

    #[test]
    fn mec_two_points_is_diameter() {
        let d = minimum_enclosing_circle(&pts(&[(0.0, 0.0), (2.0, 0.0)])).unwrap();
        assert!((d.center.x - 1.0).abs() < 1e-12 && d.center.y.abs() < 1e-12);
        assert!((d.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mec_obtuse_triangle_uses_longest_side() {
        let input = pts(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)]);
        assert!((brute_force_mec(&input) - 0.5).abs() < 1e-12);
        let d = minimum_enclosing_circle(&input).unwrap();
        assert!((d.center.x - 0.5).abs() < 1e-12 && d.center.y.abs() < 1e-12);
        assert!((d.radius - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mec_empty_is_error() {
        assert!(matches!(
            minimum_enclosing_circle(&[]),
            Err(Error::EmptyPointSet)
        ));
    }

    #[test]
    fn mec_handles_duplicates_and_collinear() {
        let d = minimum_enclosing_circle(&pts(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]))
            .unwrap();
        assert!((d.radius - 1.5).abs() < 1e-12);
    }

    #[test]
    fn hull_triangle() {
        let h = convex_hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]));
        assert_eq!(h, pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]));
    }

    #[test]
    fn hull_drops_interior_point() {
        let h = convex_hull(&pts(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
        ]));
        assert_eq!(h.len(), 4);
        assert!(!h.contains(&Point::new(0.5, 0.5)));
    }

    #[test]
    fn hull_collinear_reduces_to_endpoints() {
        let h = convex_hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]));
        assert_eq!(h, pts(&[(0.0, 0.0), (2.0, 0.0)]));
    }

    #[test]
    fn hull_of_empty_and_duplicates() {
        assert!(convex_hull(&[]).is_empty());
        assert_eq!(
            convex_hull(&pts(&[(1.0, 2.0), (1.0, 2.0)])),
            pts(&[(1.0, 2.0)])
        );
    }

    #[test]
    fn coverage_boundary_inclusive() {
        let points = pts(&[(3.0, 0.0), (0.0, 0.0), (10.0, 10.0)]);
        assert_eq!(coverage_count(&points, &[]), 0);
        let disk = Disk::new(Point::new(0.0, 0.0), 3.0);
        assert_eq!(coverage_count(&points, &[disk]), 2);
    }

    #[test]
    fn coverage_matches_direct_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        use rand::Rng;
        let points: Vec<Point> = (0..10)
            .map(|_| Point::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)))
            .collect();
        let disks = [
            Disk::new(Point::new(2.0, 2.0), 3.0),
            Disk::new(Point::new(8.0, 7.0), 2.5),
        ];
        let mut expected = 0;
        for p in &points {
            let mut hit = false;
            for d in &disks {
                let dx = p.x - d.center.x;
                let dy = p.y - d.center.y;
                if (dx * dx + dy * dy).sqrt() <= d.radius {
                    hit = true;
                }
            }
            expected += hit as usize;
        }
        assert_eq!(coverage_count(&points, &disks), expected);
    }

    fn arb_points(max: usize) -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 1..max)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
    }

    proptest! {
        #[test]
        fn mec_matches_brute_force(points in arb_points(50)) {
            let d = minimum_enclosing_circle(&points).unwrap();
            for p in &points {
                prop_assert!(d.contains(p));
            }
            let oracle = brute_force_mec(&points);
            prop_assert!((d.radius - oracle).abs() <= 1e-9 * oracle.max(1.0));
        }

        #[test]
        fn mec_monotone_under_insertion(points in arb_points(30), x in -100.0..100.0f64, y in -100.0..100.0f64) {
            let before = minimum_enclosing_circle(&points).unwrap().radius;
            let mut more = points.clone();
            more.push(Point::new(x, y));
            let after = minimum_enclosing_circle(&more).unwrap().radius;
            prop_assert!(after >= before * (1.0 - 1e-9));
        }

        #[test]
        fn hull_contains_all_and_is_idempotent(points in arb_points(60)) {
            let hull = convex_hull(&points);
            for p in &points {
                prop_assert!(point_in_hull(&hull, p));
            }
            prop_assert_eq!(convex_hull(&hull).len(), hull.len());
            let mut again = convex_hull(&hull);
            let mut h = hull.clone();
            let key = |a: &Point, b: &Point| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
            again.sort_by(key);
            h.sort_by(key);
            prop_assert_eq!(again, h);
        }

        #[test]
        fn coverage_order_invariant(points in arb_points(30), seed in any::<u64>()) {
            let disks: Vec<Disk> = points.iter().take(3).map(|p| Disk::new(*p, 25.0)).collect();
            let base = coverage_count(&points, &disks);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p2 = points.clone();
            p2.shuffle(&mut rng);
            let mut d2 = disks.clone();
            d2.shuffle(&mut rng);
            prop_assert_eq!(coverage_count(&p2, &d2), base);
        }
    }
}
