use crate::geometry::{Point, REL_TOL};

/// Finite candidate set for radius-`r` disk centers: every input point plus
/// both intersection points of the radius-`r` circles around each pair at
/// distance at most `2r`.
///
/// Any disk covering a subset can be slid until its center is one of these
/// without uncovering anything, so an optimal cover over candidates exists.
pub fn candidate_centers(points: &[Point], radius: f64) -> Vec<Point> {
    let mut out = points.to_vec();
    let reach = 2.0 * radius * (1.0 + REL_TOL);
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = a.dist(b);
            if d == 0.0 || d > reach {
                continue;
            }
            let half = d / 2.0;
            let h = (radius * radius - half * half).max(0.0).sqrt();
            let mid = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
            let (ux, uy) = ((b.y - a.y) / d, (a.x - b.x) / d);
            if h == 0.0 {
                out.push(mid);
            } else {
                out.push(Point::new(mid.x + ux * h, mid.y + uy * h));
                out.push(Point::new(mid.x - ux * h, mid.y - uy * h));
            }
        }
    }
    out
}
