//! Exhaustive minimum-cover oracle for tiny instances.
//!
//! Kept deliberately separate from the exact solver: its own candidate
//! construction, plain bitmask rows, no bounds. Subsets of candidates are
//! tried in ascending size; within one size the search only requires that
//! the lowest uncovered point be covered by the next pick, which skips
//! permutations but never a covering subset.

use crate::geometry::Point;
use crate::{Error, Result};

pub const ORACLE_MAX_POINTS: usize = 14;

pub fn brute_force_min_cover(points: &[Point], radius: f64) -> Result<usize> {
    if points.len() > ORACLE_MAX_POINTS {
        return Err(Error::TooManyPoints {
            got: points.len(),
            max: ORACLE_MAX_POINTS,
        });
    }
    super::check_radius(radius)?;
    let n = points.len();
    if n == 0 {
        return Ok(0);
    }

    let mut centers: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (ax, ay) = (points[i].x, points[i].y);
            let (bx, by) = (points[j].x, points[j].y);
            let d2 = (bx - ax).powi(2) + (by - ay).powi(2);
            if d2 == 0.0 || d2 > 4.0 * radius * radius * (1.0 + 1e-9) {
                continue;
            }
            let d = d2.sqrt();
            let h = (radius * radius - d2 / 4.0).max(0.0).sqrt();
            let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
            let (nx, ny) = (-(by - ay) / d * h, (bx - ax) / d * h);
            centers.push((mx + nx, my + ny));
            centers.push((mx - nx, my - ny));
        }
    }

    let limit = radius * (1.0 + 1e-9);
    let mut masks: Vec<u32> = centers
        .iter()
        .map(|&(cx, cy)| {
            points.iter().enumerate().fold(0u32, |m, (i, p)| {
                if ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt() <= limit {
                    m | 1 << i
                } else {
                    m
                }
            })
        })
        .collect();
    masks.sort_unstable();
    masks.dedup();

    let full = (1u32 << n) - 1;
    for size in 1..=n {
        if search(&masks, 0, full, size) {
            return Ok(size);
        }
    }
    unreachable!("every point is a candidate center, so n disks always suffice")
}

fn search(masks: &[u32], covered: u32, full: u32, picks_left: usize) -> bool {
    if covered == full {
        return true;
    }
    if picks_left == 0 {
        return false;
    }
    let lowest = (!covered & full).trailing_zeros();
    masks
        .iter()
        .filter(|&&m| m >> lowest & 1 == 1)
        .any(|&m| search(masks, covered | m, full, picks_left - 1))
}
