//! De-blurring of generator output.
//!
//! A generator tends to light up several neighbouring cells for one UAV.
//! The grid is first compressed to a coordinate list of occupied cells, then
//! swept greedily: take the first remaining coordinate, pull out every other
//! coordinate strictly closer than `epsilon`, and replace the group by its
//! mean.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::scenario::{AreaSpec, GridMatrix, MatrixKind};
use crate::{Error, Result};

/// Grid-space coordinates, `x` = column and `y` = row.
pub type CoordinateList = Vec<Point>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanOrder {
    /// Pop coordinates in row-major order.
    RowMajor,
    /// Pop coordinates in a seeded random order.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionConfig {
    /// Merge radius in grid cells.
    pub epsilon: f64,
    /// Binarization threshold for real-valued matrices.
    pub theta: f64,
    pub order: ScanOrder,
}

impl CorrectionConfig {
    pub const DEFAULT_THETA: f64 = 0.5;

    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            theta: Self::DEFAULT_THETA,
            order: ScanOrder::RowMajor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Config(format!(
                "theta must be in [0, 1], got {}",
                self.theta
            )));
        }
        Ok(())
    }
}

/// Occupied cells in row-major order. `Int` matrices count any cell `>= 1`;
/// `Real` matrices count cells `>= theta`.
pub fn sparse_to_coords(matrix: &GridMatrix, theta: f64) -> CoordinateList {
    let threshold = match matrix.kind() {
        MatrixKind::Int => 1.0,
        MatrixKind::Real => theta,
    };
    let mut out = Vec::new();
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            let v = matrix.get(i, j);
            if v > 0.0 && v >= threshold {
                out.push(Point::new(j as f64, i as f64));
            }
        }
    }
    out
}

/// Greedy epsilon-merge in input order.
pub fn correct(coords: &[Point], epsilon: f64) -> CoordinateList {
    let mut remaining: Vec<Point> = coords.to_vec();
    let mut merged = Vec::new();
    let eps2 = epsilon * epsilon;
    let mut start = 0;
    while start < remaining.len() {
        let pivot = remaining[start];
        start += 1;
        let (mut sx, mut sy, mut m) = (pivot.x, pivot.y, 1usize);
        // Compact survivors in place to keep their relative order.
        let mut write = start;
        for read in start..remaining.len() {
            let q = remaining[read];
            if q.dist2(&pivot) < eps2 {
                sx += q.x;
                sy += q.y;
                m += 1;
            } else {
                remaining[write] = q;
                write += 1;
            }
        }
        remaining.truncate(write);
        merged.push(Point::new(sx / m as f64, sy / m as f64));
    }
    merged
}

/// [`correct`] honouring the configured scan order.
pub fn correct_with(coords: &[Point], config: &CorrectionConfig) -> Result<CoordinateList> {
    config.validate()?;
    Ok(match config.order {
        ScanOrder::RowMajor => correct(coords, config.epsilon),
        ScanOrder::Shuffled(seed) => {
            let mut shuffled = coords.to_vec();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            correct(&shuffled, config.epsilon)
        }
    })
}

/// Grid coordinates to area coordinates at the cell centre.
pub fn coords_to_centers(coords: &[Point], area: &AreaSpec) -> Vec<Point> {
    coords.iter().map(|c| area.cell_center(c.y, c.x)).collect()
}
