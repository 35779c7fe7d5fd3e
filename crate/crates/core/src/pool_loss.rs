//! Multilayer sum-pooling loss between a template UAV grid `K` and a
//! generated grid `Y`.
//!
//! At each filter size `f` in the schedule both grids are sum-pooled with an
//! `f x f` window, stride 1 and zero padding that keeps the input shape
//! (`floor((f-1)/2)` cells before, `ceil((f-1)/2)` after, on each axis). The
//! level loss is the summed squared difference of the pooled grids and the
//! total is the sum over levels. Level `f = 1` is the plain squared distance;
//! the wider levels reward a near miss over a far one.

use serde::{Deserialize, Serialize};

use crate::scenario::GridMatrix;
use crate::{Error, Result};

pub const MAX_FILTER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolLossConfig {
    pub filters: Vec<usize>,
}

impl PoolLossConfig {
    /// `1, 2, 4, ...` up to `min(64, grid_n)`.
    pub fn for_grid(grid_n: usize) -> Self {
        let cap = MAX_FILTER.min(grid_n.max(1));
        let filters = std::iter::successors(Some(1usize), |f| Some(f * 2))
            .take_while(|&f| f <= cap)
            .collect();
        Self { filters }
    }

    pub fn validate(&self, grid_n: usize) -> Result<()> {
        let cap = MAX_FILTER.min(grid_n);
        if self.filters.is_empty() {
            return Err(Error::Config("empty filter schedule".into()));
        }
        for w in self.filters.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(format!(
                    "filter schedule must be strictly increasing: {:?}",
                    self.filters
                )));
            }
        }
        for &f in &self.filters {
            if !f.is_power_of_two() || f > cap {
                return Err(Error::Config(format!(
                    "filter {f} must be a power of two no larger than {cap}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelLoss {
    pub filter: usize,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolLossResult {
    pub per_level: Vec<LevelLoss>,
    pub total: f64,
}

/// Same-shape `f x f` window sums, computed from a summed-area table.
pub fn sum_pool(matrix: &GridMatrix, f: usize) -> Result<GridMatrix> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    if f == 0 || f > rows.min(cols) {
        return Err(Error::Config(format!(
            "filter size {f} outside 1..={}",
            rows.min(cols)
        )));
    }
    let before = (f - 1) / 2;

    // table[(i, j)] = sum of matrix[..i, ..j]
    let stride = cols + 1;
    let mut table = vec![0.0; (rows + 1) * stride];
    for i in 0..rows {
        let mut row_sum = 0.0;
        for j in 0..cols {
            row_sum += matrix.get(i, j);
            table[(i + 1) * stride + j + 1] = table[i * stride + j + 1] + row_sum;
        }
    }

    let span = |k: usize, len: usize| {
        let lo = k.saturating_sub(before);
        let hi = (k + f - before).min(len);
        (lo, hi)
    };
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let (r0, r1) = span(i, rows);
        for j in 0..cols {
            let (c0, c1) = span(j, cols);
            let s = table[r1 * stride + c1] - table[r0 * stride + c1] - table[r1 * stride + c0]
                + table[r0 * stride + c0];
            // Summed-area differences of reals can dip a hair below zero.
            out.push(s.max(0.0));
        }
    }
    GridMatrix::from_vec(rows, cols, matrix.kind(), out)
}

pub fn pool_loss(
    k: &GridMatrix,
    y: &GridMatrix,
    config: &PoolLossConfig,
) -> Result<PoolLossResult> {
    if k.rows() != y.rows() || k.cols() != y.cols() {
        return Err(Error::Shape(format!(
            "K is {}x{} but Y is {}x{}",
            k.rows(),
            k.cols(),
            y.rows(),
            y.cols()
        )));
    }
    config.validate(k.rows().min(k.cols()))?;
    // Pooling a Real matrix keeps Real; an Int one stays exact in f64.
    let (k, y) = if k.kind() == y.kind() {
        (k.clone(), y.clone())
    } else {
        (k.to_real(), y.to_real())
    };

    let mut per_level = Vec::with_capacity(config.filters.len());
    let mut total = 0.0;
    for &f in &config.filters {
        let pk = sum_pool(&k, f)?;
        let py = sum_pool(&y, f)?;
        let loss: f64 = pk
            .data()
            .iter()
            .zip(py.data())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        total += loss;
        per_level.push(LevelLoss { filter: f, loss });
    }
    Ok(PoolLossResult { per_level, total })
}

/// Convenience wrapper using [`PoolLossConfig::for_grid`].
pub fn pool_loss_default(k: &GridMatrix, y: &GridMatrix) -> Result<PoolLossResult> {
    pool_loss(k, y, &PoolLossConfig::for_grid(k.rows().min(k.cols())))
}
