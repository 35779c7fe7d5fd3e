//! UE snapshot generation and the grid representation.

mod grid;
pub mod io;

pub use grid::{GridMatrix, MatrixKind};
pub use io::{read_matrix, read_points, write_matrix, write_points};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal};
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::{Error, Result};

/// Square service area `[0, side]^2` split into `grid_n x grid_n` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaSpec {
    pub side: f64,
    pub grid_n: usize,
}

impl AreaSpec {
    pub const DEFAULT_GRID: usize = 256;
    pub const TOY_GRID: usize = 64;

    pub fn new(side: f64, grid_n: usize) -> Result<Self> {
        let area = Self { side, grid_n };
        area.validate()?;
        Ok(area)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.side.is_finite() && self.side > 0.0) {
            return Err(Error::Config(format!(
                "side must be positive, got {}",
                self.side
            )));
        }
        if self.grid_n < 2 {
            return Err(Error::Config(format!(
                "grid_n must be >= 2, got {}",
                self.grid_n
            )));
        }
        Ok(())
    }

    pub fn cell_size(&self) -> f64 {
        self.side / self.grid_n as f64
    }

    /// `(row, col)` of the cell holding `p`; coordinates equal to `side` land in
    /// the last cell.
    pub fn cell_of(&self, p: &Point) -> Result<(usize, usize)> {
        let inside = |v: f64| v.is_finite() && (0.0..=self.side).contains(&v);
        if !inside(p.x) || !inside(p.y) {
            return Err(Error::OutOfBounds {
                x: p.x,
                y: p.y,
                side: self.side,
            });
        }
        let n = self.grid_n;
        let idx = |v: f64| ((v / self.side * n as f64).floor() as usize).min(n - 1);
        Ok((idx(p.y), idx(p.x)))
    }

    /// Centre of cell `(row, col)` in area units; fractional indices allowed.
    pub fn cell_center(&self, row: f64, col: f64) -> Point {
        let c = self.cell_size();
        Point::new((col + 0.5) * c, (row + 0.5) * c)
    }

    pub fn clamp(&self, p: &Point) -> Point {
        Point::new(p.x.clamp(0.0, self.side), p.y.clamp(0.0, self.side))
    }
}

/// Coverage ratio `R = side / r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageSpec {
    pub ratio: f64,
    pub radius: f64,
}

impl CoverageSpec {
    pub fn new(area: &AreaSpec, ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::Config(format!(
                "coverage ratio must be positive, got {ratio}"
            )));
        }
        Ok(Self {
            ratio,
            radius: area.side / ratio,
        })
    }
}

/// Parameters of the clustered UE process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioParams {
    /// Number of UEs `p`.
    pub count: usize,
    pub min_clusters: usize,
    pub max_clusters: usize,
    /// Cluster spread as a fraction of the side length.
    pub sigma_frac: f64,
    /// Fraction of UEs scattered uniformly over the area.
    pub outlier_frac: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            count: 400,
            min_clusters: 3,
            max_clusters: 8,
            sigma_frac: 0.05,
            outlier_frac: 0.05,
        }
    }
}

impl ScenarioParams {
    pub fn with_count(count: usize) -> Self {
        Self {
            count,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_frac.is_finite() && self.sigma_frac > 0.0) {
            return Err(Error::Config(format!(
                "sigma must be positive, got {}",
                self.sigma_frac
            )));
        }
        if !(0.0..=1.0).contains(&self.outlier_frac) {
            return Err(Error::Config(format!(
                "outlier fraction must be in [0, 1], got {}",
                self.outlier_frac
            )));
        }
        if self.min_clusters == 0 || self.min_clusters > self.max_clusters {
            return Err(Error::Config(format!(
                "cluster range [{}, {}] is empty",
                self.min_clusters, self.max_clusters
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UEScenario {
    pub points: Vec<Point>,
    pub seed: u64,
    pub params: ScenarioParams,
    pub area: AreaSpec,
}

impl UEScenario {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Draws a Thomas-cluster snapshot: `U[min, max]` cluster centres placed
/// uniformly, Dirichlet(1) cluster weights, Gaussian offsets resampled until
/// they fall inside the area, and a uniform outlier fraction.
pub fn generate_scenario(
    area: &AreaSpec,
    params: &ScenarioParams,
    seed: u64,
) -> Result<UEScenario> {
    area.validate()?;
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = area.side;
    let p = params.count;

    let k = rng.random_range(params.min_clusters..=params.max_clusters);
    let centers: Vec<Point> = (0..k)
        .map(|_| Point::new(rng.random_range(0.0..=side), rng.random_range(0.0..=side)))
        .collect();
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut cumulative = Vec::with_capacity(k);
    let mut acc = 0.0;
    for w in &raw {
        acc += w / total;
        cumulative.push(acc);
    }

    let outliers = ((params.outlier_frac * p as f64).round() as usize).min(p);
    let sigma = params.sigma_frac * side;
    let offset = Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?;

    let mut points = Vec::with_capacity(p);
    for _ in 0..p - outliers {
        let u: f64 = rng.random();
        let c = cumulative.iter().position(|&c| u < c).unwrap_or(k - 1);
        let point = loop {
            let q = Point::new(
                centers[c].x + offset.sample(&mut rng),
                centers[c].y + offset.sample(&mut rng),
            );
            if (0.0..=side).contains(&q.x) && (0.0..=side).contains(&q.y) {
                break q;
            }
        };
        points.push(point);
    }
    for _ in 0..outliers {
        points.push(Point::new(
            rng.random_range(0.0..=side),
            rng.random_range(0.0..=side),
        ));
    }

    Ok(UEScenario {
        points,
        seed,
        params: params.clone(),
        area: *area,
    })
}

/// Count of points per cell (an `Int` matrix).
pub fn discretize_points(points: &[Point], area: &AreaSpec) -> Result<GridMatrix> {
    let mut m = GridMatrix::square(area.grid_n, MatrixKind::Int);
    for p in points {
        let (i, j) = area.cell_of(p)?;
        m.add(i, j, 1.0);
    }
    Ok(m)
}

pub fn discretize(scenario: &UEScenario, area: &AreaSpec) -> Result<GridMatrix> {
    discretize_points(&scenario.points, area)
}

/// How [`grid_to_points`] turns cell mass into points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointMode {
    /// One point per unit of mass (reals are rounded to the nearest unit).
    PerUnit,
    /// One point per cell whose value is at least the threshold.
    Threshold(f64),
}

/// Places points at cell centres, row-major.
pub fn grid_to_points(matrix: &GridMatrix, area: &AreaSpec, mode: PointMode) -> Vec<Point> {
    let cell = area.side / matrix.cols() as f64;
    let mut out = Vec::new();
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            let v = matrix.get(i, j);
            let copies = match mode {
                PointMode::PerUnit => v.round() as usize,
                PointMode::Threshold(t) => usize::from(v > 0.0 && v >= t),
            };
            let center = Point::new((j as f64 + 0.5) * cell, (i as f64 + 0.5) * cell);
            out.extend(std::iter::repeat_n(center, copies));
        }
    }
    out
}
