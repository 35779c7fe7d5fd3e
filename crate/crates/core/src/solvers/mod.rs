//! Reference solvers for the geometric disk-cover problem: cover every UE
//! with the fewest radius-`r` disks.

mod candidates;
mod exact;
mod kmeans;
pub mod oracle;
mod spiral;

pub use candidates::candidate_centers;
pub use exact::solve_exact;
pub use kmeans::solve_kmeans;
pub use oracle::brute_force_min_cover;
pub use spiral::solve_spiral;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::geometry::{coverage_count, Disk, Point};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    Spiral,
    Kmeans,
    Proposed,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Spiral => "spiral",
            Algorithm::Kmeans => "kmeans",
            Algorithm::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "core-set" | "coreset" => Ok(Algorithm::Exact),
            "spiral" => Ok(Algorithm::Spiral),
            "kmeans" | "k-means" => Ok(Algorithm::Kmeans),
            "proposed" => Ok(Algorithm::Proposed),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// The solver ran to completion; for `exact` the count is optimal.
    Complete,
    /// The exact solver ran out of budget; the centers are the best cover
    /// found so far and the count is only an upper bound.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSolution {
    pub centers: Vec<Point>,
    pub radius: f64,
    pub algorithm: Algorithm,
    pub wall_time_s: f64,
    /// UEs covered, when the solver knows them (deployment does not).
    pub covered_count: Option<usize>,
    pub status: SolveStatus,
}

impl PlacementSolution {
    pub fn uav_count(&self) -> usize {
        self.centers.len()
    }

    pub fn disks(&self) -> Vec<Disk> {
        self.centers
            .iter()
            .map(|c| Disk::new(*c, self.radius))
            .collect()
    }

    pub fn is_optimal(&self) -> bool {
        self.algorithm == Algorithm::Exact && self.status == SolveStatus::Complete
    }

    fn finish(
        points: &[Point],
        centers: Vec<Point>,
        radius: f64,
        algorithm: Algorithm,
        started: Instant,
        status: SolveStatus,
    ) -> Self {
        let wall_time_s = started.elapsed().as_secs_f64();
        let disks: Vec<Disk> = centers.iter().map(|c| Disk::new(*c, radius)).collect();
        Self {
            covered_count: Some(coverage_count(points, &disks)),
            centers,
            radius,
            algorithm,
            wall_time_s,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Wall-clock cap for the exact solver.
    pub time_budget_s: f64,
    /// Cap on branch-and-bound node expansions for the exact solver.
    /// Unlike the time budget it makes budget exhaustion reproducible.
    pub node_budget: Option<u64>,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            time_budget_s: 60.0,
            node_budget: None,
            kmeans_restarts: 5,
            kmeans_max_iter: 100,
            rng_seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.time_budget_s.is_nan() || self.time_budget_s <= 0.0 {
            return Err(Error::Config("time budget must be positive".into()));
        }
        if self.node_budget == Some(0) {
            return Err(Error::Config("node budget must be positive".into()));
        }
        if self.kmeans_restarts == 0 {
            return Err(Error::Config("kmeans_restarts must be >= 1".into()));
        }
        if self.kmeans_max_iter == 0 {
            return Err(Error::Config("kmeans_max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "coverage radius must be positive, got {radius}"
        )))
    }
}

pub(crate) fn check_points(points: &[Point]) -> Result<()> {
    match points.iter().find(|p| !p.is_finite()) {
        Some(p) => Err(Error::Config(format!(
            "non-finite point ({}, {})",
            p.x, p.y
        ))),
        None => Ok(()),
    }
}

/// Shared node/time allowance for one exact solve.
#[derive(Debug)]
pub(crate) struct Budget {
    nodes_left: Option<u64>,
    deadline: Instant,
}

impl Budget {
    pub(crate) fn new(config: &SolverConfig, started: Instant) -> Self {
        let secs = config.time_budget_s.min(1e9);
        Self {
            nodes_left: config.node_budget,
            deadline: started + Duration::from_secs_f64(secs),
        }
    }

    /// Charges one node; `false` once the budget is gone.
    pub(crate) fn charge(&mut self) -> bool {
        if let Some(n) = self.nodes_left.as_mut() {
            if *n == 0 {
                return false;
            }
            *n -= 1;
        }
        Instant::now() < self.deadline
    }
}
