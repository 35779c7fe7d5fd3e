//! Coverage planning for UAV-mounted base stations.
//!
//! The crate covers the whole placement workflow on a square service area:
//!
//! * [`scenario`] generates clustered user snapshots and converts them to and
//!   from the `n x n` occupancy grids exchanged with the trainer.
//! * [`solvers`] holds the reference disk-cover solvers (exact, spiral,
//!   k-means) and an exhaustive oracle for small instances.
//! * [`pool_loss`] is the multilayer sum-pooling loss between a template and
//!   a generated UAV grid.
//! * [`correction`] collapses blurred clusters of predicted UAV cells.
//! * [`pipeline`] chains thresholding, correction and scoring, and handles
//!   dataset export / prediction import.
//! * [`bench`] runs the benchmark grid and renders CSV/JSON reports.

pub mod bench;
pub mod cli;
pub mod correction;
mod error;
pub mod geometry;
pub mod pipeline;
pub mod pool_loss;
pub mod scenario;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{Disk, Point};
