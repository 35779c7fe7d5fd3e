//! Deployment-phase composition and the dataset exchange with the trainer.
//!
//! Dataset directory layout:
//!
//! ```text
//! manifest.tsv            case seed p R side grid_n template uav_count optimal
//! case_<k>.X.gmx          UE counts per cell
//! case_<k>.K.gmx          template UAV occupancy (one unit per UAV)
//! case_<k>.pts            UE coordinates, for scoring deployments
//! case_<k>.Yhat.gmx       raw generator output, written by the trainer
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::correction::{coords_to_centers, correct_with, sparse_to_coords, CorrectionConfig};
use crate::geometry::coverage_count;
use crate::scenario::{
    discretize, discretize_points, read_matrix, write_matrix, write_points, AreaSpec, CoverageSpec,
    GridMatrix, UEScenario,
};
use crate::solvers::{
    solve_exact, solve_spiral, Algorithm, PlacementSolution, SolveStatus, SolverConfig,
};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const MANIFEST_HEADER: &str = "case\tseed\tp\tR\tside\tgrid_n\ttemplate\tuav_count\toptimal";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub solution: PlacementSolution,
    /// Occupied cells before correction (`y`).
    pub blur_y_count: usize,
    pub epsilon: f64,
}

impl Deployment {
    /// `y / k`, the pre-correction over-count.
    pub fn blur_factor(&self) -> Option<f64> {
        let k = self.solution.uav_count();
        (k > 0).then(|| self.blur_y_count as f64 / k as f64)
    }
}

/// Threshold, correct and map a raw generator grid to UAV centers.
///
/// Only the algorithmic composition is timed.
pub fn deploy(
    y_raw: &GridMatrix,
    area: &AreaSpec,
    coverage: &CoverageSpec,
    corr: &CorrectionConfig,
) -> Result<Deployment> {
    if !y_raw.is_square() || y_raw.rows() != area.grid_n {
        return Err(Error::Shape(format!(
            "prediction is {}x{} but the area grid is {n}x{n}",
            y_raw.rows(),
            y_raw.cols(),
            n = area.grid_n
        )));
    }
    corr.validate()?;
    let started = Instant::now();
    let coords = sparse_to_coords(y_raw, corr.theta);
    let merged = correct_with(&coords, corr)?;
    let centers = coords_to_centers(&merged, area);
    let wall_time_s = started.elapsed().as_secs_f64();
    Ok(Deployment {
        solution: PlacementSolution {
            centers,
            radius: coverage.radius,
            algorithm: Algorithm::Proposed,
            wall_time_s,
            covered_count: None,
            status: SolveStatus::Complete,
        },
        blur_y_count: coords.len(),
        epsilon: corr.epsilon,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub algorithm: Algorithm,
    pub coverage_pct: f64,
    pub uav_count: usize,
    pub wall_time_s: f64,
    pub p: usize,
    #[serde(rename = "R")]
    pub ratio: f64,
    pub epsilon: Option<f64>,
    pub blur_y_count: Option<usize>,
    /// `p == 0`; coverage is reported as 100 by convention.
    pub vacuous: bool,
    pub status: SolveStatus,
}

pub fn evaluate(solution: &PlacementSolution, scenario: &UEScenario) -> CoverageReport {
    let p = scenario.points.len();
    let covered = coverage_count(&scenario.points, &solution.disks());
    let coverage_pct = if p == 0 {
        100.0
    } else {
        100.0 * covered as f64 / p as f64
    };
    CoverageReport {
        algorithm: solution.algorithm,
        coverage_pct,
        uav_count: solution.uav_count(),
        wall_time_s: solution.wall_time_s,
        p,
        ratio: scenario.area.side / solution.radius,
        epsilon: None,
        blur_y_count: None,
        vacuous: p == 0,
        status: solution.status,
    }
}

pub fn evaluate_deployment(deployment: &Deployment, scenario: &UEScenario) -> CoverageReport {
    CoverageReport {
        epsilon: Some(deployment.epsilon),
        blur_y_count: Some(deployment.blur_y_count),
        ..evaluate(&deployment.solution, scenario)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub case: usize,
    pub seed: u64,
    pub p: usize,
    #[serde(rename = "R")]
    pub ratio: f64,
    pub side: f64,
    pub grid_n: usize,
    pub template: Algorithm,
    pub uav_count: usize,
    pub optimal: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(MANIFEST_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.case, r.seed, r.p, r.ratio, r.side, r.grid_n, r.template, r.uav_count, r.optimal
            );
        }
        out
    }

    pub fn parse_tsv(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.to_string(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim_end() == MANIFEST_HEADER => {}
            _ => return Err(err(1, "missing or unexpected manifest header".into())),
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 9 {
                return Err(err(lineno, format!("expected 9 fields, found {}", f.len())));
            }
            let bad = |name: &str| err(lineno, format!("bad {name} field"));
            rows.push(ManifestRow {
                case: f[0].parse().map_err(|_| bad("case"))?,
                seed: f[1].parse().map_err(|_| bad("seed"))?,
                p: f[2].parse().map_err(|_| bad("p"))?,
                ratio: f[3].parse().map_err(|_| bad("R"))?,
                side: f[4].parse().map_err(|_| bad("side"))?,
                grid_n: f[5].parse().map_err(|_| bad("grid_n"))?,
                template: f[6].parse().map_err(|_| bad("template"))?,
                uav_count: f[7].parse().map_err(|_| bad("uav_count"))?,
                optimal: f[8].parse().map_err(|_| bad("optimal"))?,
            });
        }
        Ok(Self { rows })
    }

    pub fn read(dir: impl AsRef<Path>) -> Result<Self> {
        let path = dir.as_ref().join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::parse_tsv(&text, &path.display().to_string())
    }

    pub fn any_budget_exceeded(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.template == Algorithm::Exact && !r.optimal)
    }
}

pub fn case_file(dir: &Path, case: usize, suffix: &str) -> PathBuf {
    dir.join(format!("case_{case}.{suffix}"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportConfig {
    pub ratio: f64,
    pub grid_n: usize,
    /// `Exact` (default) or `Spiral`.
    pub template: Algorithm,
    pub solver: SolverConfig,
}

impl ExportConfig {
    pub fn new(ratio: f64, grid_n: usize) -> Self {
        Self {
            ratio,
            grid_n,
            template: Algorithm::Exact,
            solver: SolverConfig::default(),
        }
    }
}

/// Writes `X`/`K` pairs (plus UE points) for each scenario and the manifest.
///
/// Template centers outside the area are clamped onto its boundary before
/// they are binned into `K`.
pub fn export_dataset(
    scenarios: &[UEScenario],
    config: &ExportConfig,
    out_dir: impl AsRef<Path>,
) -> Result<Manifest> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut manifest = Manifest::default();
    for (case, scenario) in scenarios.iter().enumerate() {
        let area = AreaSpec::new(scenario.area.side, config.grid_n)?;
        let coverage = CoverageSpec::new(&area, config.ratio)?;
        let solution = match config.template {
            Algorithm::Exact => solve_exact(&scenario.points, coverage.radius, &config.solver)?,
            Algorithm::Spiral => solve_spiral(&scenario.points, coverage.radius)?,
            other => {
                return Err(Error::Config(format!(
                    "{other} cannot serve as a template solver"
                )))
            }
        };
        let x = discretize(scenario, &area)?;
        let clamped: Vec<_> = solution.centers.iter().map(|c| area.clamp(c)).collect();
        let k = discretize_points(&clamped, &area)?;

        write_matrix(case_file(out_dir, case, "X.gmx"), &x)?;
        write_matrix(case_file(out_dir, case, "K.gmx"), &k)?;
        write_points(case_file(out_dir, case, "pts"), &scenario.points, area.side)?;
        manifest.rows.push(ManifestRow {
            case,
            seed: scenario.seed,
            p: scenario.points.len(),
            ratio: config.ratio,
            side: area.side,
            grid_n: config.grid_n,
            template: config.template,
            uav_count: solution.uav_count(),
            optimal: solution.is_optimal() || config.template == Algorithm::Spiral,
        });
    }
    let path = out_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_tsv()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseError {
    pub case: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Predictions {
    /// Loaded matrices in ascending case order.
    pub cases: Vec<(usize, GridMatrix)>,
    pub errors: Vec<CaseError>,
}

/// Loads every `case_<k>.Yhat.gmx` in `dir`.
///
/// A bad file is reported in `errors` without stopping the others. When a
/// manifest sits in the same directory, listed cases without a prediction
/// are reported too, and shapes are checked against its `grid_n`.
pub fn import_predictions(dir: impl AsRef<Path>) -> Result<Predictions> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = BTreeMap::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(id) = name
            .strip_prefix("case_")
            .and_then(|s| s.strip_suffix(".Yhat.gmx"))
            .and_then(|s| s.parse::<usize>().ok())
        {
            files.insert(id, entry.path());
        }
    }

    let manifest = if dir.join(MANIFEST_FILE).exists() {
        Some(Manifest::read(dir)?)
    } else {
        None
    };
    let mut out = Predictions::default();
    if let Some(m) = &manifest {
        for row in &m.rows {
            if !files.contains_key(&row.case) {
                out.errors.push(CaseError {
                    case: row.case,
                    message: "missing prediction file".into(),
                });
            }
        }
    }

    for (case, path) in files {
        let expected = manifest
            .as_ref()
            .and_then(|m| m.rows.iter().find(|r| r.case == case))
            .map(|r| r.grid_n);
        let loaded = read_matrix(&path).and_then(|m| {
            if !m.is_square() {
                return Err(Error::Shape(format!(
                    "{}x{} is not square",
                    m.rows(),
                    m.cols()
                )));
            }
            match expected {
                Some(n) if n != m.rows() => Err(Error::Shape(format!(
                    "{}x{} but the manifest says {n}x{n}",
                    m.rows(),
                    m.cols()
                ))),
                _ => Ok(m),
            }
        });
        match loaded {
            Ok(m) => out.cases.push((case, m)),
            Err(e) => out.errors.push(CaseError {
                case,
                message: e.to_string(),
            }),
        }
    }
    out.errors.sort_by_key(|e| e.case);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::scenario::{generate_scenario, MatrixKind, ScenarioParams};

    fn toy_area() -> AreaSpec {
        AreaSpec::new(1000.0, 64).unwrap()
    }

    fn scenario(points: Vec<Point>, area: AreaSpec) -> UEScenario {
        UEScenario {
            points,
            seed: 0,
            params: ScenarioParams::default(),
            area,
        }
    }

    #[test]
    fn zero_prediction_deploys_nothing() {
        let area = toy_area();
        let cov = CoverageSpec::new(&area, 4.0).unwrap();
        let y = GridMatrix::square(64, MatrixKind::Real);
        let d = deploy(&y, &area, &cov, &CorrectionConfig::new(3.0)).unwrap();
        assert_eq!(d.solution.uav_count(), 0);
        assert_eq!(d.blur_factor(), None);
        let s = generate_scenario(&area, &ScenarioParams::with_count(50), 1).unwrap();
        assert_eq!(evaluate(&d.solution, &s).coverage_pct, 0.0);
    }

    #[test]
    fn deploy_rejects_wrong_shape() {
        let area = toy_area();
        let cov = CoverageSpec::new(&area, 4.0).unwrap();
        let y = GridMatrix::square(32, MatrixKind::Real);
        assert!(matches!(
            deploy(&y, &area, &cov, &CorrectionConfig::new(3.0)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn evaluate_counts_and_vacuous_case() {
        let area = AreaSpec::new(10.0, 10).unwrap();
        let pts: Vec<Point> = (0..10).map(|i| Point::new(i as f64, 1.0)).collect();
        let sol = PlacementSolution {
            centers: vec![Point::new(1.0, 1.0), Point::new(8.0, 1.0)],
            radius: 1.0,
            algorithm: Algorithm::Spiral,
            wall_time_s: 0.0,
            covered_count: None,
            status: SolveStatus::Complete,
        };
        // x in {0,1,2} and {7,8,9}
        let r = evaluate(&sol, &scenario(pts, area));
        assert_eq!(r.coverage_pct, 60.0);
        assert_eq!(r.ratio, 10.0);
        let empty = evaluate(&sol, &scenario(Vec::new(), area));
        assert_eq!(empty.coverage_pct, 100.0);
        assert!(empty.vacuous);
    }

    #[test]
    fn manifest_round_trip() {
        let m = Manifest {
            rows: vec![ManifestRow {
                case: 3,
                seed: 99,
                p: 400,
                ratio: 2.0,
                side: 1000.0,
                grid_n: 64,
                template: Algorithm::Exact,
                uav_count: 2,
                optimal: true,
            }],
        };
        let text = m.to_tsv();
        assert!(text.starts_with("case\tseed\tp\tR\t"));
        assert_eq!(Manifest::parse_tsv(&text, "m").unwrap(), m);
        assert!(Manifest::parse_tsv("nope\n", "m").is_err());
    }
}
