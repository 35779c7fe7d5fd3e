//! Benchmark grid over coverage ratios and UE counts.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::correction::CorrectionConfig;
use crate::pipeline::{case_file, deploy, evaluate, evaluate_deployment, CoverageReport, Manifest};
use crate::scenario::{
    generate_scenario, read_points, AreaSpec, CoverageSpec, ScenarioParams, UEScenario,
};
use crate::solvers::{
    solve_exact, solve_kmeans, solve_spiral, Algorithm, PlacementSolution, SolveStatus,
    SolverConfig,
};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "algorithm,R,p,epsilon,samples,mean_time_s,sd_time_s,mean_coverage_pct,mean_uavs,sd_uavs,mean_blur_factor";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    #[serde(rename = "R")]
    pub ratios: Vec<f64>,
    pub ue_counts: Vec<usize>,
    /// Correction radius per ratio, in cells of a `grid_n` grid.
    pub epsilons: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub solvers: Vec<Algorithm>,
    pub side: f64,
    pub grid_n: usize,
    pub scenario: ScenarioParams,
    pub solver: SolverConfig,
    pub theta: f64,
    /// Dataset directory with `case_<k>.Yhat.gmx` predictions to score as
    /// the `proposed` algorithm.
    pub predictions: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ratios: vec![2.0, 4.0, 6.0],
            ue_counts: vec![400, 1000],
            epsilons: vec![160.0, 60.0, 40.0],
            samples: 50,
            seed: 2022,
            solvers: vec![Algorithm::Exact, Algorithm::Spiral, Algorithm::Kmeans],
            side: 1000.0,
            grid_n: AreaSpec::DEFAULT_GRID,
            scenario: ScenarioParams::default(),
            solver: SolverConfig {
                time_budget_s: 60.0,
                node_budget: Some(200_000),
                ..SolverConfig::default()
            },
            theta: CorrectionConfig::DEFAULT_THETA,
            predictions: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.ratios.is_empty() || self.ratios.iter().any(|r| r.is_nan() || *r <= 0.0) {
            return bad(format!("R values must be positive: {:?}", self.ratios));
        }
        if self.ue_counts.is_empty() || self.ue_counts.contains(&0) {
            return bad(format!("UE counts must be positive: {:?}", self.ue_counts));
        }
        if self.epsilons.len() != self.ratios.len() {
            return bad(format!(
                "{} epsilon values for {} R values",
                self.epsilons.len(),
                self.ratios.len()
            ));
        }
        if self.epsilons.iter().any(|e| e.is_nan() || *e <= 0.0) {
            return bad(format!(
                "epsilon values must be positive: {:?}",
                self.epsilons
            ));
        }
        if self.samples == 0 {
            return bad("samples must be >= 1".into());
        }
        if self.solvers.is_empty() {
            return bad("no solvers enabled".into());
        }
        AreaSpec::new(self.side, self.grid_n)?;
        self.scenario.validate()?;
        self.solver.validate()?;
        if !(0.0..=1.0).contains(&self.theta) {
            return bad(format!("theta must be in [0, 1], got {}", self.theta));
        }
        Ok(())
    }

    /// Seed of sample `sample` in cell `(ratio_idx, p)`.
    pub fn case_seed(&self, ratio_idx: usize, p: usize, sample: usize) -> u64 {
        let mut h = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        for v in [ratio_idx as u64, p as u64, sample as u64] {
            h = splitmix64(h ^ v);
        }
        h
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    #[serde(rename = "R")]
    pub ratio: f64,
    pub p: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub mean_time_s: f64,
    pub sd_time_s: f64,
    pub mean_coverage_pct: f64,
    pub mean_uavs: f64,
    pub sd_uavs: f64,
    pub mean_blur_factor: Option<f64>,
}

/// Exact vs spiral counts restricted to cases where exact finished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedCounts {
    #[serde(rename = "R")]
    pub ratio: f64,
    pub p: usize,
    pub cases: usize,
    pub exact_mean_uavs: f64,
    pub spiral_mean_uavs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub algorithm: Algorithm,
    #[serde(rename = "R")]
    pub ratio: f64,
    pub p: usize,
    pub sample: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub clock: String,
    pub host: String,
}

impl Environment {
    fn detect() -> Self {
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self {
            clock: "std::time::Instant (monotonic)".into(),
            host: format!(
                "{}-{}, {threads} hardware threads",
                std::env::consts::OS,
                std::env::consts::ARCH
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    pub paired: Vec<PairedCounts>,
    pub failures: Vec<CaseFailure>,
    pub environment: Environment,
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

// Sample standard deviation; zero for a single observation.
fn stddev(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

#[derive(Default)]
struct Samples {
    times: Vec<f64>,
    coverage: Vec<f64>,
    uavs: Vec<f64>,
    blur: Vec<f64>,
}

impl Samples {
    fn push(&mut self, r: &CoverageReport) {
        self.times.push(r.wall_time_s);
        self.coverage.push(r.coverage_pct);
        self.uavs.push(r.uav_count as f64);
        if let Some(y) = r.blur_y_count {
            if r.uav_count > 0 {
                self.blur.push(y as f64 / r.uav_count as f64);
            }
        }
    }

    fn row(&self, algorithm: Algorithm, ratio: f64, p: usize, epsilon: f64) -> Option<BenchRow> {
        if self.times.is_empty() {
            return None;
        }
        Some(BenchRow {
            algorithm,
            ratio,
            p,
            epsilon,
            samples: self.times.len(),
            mean_time_s: mean(&self.times),
            sd_time_s: stddev(&self.times),
            mean_coverage_pct: mean(&self.coverage),
            mean_uavs: mean(&self.uavs),
            sd_uavs: stddev(&self.uavs),
            mean_blur_factor: (algorithm == Algorithm::Proposed && !self.blur.is_empty())
                .then(|| mean(&self.blur)),
        })
    }
}

fn run_solver(
    alg: Algorithm,
    points: &[crate::Point],
    radius: f64,
    cfg: &SolverConfig,
) -> Result<PlacementSolution> {
    match alg {
        Algorithm::Exact => solve_exact(points, radius, cfg),
        Algorithm::Spiral => solve_spiral(points, radius),
        Algorithm::Kmeans => solve_kmeans(points, radius, cfg),
        Algorithm::Proposed => Err(Error::Config("proposed runs from predictions".into())),
    }
}

struct PredictionCase {
    ratio: f64,
    p: usize,
    case: usize,
    scenario: UEScenario,
    y_raw: crate::scenario::GridMatrix,
}

fn load_predictions(
    config: &BenchConfig,
    failures: &mut Vec<CaseFailure>,
) -> Result<Vec<PredictionCase>> {
    let Some(dir) = &config.predictions else {
        return Ok(Vec::new());
    };
    let manifest = Manifest::read(dir)?;
    let loaded = crate::pipeline::import_predictions(dir)?;
    for e in &loaded.errors {
        let row = manifest.rows.iter().find(|r| r.case == e.case);
        failures.push(CaseFailure {
            algorithm: Algorithm::Proposed,
            ratio: row.map_or(f64::NAN, |r| r.ratio),
            p: row.map_or(0, |r| r.p),
            sample: e.case,
            reason: e.message.clone(),
        });
    }
    let mut out = Vec::new();
    for (case, y_raw) in loaded.cases {
        let Some(row) = manifest.rows.iter().find(|r| r.case == case) else {
            continue;
        };
        let (points, side) = read_points(case_file(dir, case, "pts"))?;
        out.push(PredictionCase {
            ratio: row.ratio,
            p: row.p,
            case,
            scenario: UEScenario {
                points,
                seed: row.seed,
                params: ScenarioParams::with_count(row.p),
                area: AreaSpec::new(side, y_raw.rows())?,
            },
            y_raw,
        });
    }
    Ok(out)
}

/// Runs every enabled solver on `samples` scenarios per `(R, p)` cell.
///
/// The first scenario of each cell is solved once untimed as a warm-up.
/// Exact solves that exhaust their budget are left out of the aggregates
/// and listed under `failures`.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let area = AreaSpec::new(config.side, config.grid_n)?;
    let mut rows = Vec::new();
    let mut paired = Vec::new();
    let mut failures = Vec::new();
    let predictions = load_predictions(config, &mut failures)?;

    for (ri, (&ratio, &epsilon)) in config.ratios.iter().zip(&config.epsilons).enumerate() {
        let coverage = CoverageSpec::new(&area, ratio)?;
        for &p in &config.ue_counts {
            let params = ScenarioParams {
                count: p,
                ..config.scenario.clone()
            };
            let scenarios: Vec<UEScenario> = (0..config.samples)
                .map(|s| generate_scenario(&area, &params, config.case_seed(ri, p, s)))
                .collect::<Result<_>>()?;

            let mut exact_counts: Vec<Option<usize>> = vec![None; scenarios.len()];
            let mut spiral_counts: Vec<Option<usize>> = vec![None; scenarios.len()];
            for &alg in config.solvers.iter().filter(|a| **a != Algorithm::Proposed) {
                run_solver(alg, &scenarios[0].points, coverage.radius, &config.solver)?;
                let mut samples = Samples::default();
                for (s, scenario) in scenarios.iter().enumerate() {
                    let solution =
                        run_solver(alg, &scenario.points, coverage.radius, &config.solver)?;
                    if solution.status == SolveStatus::BudgetExceeded {
                        failures.push(CaseFailure {
                            algorithm: alg,
                            ratio,
                            p,
                            sample: s,
                            reason: format!(
                                "budget exceeded; best known {} UAVs",
                                solution.uav_count()
                            ),
                        });
                        continue;
                    }
                    match alg {
                        Algorithm::Exact => exact_counts[s] = Some(solution.uav_count()),
                        Algorithm::Spiral => spiral_counts[s] = Some(solution.uav_count()),
                        _ => {}
                    }
                    samples.push(&evaluate(&solution, scenario));
                }
                rows.extend(samples.row(alg, ratio, p, epsilon));
            }

            let both: Vec<(usize, usize)> = exact_counts
                .iter()
                .zip(&spiral_counts)
                .filter_map(|(e, s)| Some(((*e)?, (*s)?)))
                .collect();
            if !both.is_empty() {
                let n = both.len() as f64;
                paired.push(PairedCounts {
                    ratio,
                    p,
                    cases: both.len(),
                    exact_mean_uavs: both.iter().map(|b| b.0 as f64).sum::<f64>() / n,
                    spiral_mean_uavs: both.iter().map(|b| b.1 as f64).sum::<f64>() / n,
                });
            }

            let cell_preds: Vec<&PredictionCase> = predictions
                .iter()
                .filter(|c| c.ratio == ratio && c.p == p)
                .collect();
            if config.solvers.contains(&Algorithm::Proposed) && !cell_preds.is_empty() {
                let mut samples = Samples::default();
                let mut warm = true;
                for case in cell_preds {
                    let pred_area = case.scenario.area;
                    let cov = CoverageSpec::new(&pred_area, ratio)?;
                    // epsilon is given on the config grid; rescale to the prediction grid.
                    let corr = CorrectionConfig {
                        theta: config.theta,
                        ..CorrectionConfig::new(
                            epsilon * pred_area.grid_n as f64 / config.grid_n as f64,
                        )
                    };
                    if warm {
                        deploy(&case.y_raw, &pred_area, &cov, &corr)?;
                        warm = false;
                    }
                    match deploy(&case.y_raw, &pred_area, &cov, &corr) {
                        Ok(d) => samples.push(&evaluate_deployment(&d, &case.scenario)),
                        Err(e) => failures.push(CaseFailure {
                            algorithm: Algorithm::Proposed,
                            ratio,
                            p,
                            sample: case.case,
                            reason: e.to_string(),
                        }),
                    }
                }
                rows.extend(samples.row(Algorithm::Proposed, ratio, p, epsilon));
            }
        }
    }

    Ok(BenchReport {
        config: config.clone(),
        rows,
        paired,
        failures,
        environment: Environment::detect(),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|b| format!("{b:.4}")).unwrap_or_default()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.9},{:.9},{:.4},{:.4},{:.4},{}",
            r.algorithm,
            r.ratio,
            r.p,
            r.epsilon,
            r.samples,
            r.mean_time_s,
            r.sd_time_s,
            r.mean_coverage_pct,
            r.mean_uavs,
            r.sd_uavs,
            fmt_opt(r.mean_blur_factor)
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRow>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: "bench csv".into(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => return Err(err(1, "unexpected CSV header".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 11 {
            return Err(err(
                idx + 1,
                format!("expected 11 fields, found {}", f.len()),
            ));
        }
        let num = |i: usize| -> Result<f64> {
            f[i].parse()
                .map_err(|_| err(idx + 1, format!("bad number {:?}", f[i])))
        };
        rows.push(BenchRow {
            algorithm: f[0].parse()?,
            ratio: num(1)?,
            p: num(2)? as usize,
            epsilon: num(3)?,
            samples: num(4)? as usize,
            mean_time_s: num(5)?,
            sd_time_s: num(6)?,
            mean_coverage_pct: num(7)?,
            mean_uavs: num(8)?,
            sd_uavs: num(9)?,
            mean_blur_factor: if f[10].is_empty() {
                None
            } else {
                Some(num(10)?)
            },
        });
    }
    Ok(rows)
}

/// Fixed-width table grouped like the CSV.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<9} {:>4} {:>6} {:>7} {:>7} {:>12} {:>12} {:>10} {:>8} {:>7} {:>6}",
        "algorithm",
        "R",
        "p",
        "eps",
        "samples",
        "time_s",
        "sd_time_s",
        "coverage%",
        "uavs",
        "sd",
        "blur"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<9} {:>4} {:>6} {:>7} {:>7} {:>12.6} {:>12.6} {:>10.2} {:>8.3} {:>7.3} {:>6}",
            r.algorithm.as_str(),
            r.ratio,
            r.p,
            r.epsilon,
            r.samples,
            r.mean_time_s,
            r.sd_time_s,
            r.mean_coverage_pct,
            r.mean_uavs,
            r.sd_uavs,
            r.mean_blur_factor
                .map(|b| format!("{b:.2}"))
                .unwrap_or_else(|| "-".into())
        );
    }
    out
}
