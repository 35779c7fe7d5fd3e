//! `uavcov` command line.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 budget exhausted
//! (results are still written).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bench::{self, BenchConfig};
use crate::correction::{
    coords_to_centers, correct_with, sparse_to_coords, CorrectionConfig, ScanOrder,
};
use crate::geometry::Point;
use crate::pipeline::{
    case_file, deploy, evaluate, evaluate_deployment, export_dataset, import_predictions,
    CoverageReport, ExportConfig, Manifest,
};
use crate::pool_loss::{pool_loss, PoolLossConfig};
use crate::scenario::{
    discretize, generate_scenario, read_matrix, read_points, write_matrix, write_points, AreaSpec,
    CoverageSpec, ScenarioParams, UEScenario,
};
use crate::solvers::{
    solve_exact, solve_kmeans, solve_spiral, Algorithm, PlacementSolution, SolveStatus,
    SolverConfig,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "uavcov",
    version,
    about = "UAV coverage planning and benchmarking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a clustered UE snapshot.
    Gen(GenArgs),
    /// Solve one instance with one algorithm.
    Solve(SolveArgs),
    /// Threshold and de-blur a predicted UAV grid.
    Correct(CorrectArgs),
    /// Multilayer sum-pooling loss between two grids.
    Loss(LossArgs),
    /// Export X/K training pairs.
    Dataset(DatasetArgs),
    /// Deploy predicted grids and score their coverage.
    Deploy(DeployArgs),
    /// Run the benchmark grid.
    Bench(BenchArgs),
    /// Render a bench CSV or JSON report as a table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Number of UEs.
    #[arg(long, default_value_t = 400)]
    p: usize,
    /// Side length of the square area in meters.
    #[arg(long, default_value_t = 1000.0)]
    side: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    min_clusters: usize,
    #[arg(long, default_value_t = 8)]
    max_clusters: usize,
    /// Cluster spread as a fraction of the side.
    #[arg(long, default_value_t = 0.05)]
    sigma: f64,
    /// Fraction of uniformly scattered UEs.
    #[arg(long, default_value_t = 0.05)]
    outliers: f64,
}

impl ScenarioArgs {
    fn params(&self) -> ScenarioParams {
        ScenarioParams {
            count: self.p,
            min_clusters: self.min_clusters,
            max_clusters: self.max_clusters,
            sigma_frac: self.sigma,
            outlier_frac: self.outliers,
        }
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = AreaSpec::DEFAULT_GRID)]
    grid: usize,
    /// Output `.pts` file.
    #[arg(long)]
    out: PathBuf,
    /// Also write the discretized UE matrix (`.gmx`).
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Wall-clock budget for the exact solver, seconds.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    /// Node budget for the exact solver.
    #[arg(long)]
    nodes: Option<u64>,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Seed for the k-means restarts.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            time_budget_s: self.budget,
            node_budget: self.nodes,
            kmeans_restarts: self.restarts,
            kmeans_max_iter: self.max_iter,
            rng_seed: self.rng_seed,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    alg: Algorithm,
    /// Coverage ratio R = side / radius.
    #[arg(long = "R")]
    ratio: f64,
    /// UE file; when absent a scenario is generated.
    #[arg(long)]
    points: Option<PathBuf>,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorrectArgs {
    /// Predicted grid (`.gmx`).
    #[arg(long)]
    matrix: PathBuf,
    /// Merge radius in grid cells.
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = CorrectionConfig::DEFAULT_THETA)]
    theta: f64,
    /// Pop coordinates in a seeded random order instead of row-major.
    #[arg(long)]
    shuffle_seed: Option<u64>,
    /// Side length used to map cells to area coordinates.
    #[arg(long)]
    side: Option<f64>,
}

#[derive(Debug, Args)]
struct LossArgs {
    /// Template grid K.
    k: PathBuf,
    /// Generated grid Y.
    y: PathBuf,
    /// Filter sizes; defaults to powers of two up to min(64, n).
    #[arg(long, value_delimiter = ',')]
    filters: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DatasetArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10)]
    cases: usize,
    #[arg(long = "R")]
    ratio: f64,
    #[arg(long, default_value_t = AreaSpec::TOY_GRID)]
    grid: usize,
    #[arg(long, default_value = "exact")]
    template: Algorithm,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct DeployArgs {
    /// Dataset directory (manifest and UE points).
    #[arg(long)]
    dataset: PathBuf,
    /// Directory with `case_<k>.Yhat.gmx`; defaults to the dataset.
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// Merge radius in cells of the prediction grid.
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = CorrectionConfig::DEFAULT_THETA)]
    theta: f64,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long = "R", value_delimiter = ',')]
    ratios: Option<Vec<f64>>,
    #[arg(long = "ue", value_delimiter = ',')]
    ue_counts: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    solvers: Option<Vec<Algorithm>>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    nodes: Option<u64>,
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Bench output, `.json` or `.csv`.
    input: PathBuf,
}

/// Parses `args` (including the program name) and runs the command,
/// writing primary output to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Correct(a) => cmd_correct(a, out),
        Command::Loss(a) => cmd_loss(a, out),
        Command::Dataset(a) => cmd_dataset(a, out),
        Command::Deploy(a) => cmd_deploy(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Report(a) => cmd_report(a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<i32> {
    let area = AreaSpec::new(a.scenario.side, a.grid)?;
    let s = generate_scenario(&area, &a.scenario.params(), a.scenario.seed)?;
    write_points(&a.out, &s.points, area.side)?;
    if let Some(path) = &a.matrix {
        write_matrix(path, &discretize(&s, &area)?)?;
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        p: usize,
        seed: u64,
        side: f64,
        grid_n: usize,
        points: &'a Path,
    }
    emit(
        out,
        &to_json(&Summary {
            p: s.points.len(),
            seed: s.seed,
            side: area.side,
            grid_n: area.grid_n,
            points: &a.out,
        })?,
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SolveOutput {
    #[serde(flatten)]
    report: CoverageReport,
    centers: Vec<Point>,
    radius: f64,
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let scenario = match &a.points {
        Some(path) => {
            let (points, side) = read_points(path)?;
            UEScenario {
                params: ScenarioParams::with_count(points.len()),
                points,
                seed: 0,
                area: AreaSpec::new(side, AreaSpec::DEFAULT_GRID)?,
            }
        }
        None => {
            let area = AreaSpec::new(a.scenario.side, AreaSpec::DEFAULT_GRID)?;
            generate_scenario(&area, &a.scenario.params(), a.scenario.seed)?
        }
    };
    let coverage = CoverageSpec::new(&scenario.area, a.ratio)?;
    let cfg = a.solver.config();
    let solution: PlacementSolution = match a.alg {
        Algorithm::Exact => solve_exact(&scenario.points, coverage.radius, &cfg)?,
        Algorithm::Spiral => solve_spiral(&scenario.points, coverage.radius)?,
        Algorithm::Kmeans => solve_kmeans(&scenario.points, coverage.radius, &cfg)?,
        Algorithm::Proposed => {
            return Err(Error::Config(
                "the proposed approach runs through `deploy` on predicted grids".into(),
            ))
        }
    };
    let text = to_json(&SolveOutput {
        report: evaluate(&solution, &scenario),
        centers: solution.centers.clone(),
        radius: solution.radius,
    })?;
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(match solution.status {
        SolveStatus::Complete => EXIT_OK,
        SolveStatus::BudgetExceeded => EXIT_BUDGET,
    })
}

fn cmd_correct(a: CorrectArgs, out: &mut dyn Write) -> Result<i32> {
    let m = read_matrix(&a.matrix)?;
    let cfg = CorrectionConfig {
        epsilon: a.epsilon,
        theta: a.theta,
        order: a
            .shuffle_seed
            .map_or(ScanOrder::RowMajor, ScanOrder::Shuffled),
    };
    let coords = sparse_to_coords(&m, cfg.theta);
    let merged = correct_with(&coords, &cfg)?;
    let centers = match a.side {
        Some(side) => Some(coords_to_centers(&merged, &AreaSpec::new(side, m.rows())?)),
        None => None,
    };
    #[derive(Serialize)]
    struct Output {
        y_count: usize,
        k_count: usize,
        coords: Vec<Point>,
        #[serde(skip_serializing_if = "Option::is_none")]
        centers: Option<Vec<Point>>,
    }
    emit(
        out,
        &to_json(&Output {
            y_count: coords.len(),
            k_count: merged.len(),
            coords: merged,
            centers,
        })?,
    )?;
    Ok(EXIT_OK)
}

fn cmd_loss(a: LossArgs, out: &mut dyn Write) -> Result<i32> {
    let k = read_matrix(&a.k)?;
    let y = read_matrix(&a.y)?;
    let cfg = match a.filters {
        Some(filters) => PoolLossConfig { filters },
        None => PoolLossConfig::for_grid(k.rows().min(k.cols())),
    };
    let result = pool_loss(&k, &y, &cfg)?;
    if a.json {
        emit(out, &to_json(&result)?)?;
    } else {
        let mut text = String::from("filter\tloss\n");
        for level in &result.per_level {
            text.push_str(&format!("{}\t{}\n", level.filter, level.loss));
        }
        text.push_str(&format!("total\t{}\n", result.total));
        emit(out, &text)?;
    }
    Ok(EXIT_OK)
}

fn cmd_dataset(a: DatasetArgs, out: &mut dyn Write) -> Result<i32> {
    let area = AreaSpec::new(a.scenario.side, a.grid)?;
    let params = a.scenario.params();
    let scenarios: Vec<UEScenario> = (0..a.cases)
        .map(|k| generate_scenario(&area, &params, a.scenario.seed.wrapping_add(k as u64)))
        .collect::<Result<_>>()?;
    let cfg = ExportConfig {
        template: a.template,
        solver: a.solver.config(),
        ..ExportConfig::new(a.ratio, a.grid)
    };
    let manifest = export_dataset(&scenarios, &cfg, &a.out)?;
    emit(out, &manifest.to_tsv())?;
    Ok(if manifest.any_budget_exceeded() {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn cmd_deploy(a: DeployArgs, out: &mut dyn Write) -> Result<i32> {
    let manifest = Manifest::read(&a.dataset)?;
    let pred_dir = a.predictions.as_deref().unwrap_or(&a.dataset);
    let preds = import_predictions(pred_dir)?;
    let mut reports = Vec::new();
    let mut failed = !preds.errors.is_empty();
    for e in &preds.errors {
        eprintln!("case {}: {}", e.case, e.message);
    }
    for (case, y_raw) in &preds.cases {
        let Some(row) = manifest.rows.iter().find(|r| r.case == *case) else {
            eprintln!("case {case}: not listed in the dataset manifest");
            failed = true;
            continue;
        };
        let (points, side) = read_points(case_file(&a.dataset, *case, "pts"))?;
        let area = AreaSpec::new(side, y_raw.rows())?;
        let scenario = UEScenario {
            params: ScenarioParams::with_count(points.len()),
            points,
            seed: row.seed,
            area,
        };
        let coverage = CoverageSpec::new(&area, row.ratio)?;
        let corr = CorrectionConfig {
            theta: a.theta,
            ..CorrectionConfig::new(a.epsilon)
        };
        let d = deploy(y_raw, &area, &coverage, &corr)?;
        #[derive(Serialize)]
        struct CaseReport {
            case: usize,
            #[serde(flatten)]
            report: CoverageReport,
            template_uavs: usize,
        }
        reports.push(CaseReport {
            case: *case,
            report: evaluate_deployment(&d, &scenario),
            template_uavs: row.uav_count,
        });
    }
    let text = to_json(&reports)?;
    match &a.out_json {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(if failed { EXIT_INVALID } else { EXIT_OK })
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str::<BenchConfig>(&text)?
        }
        None => BenchConfig::default(),
    };
    if let Some(v) = a.samples {
        cfg.samples = v;
    }
    if let Some(v) = a.ratios {
        // Keep the reference epsilon paired with each known ratio.
        if a.epsilon.is_none() {
            cfg.epsilons = v.iter().map(|r| default_epsilon(*r)).collect();
        }
        cfg.ratios = v;
    }
    if let Some(v) = a.ue_counts {
        cfg.ue_counts = v;
    }
    if let Some(v) = a.epsilon {
        cfg.epsilons = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.solvers {
        cfg.solvers = v;
    }
    if let Some(v) = a.budget {
        cfg.solver.time_budget_s = v;
    }
    if let Some(v) = a.nodes {
        cfg.solver.node_budget = Some(v);
    }
    if let Some(v) = a.predictions {
        cfg.predictions = Some(v);
        if !cfg.solvers.contains(&Algorithm::Proposed) {
            cfg.solvers.push(Algorithm::Proposed);
        }
    }
    let report = bench::run_bench(&cfg)?;
    let csv = bench::to_csv(&report.rows);
    match &a.out_csv {
        Some(path) => write_file(path, &csv)?,
        None => emit(out, &csv)?,
    }
    if let Some(path) = &a.out_json {
        write_file(path, &to_json(&report)?)?;
    }
    for f in &report.failures {
        eprintln!(
            "skipped {} R={} p={} sample {}: {}",
            f.algorithm, f.ratio, f.p, f.sample, f.reason
        );
    }
    Ok(EXIT_OK)
}

/// Reference correction radius (cells of a 256 grid) for the three
/// benchmark ratios; other ratios fall back to `320 / R`.
pub fn default_epsilon(ratio: f64) -> f64 {
    [(2.0, 160.0), (4.0, 60.0), (6.0, 40.0)]
        .iter()
        .find(|(r, _)| *r == ratio)
        .map_or(320.0 / ratio, |&(_, eps)| eps)
}

fn cmd_report(a: ReportArgs, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&a.input).map_err(|e| Error::io(&a.input, e))?;
    let rows = if text.trim_start().starts_with('{') {
        serde_json::from_str::<bench::BenchReport>(&text)?.rows
    } else {
        bench::parse_csv(&text)?
    };
    emit(out, &bench::render_table(&rows))?;
    Ok(EXIT_OK)
}
