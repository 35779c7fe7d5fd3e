use std::fs;

use uavcov::correction::CorrectionConfig;
use uavcov::pipeline::{
    case_file, deploy, evaluate, evaluate_deployment, export_dataset, import_predictions,
    ExportConfig, Manifest,
};
use uavcov::scenario::{
    discretize_points, generate_scenario, read_matrix, write_matrix, AreaSpec, CoverageSpec,
    GridMatrix, MatrixKind, ScenarioParams, UEScenario,
};
use uavcov::solvers::{solve_exact, solve_spiral, SolverConfig};
use uavcov::Point;

fn min_cell_spacing(m: &GridMatrix) -> f64 {
    let mut cells = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j) > 0.0 {
                cells.push(Point::new(j as f64, i as f64));
            }
        }
    }
    let mut best = f64::INFINITY;
    for (a, p) in cells.iter().enumerate() {
        for q in &cells[a + 1..] {
            best = best.min(p.dist(q));
        }
    }
    best
}

fn scenarios(area: &AreaSpec, p: usize, n: usize, seed: u64) -> Vec<UEScenario> {
    (0..n as u64)
        .map(|k| generate_scenario(area, &ScenarioParams::with_count(p), seed + k).unwrap())
        .collect()
}

#[test]
fn exact_template_round_trips_through_deploy() {
    let area = AreaSpec::new(1000.0, 256).unwrap();
    let cov = CoverageSpec::new(&area, 4.0).unwrap();
    let mut checked = 0;
    for s in scenarios(&area, 300, 10, 11) {
        let sol = solve_exact(&s.points, cov.radius, &SolverConfig::default()).unwrap();
        let y = discretize_points(
            &sol.centers
                .iter()
                .map(|c| area.clamp(c))
                .collect::<Vec<_>>(),
            &area,
        )
        .unwrap();
        let spacing = min_cell_spacing(&y);
        if y.count_nonzero() != sol.uav_count() {
            continue;
        }
        let eps = (spacing / 2.0).min(3.0);
        let d = deploy(&y, &area, &cov, &CorrectionConfig::new(eps)).unwrap();
        assert_eq!(d.solution.uav_count(), sol.uav_count());
        assert_eq!(d.blur_factor(), Some(1.0));
        checked += 1;
    }
    assert!(checked >= 8, "only {checked} usable fixtures");
}

#[test]
fn duplicated_uavs_collapse_back() {
    let area = AreaSpec::new(1000.0, 256).unwrap();
    let cov = CoverageSpec::new(&area, 6.0).unwrap();
    for s in scenarios(&area, 200, 10, 40) {
        let sol = solve_exact(&s.points, cov.radius, &SolverConfig::default()).unwrap();
        let mut y = GridMatrix::square(256, MatrixKind::Int);
        for c in &sol.centers {
            let (i, j) = area.cell_of(&area.clamp(c)).unwrap();
            y.set(i, j, 1.0);
            let jj = if j + 1 < 256 { j + 1 } else { j - 1 };
            y.set(i, jj, 1.0);
        }
        assert!(min_cell_spacing(&y) >= 1.0);
        let d = deploy(&y, &area, &cov, &CorrectionConfig::new(2.0)).unwrap();
        assert_eq!(d.blur_y_count, 2 * sol.uav_count());
        assert_eq!(d.solution.uav_count(), sol.uav_count());
        assert_eq!(d.blur_factor(), Some(2.0));
    }
}

#[test]
fn deploy_is_deterministic_and_scored() {
    let area = AreaSpec::new(1000.0, 64).unwrap();
    let cov = CoverageSpec::new(&area, 4.0).unwrap();
    let s = generate_scenario(&area, &ScenarioParams::with_count(200), 5).unwrap();
    let sol = solve_spiral(&s.points, cov.radius).unwrap();
    let y = discretize_points(
        &sol.centers
            .iter()
            .map(|c| area.clamp(c))
            .collect::<Vec<_>>(),
        &area,
    )
    .unwrap();
    let cfg = CorrectionConfig::new(1.0);
    let a = deploy(&y, &area, &cov, &cfg).unwrap();
    let b = deploy(&y, &area, &cov, &cfg).unwrap();
    assert_eq!(a.solution.centers, b.solution.centers);
    let report = evaluate_deployment(&a, &s);
    assert_eq!(report.epsilon, Some(1.0));
    assert_eq!(report.blur_y_count, Some(y.count_nonzero()));
    assert!(report.coverage_pct > 0.0 && report.coverage_pct <= 100.0);
    assert_eq!(evaluate(&sol, &s).coverage_pct, 100.0);
}

#[test]
fn hand_built_two_disk_solution() {
    let area = AreaSpec::new(100.0, 16).unwrap();
    let pts: Vec<Point> = [
        (10.0, 10.0),
        (12.0, 10.0),
        (20.0, 10.0),
        (10.0, 21.0),
        (80.0, 80.0),
        (85.0, 80.0),
        (90.0, 90.0),
        (50.0, 50.0),
        (0.0, 0.0),
        (100.0, 100.0),
    ]
    .iter()
    .map(|&(x, y)| Point::new(x, y))
    .collect();
    let radius = 11.0;
    let centers = vec![Point::new(10.0, 10.0), Point::new(85.0, 85.0)];
    let manual = pts
        .iter()
        .filter(|p| centers.iter().any(|c| p.dist(c) <= radius))
        .count();
    assert_eq!(manual, 7);
    let sol = uavcov::solvers::PlacementSolution {
        centers,
        radius,
        algorithm: uavcov::solvers::Algorithm::Spiral,
        wall_time_s: 0.0,
        covered_count: None,
        status: uavcov::solvers::SolveStatus::Complete,
    };
    let s = UEScenario {
        points: pts,
        seed: 0,
        params: ScenarioParams::with_count(10),
        area,
    };
    assert_eq!(evaluate(&sol, &s).coverage_pct, 70.0);
}

#[test]
fn export_writes_pairs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let area = AreaSpec::new(1000.0, 64).unwrap();
    let cases = scenarios(&area, 120, 3, 7);
    let m = export_dataset(&cases, &ExportConfig::new(4.0, 64), dir.path()).unwrap();
    assert_eq!(m.rows.len(), 3);
    assert_eq!(Manifest::read(dir.path()).unwrap(), m);
    for row in &m.rows {
        let x = read_matrix(case_file(dir.path(), row.case, "X.gmx")).unwrap();
        let k = read_matrix(case_file(dir.path(), row.case, "K.gmx")).unwrap();
        assert_eq!(x.sum(), 120.0);
        assert_eq!(k.sum(), row.uav_count as f64);
        assert!(row.optimal);
    }
}

#[test]
fn export_is_byte_identical_on_rerun() {
    let area = AreaSpec::new(1000.0, 64).unwrap();
    let cases = scenarios(&area, 150, 3, 21);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    export_dataset(&cases, &ExportConfig::new(6.0, 64), a.path()).unwrap();
    export_dataset(&cases, &ExportConfig::new(6.0, 64), b.path()).unwrap();
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 3 * 3 + 1);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?} differs"
        );
    }
}

#[test]
fn import_reports_bad_cases_individually() {
    let dir = tempfile::tempdir().unwrap();
    assert!(import_predictions(dir.path()).unwrap().cases.is_empty());

    let good = GridMatrix::square(8, MatrixKind::Real);
    write_matrix(dir.path().join("case_0.Yhat.gmx"), &good).unwrap();
    let p = import_predictions(dir.path()).unwrap();
    assert_eq!(p.cases.len(), 1);
    assert!(p.errors.is_empty());

    fs::write(
        dir.path().join("case_1.Yhat.gmx"),
        "GMX 1 2 2 real\n0.5 -0.25\n0 0\n",
    )
    .unwrap();
    write_matrix(dir.path().join("case_2.Yhat.gmx"), &good).unwrap();
    let p = import_predictions(dir.path()).unwrap();
    assert_eq!(p.cases.iter().map(|c| c.0).collect::<Vec<_>>(), vec![0, 2]);
    assert_eq!(p.errors.len(), 1);
    assert_eq!(p.errors[0].case, 1);
}

#[test]
fn import_checks_manifest_coverage_and_shape() {
    let dir = tempfile::tempdir().unwrap();
    let area = AreaSpec::new(1000.0, 16).unwrap();
    let cases = scenarios(&area, 40, 3, 3);
    export_dataset(&cases, &ExportConfig::new(2.0, 16), dir.path()).unwrap();
    write_matrix(
        dir.path().join("case_0.Yhat.gmx"),
        &GridMatrix::square(16, MatrixKind::Real),
    )
    .unwrap();
    write_matrix(
        dir.path().join("case_1.Yhat.gmx"),
        &GridMatrix::square(8, MatrixKind::Real),
    )
    .unwrap();
    let p = import_predictions(dir.path()).unwrap();
    assert_eq!(p.cases.len(), 1);
    let bad: Vec<usize> = p.errors.iter().map(|e| e.case).collect();
    assert_eq!(bad, vec![1, 2]);
}
