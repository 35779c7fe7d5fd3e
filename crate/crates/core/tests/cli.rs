use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use uavcov::bench::{parse_csv, CSV_HEADER};
use uavcov::scenario::{write_matrix, write_points, GridMatrix, MatrixKind};
use uavcov::Point;

fn uavcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavcov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_spiral_single_disk() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("tight.pts");
    let cluster: Vec<Point> = (0..30)
        .map(|k| Point::new(500.0 + (k % 6) as f64 * 10.0, 500.0 + (k / 6) as f64 * 10.0))
        .collect();
    write_points(&pts, &cluster, 1000.0).unwrap();
    let o = uavcov(&[
        "solve",
        "--alg",
        "spiral",
        "--points",
        path(&pts),
        "--R",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["uav_count"], 1);
    assert_eq!(v["coverage_pct"], 100.0);
    assert_eq!(v["algorithm"], "spiral");
}

#[test]
fn loss_of_identical_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.gmx");
    let mut m = GridMatrix::square(16, MatrixKind::Int);
    m.set(3, 4, 1.0);
    m.set(10, 2, 2.0);
    write_matrix(&a, &m).unwrap();
    let o = uavcov(&["loss", path(&a), path(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).lines().any(|l| l == "total\t0"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn small_bench_orders_exact_below_spiral() {
    let o = uavcov(&["bench", "--samples", "5", "--R", "2", "--ue", "400"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    let rows = parse_csv(&text).unwrap();
    let algs: Vec<&str> = rows.iter().map(|r| r.algorithm.as_str()).collect();
    assert_eq!(algs, vec!["exact", "spiral", "kmeans"]);
    assert!(rows[0].mean_uavs <= rows[1].mean_uavs);
    assert!(rows.iter().all(|r| r.samples == 5 && r.epsilon == 160.0));
}

#[test]
fn budget_exhaustion_exits_2_with_output() {
    let o = uavcov(&[
        "solve", "--alg", "exact", "--p", "300", "--R", "6", "--nodes", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "budget_exceeded");
    assert_eq!(v["coverage_pct"], 100.0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(uavcov(&["solve", "--alg", "exact"]).status.code(), Some(1));
    assert_eq!(uavcov(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(uavcov(&["bench", "--samples", "x"]).status.code(), Some(1));
    assert_eq!(uavcov(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\"samples\": \"many\"}").unwrap();
    let o = uavcov(&["bench", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bench_config_file_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.json");
    std::fs::write(
        &cfg,
        r#"{"R": [4], "ue_counts": [60], "epsilons": [60], "samples": 2, "solvers": ["spiral"]}"#,
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let o = uavcov(&[
        "bench",
        "--config",
        path(&cfg),
        "--out-csv",
        path(&csv),
        "--out-json",
        path(&json),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rows = parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].p, 60);

    for input in [&csv, &json] {
        let o = uavcov(&["report", path(input)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("spiral"));
    }
}

#[test]
fn dataset_then_deploy() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let o = uavcov(&[
        "dataset",
        "--out",
        path(&ds),
        "--cases",
        "2",
        "--R",
        "4",
        "--p",
        "80",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);

    // Templates stand in for predictions.
    for k in 0..2 {
        std::fs::copy(
            ds.join(format!("case_{k}.K.gmx")),
            ds.join(format!("case_{k}.Yhat.gmx")),
        )
        .unwrap();
    }
    let o = uavcov(&["deploy", "--dataset", path(&ds), "--epsilon", "1"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cases = v.as_array().unwrap();
    assert_eq!(cases.len(), 2);
    for c in cases {
        assert_eq!(c["uav_count"], c["template_uavs"]);
        assert_eq!(c["algorithm"], "proposed");
    }

    std::fs::remove_file(ds.join("case_1.Yhat.gmx")).unwrap();
    let o = uavcov(&["deploy", "--dataset", path(&ds), "--epsilon", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn gen_and_correct() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("s.pts");
    let gmx = dir.path().join("s.gmx");
    let o = uavcov(&[
        "gen",
        "--p",
        "120",
        "--seed",
        "4",
        "--out",
        path(&pts),
        "--matrix",
        path(&gmx),
        "--grid",
        "32",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let m = uavcov::scenario::read_matrix(&gmx).unwrap();
    assert_eq!(m.sum(), 120.0);

    let o = uavcov(&[
        "correct",
        "--matrix",
        path(&gmx),
        "--epsilon",
        "3",
        "--side",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["y_count"].as_u64().unwrap() as usize, m.count_nonzero());
    assert!(v["k_count"].as_u64().unwrap() <= v["y_count"].as_u64().unwrap());
    assert_eq!(
        v["centers"].as_array().unwrap().len(),
        v["k_count"].as_u64().unwrap() as usize
    );
}
