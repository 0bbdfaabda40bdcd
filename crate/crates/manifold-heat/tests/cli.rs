//! End-to-end checks of the `mheat` binary: file round trips, the worked
//! fixtures through the actual command line, the config-file mirror, and
//! the exit-code contract (0 ok, 1 validation, 2 usage, 3 numeric).
#![allow(clippy::single_range_in_vec_init)]

use manifold_heat::eigenmaps::orthogonal_align;
use manifold_heat::graph::WeightedGraph;
use manifold_heat::io;
use manifold_heat::linalg::Matrix;
use manifold_heat::samplers::{sample, ShapeSpec};
use std::path::Path;
use std::process::{Command, Output};

fn mheat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mheat"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sample_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let out = mheat(
        &[
            "sample", "--shape", "circle", "--radius", "1", "--n", "6", "--out", "hex.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("wrote 6 points of dimension 2"));
    let written = std::fs::read_to_string(dir.path().join("hex.csv")).unwrap();
    let parsed = io::point_cloud_from_csv(&written).unwrap();
    let direct = sample(&ShapeSpec::Circle {
        radius: 1.0,
        count: 6,
    })
    .unwrap();
    assert_eq!(parsed, direct);
}

#[test]
fn hexagon_pipeline_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = mheat(
        &[
            "sample", "--shape", "circle", "--radius", "1", "--n", "6", "--out", "hex.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = mheat(
        &[
            "graph", "--points", "hex.csv", "--rule", "eps:1.01", "--t", "1", "--out", "hex.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("6 vertices and 6 edges"));
    let out = mheat(
        &[
            "graph", "--points", "hex.csv", "--rule", "knn:2", "--binary", "--out", "adj.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let adjacency =
        io::graph_from_json(&std::fs::read_to_string(dir.path().join("adj.json")).unwrap())
            .unwrap();
    assert!(!adjacency.has_self_loops());
    assert!(adjacency.edges().iter().all(|&(_, _, w)| w == 1.0));
    let out = mheat(
        &[
            "embed",
            "--points",
            "hex.csv",
            "--graph",
            "hex.json",
            "--laplacian",
            "rw",
            "--mode",
            "eigenmap",
            "--N",
            "2",
            "--out",
            "emb.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("leading eigenvalues"));
    // Closed-form second eigenvalue printed to 9 digits.
    assert!(text.contains("0.211941558"), "eigenvalue line: {text}");
    let map = io::embedding_from_csv(&std::fs::read_to_string(dir.path().join("emb.csv")).unwrap())
        .unwrap();
    assert_eq!((map.n_rows(), map.n_cols()), (6, 2));
}

#[test]
fn photo_fixture_with_injected_weights() {
    let dir = tempfile::tempdir().unwrap();
    let out = mheat(
        &["sample", "--shape", "photoset", "--out", "photos.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    // The rounded weight matrix as published.
    let mut w = Matrix::zeros(6, 6);
    for i in 0..6 {
        w.set(i, i, 1.0);
    }
    for &(i, j) in &[(0usize, 2usize), (0, 3), (1, 2), (1, 5), (3, 4), (4, 5)] {
        w.set(i, j, 0.05);
        w.set(j, i, 0.05);
    }
    let graph = WeightedGraph::from_weights(w, true).unwrap();
    std::fs::write(dir.path().join("photos_w.json"), io::graph_to_json(&graph)).unwrap();
    let out = mheat(
        &[
            "embed",
            "--points",
            "photos.csv",
            "--inject-w",
            "photos_w.json",
            "--mode",
            "eigenmap",
            "--N",
            "2",
            "--out",
            "emb.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let map = io::embedding_from_csv(&std::fs::read_to_string(dir.path().join("emb.csv")).unwrap())
        .unwrap();
    let s3 = 3.0_f64.sqrt() / 2.0;
    let expect = Matrix::from_rows(&[
        vec![s3, 0.5],
        vec![-s3, 0.5],
        vec![0.0, 1.0],
        vec![s3, -0.5],
        vec![0.0, -1.0],
        vec![-s3, -0.5],
    ])
    .unwrap();
    let res = orthogonal_align(&expect, &map, true, &[0..2]).unwrap();
    assert!(res.residual <= 1e-10, "residual {}", res.residual);
}

#[test]
fn analytic_queries() {
    let dir = tempfile::tempdir().unwrap();
    let out = mheat(
        &[
            "analytic",
            "heat-kernel",
            "--manifold",
            "circle",
            "--radius",
            "1",
            "--p",
            "0",
            "--q",
            "0",
            "--t",
            "1",
            "--method",
            "image:10",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("2.8212397345676"), "{}", stdout(&out));

    let out = mheat(
        &[
            "analytic",
            "varadhan",
            "--manifold",
            "h3",
            "--p",
            "0",
            "--q",
            "1",
            "--times",
            "1e-2,1e-3",
            "--out",
            "sweep.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("t,estimate,truth,abs_error\n"));
    assert_eq!(csv.lines().count(), 3);

    let out = mheat(&["analytic", "length", "--t", "0.01"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("length: 6.2831"), "{}", stdout(&out));

    let out = mheat(
        &[
            "analytic",
            "spectrum",
            "--manifold",
            "torus",
            "--a",
            "1",
            "--b",
            "0.5",
            "--count",
            "4",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("lambda_3 = 4."));
}

#[test]
fn lollipop_sample_lies_on_its_surface() {
    use manifold_heat::samplers::{make_profile, ProfileKind};
    let dir = tempfile::tempdir().unwrap();
    let out = mheat(
        &[
            "sample", "--shape", "lollipop", "--R", "10", "--r", "5", "--L", "30", "--n", "600",
            "--out", "lp.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let pc = io::point_cloud_from_csv(&std::fs::read_to_string(dir.path().join("lp.csv")).unwrap())
        .unwrap();
    // Roughly the requested budget (pole rows collapse).
    assert!(pc.len() >= 480 && pc.len() <= 700, "{} points", pc.len());
    let profile = make_profile(ProfileKind::Lollipop {
        radius: 10.0,
        neck: 5.0,
        length: 30.0,
    })
    .unwrap();
    for i in 0..pc.len() {
        let p = pc.point(i);
        let radial = (p[0] * p[0] + p[1] * p[1]).sqrt();
        assert!((radial - profile.value(p[2]).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn verify_suite_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = mheat(
        &["verify", "--suite", "hexagon", "--out", "report.json"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("suite hexagon: pass"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["version"], 1);
    assert_eq!(report["pass"], true);

    let out = mheat(&["verify", "--suite", "unknown"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    // Usage error: unknown flag.
    let out = mheat(&["sample", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Validation error: bad shape parameter.
    let out = mheat(
        &[
            "sample", "--shape", "circle", "--radius", "-1", "--n", "6", "--out", "x.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    // Numeric failure: image sum whose truncation certificate fails.
    let out = mheat(
        &[
            "analytic",
            "heat-kernel",
            "--manifold",
            "circle",
            "--radius",
            "1",
            "--p",
            "0",
            "--q",
            "3.14159265",
            "--t",
            "2",
            "--method",
            "image:1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = serde_json::json!({
        "command": ["sample"],
        "flags": { "shape": "circle", "radius": 1.0, "n": 6, "out": "from_config.csv" }
    });
    std::fs::write(dir.path().join("cfg.json"), config.to_string()).unwrap();
    let out = mheat(&["--config", "cfg.json"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("from_config.csv").exists());

    // The config is a full replacement, not combinable with other flags.
    let out = mheat(&["sample", "--config", "cfg.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Unknown keys are rejected before execution.
    let bad = serde_json::json!({
        "command": ["sample"],
        "flags": { "shape": "circle" },
        "extra": 1
    });
    std::fs::write(dir.path().join("bad.json"), bad.to_string()).unwrap();
    let out = mheat(&["--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
