//! File formats: point-cloud CSV, graph JSON, embedding CSV, and the
//! verification report JSON. Floats serialize with 17 significant digits
//! so a write/read round trip reproduces every value bitwise.

use crate::error::{Error, Result};
use crate::graph::{PointCloud, WeightedGraph};
use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Point-cloud CSV with header `x0,...,x{D-1}[,label]`.
pub fn point_cloud_to_csv(pc: &PointCloud) -> String {
    let dim = pc.dim();
    let mut out = String::new();
    for j in 0..dim {
        if j > 0 {
            out.push(',');
        }
        out.push_str(&format!("x{j}"));
    }
    if pc.labels().is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for i in 0..pc.len() {
        let row: Vec<String> = pc.point(i).iter().map(|&v| format_float(v)).collect();
        out.push_str(&row.join(","));
        if let Some(labels) = pc.labels() {
            out.push(',');
            out.push_str(&labels[i]);
        }
        out.push('\n');
    }
    out
}

pub fn point_cloud_from_csv(text: &str) -> Result<PointCloud> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let labeled = cols.last() == Some(&"label");
    let dim = if labeled { cols.len() - 1 } else { cols.len() };
    for (j, c) in cols.iter().take(dim).enumerate() {
        if *c != format!("x{j}") {
            return Err(Error::Parse(format!("unexpected CSV column `{c}`")));
        }
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                lineno + 2,
                fields.len(),
                cols.len()
            )));
        }
        let mut p = Vec::with_capacity(dim);
        for f in &fields[..dim] {
            p.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad float `{f}`: {e}")))?,
            );
        }
        points.push(p);
        if labeled {
            labels.push(fields[dim].trim().to_string());
        }
    }
    PointCloud::new(points, if labeled { Some(labels) } else { None })
}

/// Graph JSON schema: upper-triangle edge list plus the diagonal.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    self_loops: bool,
    edges: Vec<(usize, usize, f64)>,
    diag: Vec<f64>,
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    let doc = GraphJson {
        n: g.len(),
        self_loops: g.has_self_loops(),
        edges: g.edges(),
        diag: (0..g.len()).map(|i| g.weight(i, i)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
}

pub fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    let doc: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
    if doc.diag.len() != doc.n {
        return Err(Error::Parse("diag length differs from n".into()));
    }
    let mut w = Matrix::zeros(doc.n, doc.n);
    for (i, &d) in doc.diag.iter().enumerate() {
        w.set(i, i, d);
    }
    for &(i, j, v) in &doc.edges {
        if i >= j || j >= doc.n {
            return Err(Error::Parse(format!("bad edge ({i}, {j})")));
        }
        w.set(i, j, v);
        w.set(j, i, v);
    }
    WeightedGraph::from_weights(w, doc.self_loops)
}

/// Embedding CSV with header `idx,c0,...,c{N-1}`; one row per point.
pub fn embedding_to_csv(m: &Matrix) -> String {
    let mut out = String::from("idx");
    for j in 0..m.n_cols() {
        out.push_str(&format!(",c{j}"));
    }
    out.push('\n');
    for i in 0..m.n_rows() {
        out.push_str(&i.to_string());
        for j in 0..m.n_cols() {
            out.push(',');
            out.push_str(&format_float(m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn embedding_from_csv(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    if !header.starts_with("idx") {
        return Err(Error::Parse(
            "embedding CSV must start with idx column".into(),
        ));
    }
    let n_cols = header.split(',').count() - 1;
    let mut rows = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n_cols + 1 {
            return Err(Error::Parse("ragged embedding CSV".into()));
        }
        let mut row = Vec::with_capacity(n_cols);
        for f in &fields[1..] {
            row.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad float `{f}`: {e}")))?,
            );
        }
        rows.push(row);
    }
    Matrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_adjacency, weight_matrix, AdjacencyRule};
    use crate::samplers::{sample, ShapeSpec};

    #[test]
    fn point_cloud_round_trip_is_bitwise() {
        let pc = sample(&ShapeSpec::SphereEven {
            radius: 1.0,
            count: 37,
        })
        .unwrap();
        let back = point_cloud_from_csv(&point_cloud_to_csv(&pc)).unwrap();
        assert_eq!(pc, back);
        let labeled = sample(&ShapeSpec::PhotoSet).unwrap();
        let back = point_cloud_from_csv(&point_cloud_to_csv(&labeled)).unwrap();
        assert_eq!(labeled, back);
    }

    #[test]
    fn graph_round_trip_is_bitwise() {
        let pc = sample(&ShapeSpec::Circle {
            radius: 1.0,
            count: 6,
        })
        .unwrap();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        let w = weight_matrix(&g, &pc, 1.0).unwrap();
        let back = graph_from_json(&graph_to_json(&w)).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn embedding_round_trip() {
        let m = Matrix::from_rows(&[vec![0.1, -2.5e-17], vec![3.0, f64::MIN_POSITIVE]]).unwrap();
        let back = embedding_from_csv(&embedding_to_csv(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn unknown_graph_keys_rejected() {
        let bad = r#"{"n":2,"self_loops":false,"edges":[],"diag":[0,0],"extra":1}"#;
        assert!(graph_from_json(bad).is_err());
    }
}
