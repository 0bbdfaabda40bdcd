//! Point clouds, neighborhood graphs, Gaussian edge weights, the standard
//! graph Laplacian variants, and a deterministic dense symmetric
//! eigendecomposition with multiplicity bookkeeping.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use std::ops::Range;

/// A finite list of points in `R^D`, optionally labeled.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("a point cloud needs at least 2 points"));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::domain("points must have dimension at least 1"));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::ShapeMismatch("points have mixed dimensions".into()));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("point coordinates must be finite"));
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(Error::ShapeMismatch(
                    "label count differs from point count".into(),
                ));
            }
        }
        Ok(PointCloud { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn sq_distance(&self, i: usize, j: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.sq_distance(i, j).sqrt()
    }
}

/// Neighborhood rule for adjacency construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AdjacencyRule {
    /// Union-symmetrized k-nearest-neighbor edges; distance ties broken by
    /// lower index.
    KNearest(usize),
    /// Edges between pairs strictly closer than epsilon.
    Epsilon(f64),
}

/// Symmetric nonnegative weight matrix over a vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Matrix,
    self_loops: bool,
}

impl WeightedGraph {
    /// Wrap an explicit weight matrix. Symmetry must be exact.
    pub fn from_weights(weights: Matrix, self_loops: bool) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::ShapeMismatch("weight matrix must be square".into()));
        }
        let n = weights.n_rows();
        for i in 0..n {
            for j in 0..n {
                let w = weights.get(i, j);
                if !(w >= 0.0) {
                    return Err(Error::domain("weights must be nonnegative"));
                }
                if weights.get(j, i) != w {
                    return Err(Error::domain("weight matrix must be exactly symmetric"));
                }
            }
        }
        Ok(WeightedGraph {
            n,
            weights,
            self_loops,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_self_loops(&self) -> bool {
        self.self_loops
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    /// Degree vector `D_i = sum_j W_ij` (includes the diagonal).
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.weights.row(i).iter().sum())
            .collect()
    }

    /// Edges `(i, j, w)` with `i < j` and `w > 0`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.weights.get(i, j);
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }
}

/// Binary adjacency graph over a point cloud.
///
/// kNN edges are symmetrized by union (an edge exists if either endpoint
/// selects the other), which avoids stranding low-degree vertices; the
/// epsilon rule connects pairs with distance strictly below the threshold.
pub fn build_adjacency(pc: &PointCloud, rule: AdjacencyRule) -> Result<WeightedGraph> {
    let n = pc.len();
    let mut w = Matrix::zeros(n, n);
    match rule {
        AdjacencyRule::KNearest(k) => {
            if k == 0 {
                return Err(Error::domain("kNN needs k >= 1"));
            }
            let k = k.min(n - 1);
            for i in 0..n {
                let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                order.sort_by(|&a, &b| {
                    pc.sq_distance(i, a)
                        .partial_cmp(&pc.sq_distance(i, b))
                        .unwrap()
                        .then(a.cmp(&b))
                });
                for &j in order.iter().take(k) {
                    w.set(i, j, 1.0);
                    w.set(j, i, 1.0);
                }
            }
        }
        AdjacencyRule::Epsilon(eps) => {
            if !(eps > 0.0) {
                return Err(Error::domain("epsilon must be positive"));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if pc.distance(i, j) < eps {
                        w.set(i, j, 1.0);
                        w.set(j, i, 1.0);
                    }
                }
            }
        }
    }
    for i in 0..n {
        if w.row(i).iter().sum::<f64>() == 0.0 {
            return Err(Error::Construction(format!("vertex {i} is isolated")));
        }
    }
    WeightedGraph::from_weights(w, false)
}

/// Gaussian edge weights `W_ij = exp(-|x_i - x_j|^2 / t)` on the adjacency
/// edges, with unit self-loops on the diagonal.
pub fn weight_matrix(g: &WeightedGraph, pc: &PointCloud, t: f64) -> Result<WeightedGraph> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("weight time must be positive"));
    }
    if g.len() != pc.len() {
        return Err(Error::ShapeMismatch("graph and cloud sizes differ".into()));
    }
    let n = g.len();
    let mut w = Matrix::zeros(n, n);
    for i in 0..n {
        w.set(i, i, 1.0);
        for j in (i + 1)..n {
            if g.weight(i, j) > 0.0 {
                let v = (-pc.sq_distance(i, j) / t).exp();
                w.set(i, j, v);
                w.set(j, i, v);
            }
        }
    }
    WeightedGraph::from_weights(w, true)
}

/// Graph Laplacian variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `L = D - W`.
    Unnormalized,
    /// `D^{-1} L` (row sums vanish; generally not symmetric).
    RandomWalk,
    /// `I - D^{-1/2} W D^{-1/2}` (symmetric).
    Symmetric,
    /// `W - D` on the unweighted simple graph: binary off-diagonal
    /// adjacency, no self-loops, opposite sign convention.
    Difference,
}

pub fn laplacian(g: &WeightedGraph, kind: LaplacianKind) -> Result<Matrix> {
    let n = g.len();
    let degrees = g.degrees();
    if matches!(
        kind,
        LaplacianKind::Unnormalized | LaplacianKind::RandomWalk | LaplacianKind::Symmetric
    ) && degrees.iter().any(|&d| d <= 0.0)
    {
        return Err(Error::domain("every vertex needs positive degree"));
    }
    let mut out = Matrix::zeros(n, n);
    match kind {
        LaplacianKind::Unnormalized => {
            for i in 0..n {
                for j in 0..n {
                    let w = g.weight(i, j);
                    out.set(i, j, if i == j { degrees[i] - w } else { -w });
                }
            }
        }
        LaplacianKind::RandomWalk => {
            for i in 0..n {
                for j in 0..n {
                    let w = g.weight(i, j);
                    let l = if i == j { degrees[i] - w } else { -w };
                    out.set(i, j, l / degrees[i]);
                }
            }
        }
        LaplacianKind::Symmetric => {
            for i in 0..n {
                for j in 0..n {
                    let w = g.weight(i, j) / (degrees[i] * degrees[j]).sqrt();
                    let v = if i == j { 1.0 - w } else { -w };
                    out.set(i, j, v);
                }
            }
        }
        LaplacianKind::Difference => {
            // Binary simple-graph adjacency regardless of stored weights.
            let mut degree_counts = vec![0.0_f64; n];
            for i in 0..n {
                for j in 0..n {
                    if i != j && g.weight(i, j) > 0.0 {
                        degree_counts[i] += 1.0;
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        out.set(i, j, -degree_counts[i]);
                    } else if g.weight(i, j) > 0.0 {
                        out.set(i, j, 1.0);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Which inner product the eigenvectors are orthonormal under.
#[derive(Clone, Debug, PartialEq)]
pub enum InnerProduct {
    Euclidean,
    /// `<u, v> = sum_i d_i u_i v_i` with the degree vector `d`.
    DegreeWeighted(Vec<f64>),
}

/// Sorted eigenvalues with orthonormal eigenvectors (columns) and index
/// ranges grouping eigenvalues that agree within a relative 1e-8.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
    pub multiplicity_blocks: Vec<Range<usize>>,
    pub inner_product: InnerProduct,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Multiplicity blocks restricted to eigenvector columns
    /// `first..=last`, re-indexed to start at zero. Used when embedding
    /// columns are a contiguous slice of the decomposition.
    pub fn blocks_for_columns(&self, first: usize, last: usize) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        for b in &self.multiplicity_blocks {
            let lo = b.start.max(first);
            let hi = b.end.min(last + 1);
            if lo < hi {
                out.push(lo - first..hi - first);
            }
        }
        out
    }
}

fn multiplicity_blocks(values: &[f64]) -> Vec<Range<usize>> {
    let scale = values
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let tol = 1e-8 * scale;
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i] - values[i - 1]).abs() > tol {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
pub fn spectral_decompose(m: &Matrix) -> Result<SpectralDecomposition> {
    let eig = linalg::jacobi_eigen(m, 100)?;
    let blocks = multiplicity_blocks(&eig.values);
    Ok(SpectralDecomposition {
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        multiplicity_blocks: blocks,
        inner_product: InnerProduct::Euclidean,
    })
}

/// Spectrum of the random-walk Laplacian `D^{-1} L`, computed through the
/// symmetric form: decompose `I - D^{-1/2} W D^{-1/2}`, then map each
/// eigenvector `w` to `D^{-1/2} w`, which is orthonormal in the
/// degree-weighted inner product. Eigenvalues are unchanged.
pub fn rw_spectrum(g: &WeightedGraph) -> Result<SpectralDecomposition> {
    let degrees = g.degrees();
    let sym = laplacian(g, LaplacianKind::Symmetric)?;
    let dec = spectral_decompose(&sym)?;
    let n = g.len();
    let mut vectors = Matrix::zeros(n, n);
    for j in 0..n {
        let mut col: Vec<f64> = (0..n)
            .map(|i| dec.eigenvectors.get(i, j) / degrees[i].sqrt())
            .collect();
        // Normalize in the degree-weighted inner product (a no-op up to
        // rounding) and re-apply the sign convention.
        let norm: f64 = col
            .iter()
            .zip(&degrees)
            .map(|(v, d)| d * v * v)
            .sum::<f64>()
            .sqrt();
        for v in &mut col {
            *v /= norm;
        }
        linalg::fix_sign(&mut col);
        for (i, &v) in col.iter().enumerate() {
            vectors.set(i, j, v);
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues: dec.eigenvalues,
        eigenvectors: vectors,
        multiplicity_blocks: dec.multiplicity_blocks,
        inner_product: InnerProduct::DegreeWeighted(degrees),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{sample, ShapeSpec};

    fn hexagon_cloud() -> PointCloud {
        sample(&ShapeSpec::Circle {
            radius: 1.0,
            count: 6,
        })
        .unwrap()
    }

    #[test]
    fn hexagon_epsilon_rule_gives_cycle() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        for i in 0..6 {
            let expect_next = (i + 1) % 6;
            let expect_prev = (i + 5) % 6;
            for j in 0..6 {
                let expect = j == expect_next || j == expect_prev;
                assert_eq!(g.weight(i, j) > 0.0, expect, "edge ({i},{j})");
            }
        }
    }

    #[test]
    fn knn_union_and_complete_graph() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::KNearest(5)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.weight(i, j) > 0.0, i != j);
            }
        }
        let g2 = build_adjacency(&pc, AdjacencyRule::KNearest(2)).unwrap();
        assert_eq!(g2.edges().len(), 6);
    }

    #[test]
    fn epsilon_isolation_is_reported_with_vertex() {
        let pc =
            PointCloud::new(vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![50.0, 0.0]], None).unwrap();
        match build_adjacency(&pc, AdjacencyRule::Epsilon(1.0)) {
            Err(Error::Construction(msg)) => assert!(msg.contains("2")),
            other => panic!("expected construction error, got {other:?}"),
        }
    }

    #[test]
    fn hexagon_gaussian_weights() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        let w = weight_matrix(&g, &pc, 1.0).unwrap();
        assert!(w.has_self_loops());
        let e1 = (-1.0_f64).exp();
        for i in 0..6 {
            assert_eq!(w.weight(i, i), 1.0);
            assert!((w.weight(i, (i + 1) % 6) - e1).abs() < 1e-12);
        }
        // Large weight time drives adjacency entries toward 1.
        let w_inf = weight_matrix(&g, &pc, 1e9).unwrap();
        assert!((w_inf.weight(0, 1) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn hexagon_symmetric_laplacian_closed_form() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        let w = weight_matrix(&g, &pc, 1.0).unwrap();
        let sym = laplacian(&w, LaplacianKind::Symmetric).unwrap();
        let c = 2.0 * (-1.0_f64).exp() / (1.0 + 2.0 * (-1.0_f64).exp());
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j {
                    c
                } else if (i + 1) % 6 == j || (j + 1) % 6 == i {
                    -c / 2.0
                } else {
                    0.0
                };
                assert!((sym.get(i, j) - expect).abs() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn laplacian_variants_annihilate_constants() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::KNearest(3)).unwrap();
        let w = weight_matrix(&g, &pc, 0.7).unwrap();
        let ones = vec![1.0; 6];
        for kind in [
            LaplacianKind::Unnormalized,
            LaplacianKind::RandomWalk,
            LaplacianKind::Difference,
        ] {
            let l = laplacian(&w, kind).unwrap();
            for v in l.matvec(&ones).unwrap() {
                assert!(v.abs() < 1e-12, "{kind:?}");
            }
        }
        // The symmetric form annihilates D^{1/2} 1.
        let l = laplacian(&w, LaplacianKind::Symmetric).unwrap();
        let droot: Vec<f64> = w.degrees().iter().map(|d| d.sqrt()).collect();
        for v in l.matvec(&droot).unwrap() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn difference_laplacian_is_binary_and_loopless() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        let w = weight_matrix(&g, &pc, 2.0).unwrap();
        let l = laplacian(&w, LaplacianKind::Difference).unwrap();
        for i in 0..6 {
            assert_eq!(l.get(i, i), -2.0);
            assert_eq!(l.get(i, (i + 1) % 6), 1.0);
        }
    }

    #[test]
    fn hexagon_spectrum_closed_form() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        let w = weight_matrix(&g, &pc, 1.0).unwrap();
        let dec = spectral_decompose(&laplacian(&w, LaplacianKind::Symmetric).unwrap()).unwrap();
        let c = 2.0 * (-1.0_f64).exp() / (1.0 + 2.0 * (-1.0_f64).exp());
        assert!(dec.eigenvalues[0].abs() < 1e-12);
        assert!((dec.eigenvalues[1] - 0.5 * c).abs() < 1e-10);
        assert!((dec.eigenvalues[2] - 0.5 * c).abs() < 1e-10);
        assert_eq!(dec.multiplicity_blocks[1], 1..3);
        // Constant-degree graph: random-walk spectrum coincides.
        let rw = rw_spectrum(&w).unwrap();
        for (a, b) in dec.eigenvalues.iter().zip(&rw.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_vertex_rw_eigenvalue() {
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0);
        let wv = 0.37;
        m.set(0, 1, wv);
        m.set(1, 0, wv);
        let g = WeightedGraph::from_weights(m, true).unwrap();
        let rw = rw_spectrum(&g).unwrap();
        assert!(rw.eigenvalues[0].abs() < 1e-14);
        assert!((rw.eigenvalues[1] - 2.0 * wv / (1.0 + wv)).abs() < 1e-14);
    }

    #[test]
    fn rw_eigenvectors_satisfy_the_nonsymmetric_problem() {
        let pc = hexagon_cloud();
        let g = build_adjacency(&pc, AdjacencyRule::KNearest(3)).unwrap();
        let w = weight_matrix(&g, &pc, 0.9).unwrap();
        let rw_l = laplacian(&w, LaplacianKind::RandomWalk).unwrap();
        let dec = rw_spectrum(&w).unwrap();
        let scale = rw_l.inf_norm();
        for j in 0..dec.len() {
            let v = dec.eigenvectors.column(j);
            let mv = rw_l.matvec(&v).unwrap();
            for i in 0..v.len() {
                assert!((mv[i] - dec.eigenvalues[j] * v[i]).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn decompose_rejects_asymmetric() {
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 1, 1.0);
        assert!(spectral_decompose(&m).is_err());
    }
}
