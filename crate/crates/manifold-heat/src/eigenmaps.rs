//! Eigenmaps and diffusion maps over graph spectra, plus block-wise
//! orthogonal Procrustes alignment for comparing embeddings across the
//! basis ambiguity of repeated eigenvalues.

use crate::error::{Error, Result};
use crate::graph::SpectralDecomposition;
use crate::linalg::{svd_square, Matrix};
use std::ops::Range;

/// Eigenmap: row `i` is `(v_1(i), ..., v_n(i))`, skipping the constant
/// eigenvector `v_0`.
pub fn eigenmap(dec: &SpectralDecomposition, n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::domain("eigenmap needs at least one coordinate"));
    }
    if dec.len() < n + 1 {
        return Err(Error::domain(format!(
            "decomposition has {} eigenpairs, eigenmap needs {}",
            dec.len(),
            n + 1
        )));
    }
    let rows = dec.eigenvectors.n_rows();
    let mut out = Matrix::zeros(rows, n);
    for i in 0..rows {
        for j in 0..n {
            out.set(i, j, dec.eigenvectors.get(i, j + 1));
        }
    }
    Ok(out)
}

/// Diffusion map: eigenmap coordinates weighted by `(1 - mu_j)^tau`, the
/// continuous-`tau` interpolation of powers of `I - L`. Weights must stay
/// nonnegative; eigenvalues above 1 (beyond a 1e-12 slack) are rejected.
pub fn diffusion_map(dec: &SpectralDecomposition, tau: f64, n: usize) -> Result<Matrix> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::domain("diffusion exponent must be nonnegative"));
    }
    let mut out = eigenmap(dec, n)?;
    for j in 0..n {
        let lam = 1.0 - dec.eigenvalues[j + 1];
        if lam < -1e-12 {
            return Err(Error::SpectralRange(format!(
                "eigenvalue {} exceeds 1; diffusion weights undefined",
                dec.eigenvalues[j + 1]
            )));
        }
        let w = lam.max(0.0).powf(tau);
        for i in 0..out.n_rows() {
            out.set(i, j, out.get(i, j) * w);
        }
    }
    Ok(out)
}

/// Result of an orthogonal (optionally scaled) alignment `A ~ s B Q`.
#[derive(Clone, Debug)]
pub struct AlignmentResult {
    /// Block-diagonal orthogonal matrix.
    pub rotation: Matrix,
    pub scale: f64,
    /// Root-mean-square row mismatch of `A - s B Q`.
    pub residual: f64,
}

impl AlignmentResult {
    pub fn to_json(&self) -> serde_json::Value {
        let q: Vec<f64> = (0..self.rotation.n_rows())
            .flat_map(|i| self.rotation.row(i).to_vec())
            .collect();
        serde_json::json!({
            "scale": self.scale,
            "residual": self.residual,
            "Q": q,
        })
    }
}

/// Best block-diagonal orthogonal transform (and optional global scale)
/// matching `B` to `A`, solved per block by orthogonal Procrustes through
/// the SVD of `B^T A`. Blocks must partition the columns; align whole
/// eigenvalue blocks rather than individual columns whenever eigenvalues
/// repeat, since single eigenvectors inside a multiple eigenspace are not
/// comparable.
pub fn orthogonal_align(
    a: &Matrix,
    b: &Matrix,
    allow_scale: bool,
    blocks: &[Range<usize>],
) -> Result<AlignmentResult> {
    if a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() {
        return Err(Error::ShapeMismatch(
            "alignment inputs must share shape".into(),
        ));
    }
    let cols = a.n_cols();
    let mut covered = vec![false; cols];
    for blk in blocks {
        if blk.end > cols {
            return Err(Error::ShapeMismatch(
                "block range exceeds column count".into(),
            ));
        }
        for j in blk.clone() {
            if covered[j] {
                return Err(Error::ShapeMismatch("blocks overlap".into()));
            }
            covered[j] = true;
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::ShapeMismatch(
            "blocks must cover every column".into(),
        ));
    }

    let rows = a.n_rows();
    let mut rotation = Matrix::zeros(cols, cols);
    let mut trace_total = 0.0;
    for blk in blocks {
        let width = blk.len();
        // M = B_blk^T A_blk
        let mut m = Matrix::zeros(width, width);
        for (bi, jb) in blk.clone().enumerate() {
            for (ai, ja) in blk.clone().enumerate() {
                let mut dot = 0.0;
                for r in 0..rows {
                    dot += b.get(r, jb) * a.get(r, ja);
                }
                m.set(bi, ai, dot);
            }
        }
        let (u, sigma, vt) = svd_square(&m)?;
        let q = u.matmul(&vt)?;
        trace_total += sigma.iter().sum::<f64>();
        for (bi, jb) in blk.clone().enumerate() {
            for (ai, ja) in blk.clone().enumerate() {
                rotation.set(jb, ja, q.get(bi, ai));
            }
        }
    }
    let scale = if allow_scale {
        let b_norm2 = b.frobenius_norm().powi(2);
        if b_norm2 == 0.0 {
            return Err(Error::domain("cannot scale-align a zero matrix"));
        }
        trace_total / b_norm2
    } else {
        1.0
    };
    let aligned = b.matmul(&rotation)?.scale(scale);
    let diff = a.sub(&aligned)?;
    let residual = diff.frobenius_norm() / (rows as f64).sqrt();
    Ok(AlignmentResult {
        rotation,
        scale,
        residual,
    })
}

/// Pearson correlation between two equally long samples.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::ShapeMismatch(
            "correlation needs two equal-length samples".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("correlation undefined for a constant sample"));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_adjacency, rw_spectrum, weight_matrix, AdjacencyRule};
    use crate::samplers::{sample, ShapeSpec};
    use std::f64::consts::PI;

    fn hexagon_weights() -> crate::graph::WeightedGraph {
        let pc = sample(&ShapeSpec::Circle {
            radius: 1.0,
            count: 6,
        })
        .unwrap();
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(1.01)).unwrap();
        weight_matrix(&g, &pc, 1.0).unwrap()
    }

    fn hexagon_rw() -> SpectralDecomposition {
        rw_spectrum(&hexagon_weights()).unwrap()
    }

    #[test]
    fn hexagon_eigenmap_is_rotated_circle() {
        // Euclidean-normalized eigenvectors (symmetric form) carry the
        // 1/sqrt(3) coordinate magnitude exactly.
        let w = hexagon_weights();
        let sym = crate::graph::laplacian(&w, crate::graph::LaplacianKind::Symmetric).unwrap();
        let dec = crate::graph::spectral_decompose(&sym).unwrap();
        let map = eigenmap(&dec, 2).unwrap();
        // Expected coordinates at the sample angles, up to a block rotation.
        let mut expect = Matrix::zeros(6, 2);
        for i in 0..6 {
            let ang = 2.0 * PI * i as f64 / 6.0;
            expect.set(i, 0, ang.cos() / 3.0_f64.sqrt());
            expect.set(i, 1, ang.sin() / 3.0_f64.sqrt());
        }
        let blocks = dec.blocks_for_columns(1, 2);
        assert_eq!(blocks, vec![0..2]);
        let res = orthogonal_align(&expect, &map, false, &blocks).unwrap();
        assert!(res.residual <= 1e-10, "residual {}", res.residual);
        // All image points on a common circle.
        let norms: Vec<f64> = (0..6)
            .map(|i| (map.get(i, 0).powi(2) + map.get(i, 1).powi(2)).sqrt())
            .collect();
        for w in norms.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-10);
        }
        // The random-walk route differs only by the degree normalization
        // (the hexagon is regular), i.e. a single positive scale.
        let rw_map = eigenmap(&hexagon_rw(), 2).unwrap();
        let res_rw = orthogonal_align(&expect, &rw_map, true, &blocks).unwrap();
        assert!(res_rw.residual <= 1e-10);
        let degree = 1.0 + 2.0 * (-1.0_f64).exp();
        assert!((res_rw.scale - degree.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn single_column_eigenmap() {
        let dec = hexagon_rw();
        let map = eigenmap(&dec, 1).unwrap();
        for i in 0..6 {
            assert_eq!(map.get(i, 0), dec.eigenvectors.get(i, 1));
        }
        assert!(eigenmap(&dec, 6).is_err());
    }

    #[test]
    fn diffusion_map_scales_by_spectral_weight() {
        let dec = hexagon_rw();
        let plain = eigenmap(&dec, 2).unwrap();
        let tau0 = diffusion_map(&dec, 0.0, 2).unwrap();
        assert_eq!(plain, tau0);
        let lam = 1.0 - dec.eigenvalues[1];
        let tau1 = diffusion_map(&dec, 1.0, 2).unwrap();
        for i in 0..6 {
            for j in 0..2 {
                assert!((tau1.get(i, j) - lam * plain.get(i, j)).abs() < 1e-12);
            }
        }
        // The closed-form hexagon eigenvalue fixes the weight.
        let c = 2.0 * (-1.0_f64).exp() / (1.0 + 2.0 * (-1.0_f64).exp());
        assert!((lam - (1.0 - 0.5 * c)).abs() < 1e-10);
        let tau_big = diffusion_map(&dec, 250.0, 2).unwrap();
        assert!(tau_big.max_abs() < 1e-10);
    }

    #[test]
    fn alignment_identity_and_rotation() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.5]]).unwrap();
        let id = orthogonal_align(&a, &a, false, &[0..2]).unwrap();
        assert!(id.residual < 1e-14);
        assert!((id.scale - 1.0).abs() < 1e-14);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((id.rotation.get(i, j) - expect).abs() < 1e-12);
            }
        }
        // Rotate A by 90 degrees and recover it.
        let rot = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let b = a.matmul(&rot).unwrap();
        let rec = orthogonal_align(&a, &b, false, &[0..2]).unwrap();
        assert!(rec.residual <= 1e-12);
        let back = b.matmul(&rec.rotation).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert!((back.get(i, j) - a.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn alignment_recovers_scale() {
        let a = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0], vec![2.0, 2.0]]).unwrap();
        let b = a.scale(0.25);
        let res = orthogonal_align(&a, &b, true, &[0..1, 1..2]).unwrap();
        assert!((res.scale - 4.0).abs() < 1e-12);
        assert!(res.residual < 1e-12);
    }

    #[test]
    fn alignment_validates_blocks_and_shapes() {
        let a = Matrix::zeros(3, 2);
        let b = Matrix::zeros(4, 2);
        assert!(orthogonal_align(&a, &b, false, &[0..2]).is_err());
        let b2 = Matrix::zeros(3, 2);
        assert!(orthogonal_align(&a, &b2, false, &[0..1]).is_err());
        assert!(orthogonal_align(&a, &b2, false, &[0..2, 1..2]).is_err());
    }

    #[test]
    fn eigenmap_invariant_under_weight_scaling() {
        use crate::graph::{laplacian, spectral_decompose, LaplacianKind, WeightedGraph};
        let w = hexagon_weights();
        // Scaling by a power of two is exact in floating point, so the
        // normalized Laplacian and its Euclidean eigenmap are bitwise
        // unchanged.
        let half = WeightedGraph::from_weights(w.weights().scale(0.5), true).unwrap();
        let sym = laplacian(&w, LaplacianKind::Symmetric).unwrap();
        let sym_half = laplacian(&half, LaplacianKind::Symmetric).unwrap();
        assert_eq!(sym, sym_half);
        let base = eigenmap(&spectral_decompose(&sym).unwrap(), 2).unwrap();
        let map_half = eigenmap(&spectral_decompose(&sym_half).unwrap(), 2).unwrap();
        assert_eq!(base, map_half);
        // A non-dyadic scale perturbs matrix entries by rounding only; the
        // eigenmap agrees after aligning the degenerate block.
        let tri = WeightedGraph::from_weights(w.weights().scale(3.0), true).unwrap();
        let sym_tri = laplacian(&tri, LaplacianKind::Symmetric).unwrap();
        let map_tri = eigenmap(&spectral_decompose(&sym_tri).unwrap(), 2).unwrap();
        let res = orthogonal_align(&base, &map_tri, false, &[0..2]).unwrap();
        assert!(res.residual < 1e-12);
        // The random-walk route renormalizes in the degree-weighted inner
        // product, so tripling the weights shrinks the vectors by sqrt(3);
        // the map is unchanged up to that single scale.
        let rw_base = eigenmap(&rw_spectrum(&w).unwrap(), 2).unwrap();
        let rw_tri = eigenmap(&rw_spectrum(&tri).unwrap(), 2).unwrap();
        let res_rw = orthogonal_align(&rw_base, &rw_tri, true, &[0..2]).unwrap();
        assert!(res_rw.residual < 1e-12);
        assert!((res_rw.scale - 3.0_f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn alignment_json_shape() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let res = orthogonal_align(&a, &a, true, &[0..2]).unwrap();
        let doc = res.to_json();
        assert!((doc["scale"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(doc["residual"].as_f64().unwrap() < 1e-12);
        // Row-major identity rotation.
        let q: Vec<f64> = doc["Q"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        assert_eq!(q.len(), 4);
        assert!((q[0] - 1.0).abs() < 1e-12 && (q[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_basics() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.0];
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-14);
        let z = [4.0, 3.0, 2.0, 1.0];
        assert!((pearson(&x, &z).unwrap() + 1.0).abs() < 1e-14);
    }
}
