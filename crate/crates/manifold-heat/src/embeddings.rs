//! Eigenfunction embeddings of the analytic manifolds: the weighted
//! coordinate maps, their pullback metrics, lengths of embedded curves,
//! and the diffusion distance. The rescaled mode carries the prefactor
//! `sqrt(2) (4 pi)^{n/4} t^{(n+2)/4}` that makes the pullback metric
//! approach the Riemannian metric as `t -> 0`.

use crate::error::{Error, Result};
use crate::manifolds::{AnalyticManifold, EigenPair, Point, Tangent};
use std::f64::consts::PI;

/// Coordinate weighting conventions.
#[derive(Clone, Debug, PartialEq)]
pub enum EmbeddingMode {
    /// Coordinates `exp(-lambda_j t / 2) phi_j(x)`, no prefactor.
    Raw,
    /// Raw coordinates scaled by `sqrt(2) (4 pi)^{n/4} t^{(n+2)/4}`.
    Rescaled,
    /// Raw coordinates scaled by `sqrt(Vol(M))`.
    VolumeScaled,
    /// Raw coordinates normalized to the unit sphere of the truncated
    /// coordinate space.
    UnitSphere,
    /// Hand-picked eigenfunction coordinates, optionally time-weighted.
    /// Both conventions appear in practice, so both are exposed.
    Selective { indices: Vec<usize>, weighted: bool },
    /// Coordinates `exp(-lambda_j tau) phi_j(x)` (kernel-operator powers).
    Diffusion { tau: f64 },
}

/// A fully specified embedding: mode, time, and truncation width.
#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    pub mode: EmbeddingMode,
    pub t: f64,
    /// Number of nonconstant eigenfunctions (ignored for `Selective`,
    /// which carries its own index set).
    pub truncation: usize,
}

impl EmbeddingSpec {
    pub fn new(mode: EmbeddingMode, t: f64, truncation: usize) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("embedding time must be positive"));
        }
        match &mode {
            EmbeddingMode::Selective { indices, .. } => {
                if indices.is_empty() {
                    return Err(Error::domain(
                        "selective embedding needs a nonempty index set",
                    ));
                }
                if indices.contains(&0) {
                    return Err(Error::domain(
                        "selective indices address nonconstant eigenfunctions (index >= 1)",
                    ));
                }
            }
            EmbeddingMode::Diffusion { tau } => {
                if !(*tau > 0.0) || !tau.is_finite() {
                    return Err(Error::domain("diffusion time must be positive"));
                }
            }
            _ => {
                if truncation == 0 {
                    return Err(Error::domain("truncation must be at least 1"));
                }
            }
        }
        Ok(EmbeddingSpec {
            mode,
            t,
            truncation,
        })
    }

    /// Sorted eigenfunction indices used as coordinates.
    fn coordinate_indices(&self) -> Vec<usize> {
        match &self.mode {
            EmbeddingMode::Selective { indices, .. } => {
                let mut idx = indices.clone();
                idx.sort_unstable();
                idx.dedup();
                idx
            }
            _ => (1..=self.truncation).collect(),
        }
    }

    fn weight(&self, eigenvalue: f64) -> f64 {
        match &self.mode {
            EmbeddingMode::Raw
            | EmbeddingMode::Rescaled
            | EmbeddingMode::VolumeScaled
            | EmbeddingMode::UnitSphere => (-eigenvalue * self.t / 2.0).exp(),
            EmbeddingMode::Selective { weighted, .. } => {
                if *weighted {
                    (-eigenvalue * self.t / 2.0).exp()
                } else {
                    1.0
                }
            }
            EmbeddingMode::Diffusion { tau } => (-eigenvalue * tau).exp(),
        }
    }

    fn prefactor(&self, manifold: &AnalyticManifold) -> Result<f64> {
        match &self.mode {
            EmbeddingMode::Rescaled => {
                // Dimension comes from the manifold, never from the
                // truncation width.
                let n = manifold.dimension() as f64;
                Ok(2.0_f64.sqrt() * (4.0 * PI).powf(n / 4.0) * self.t.powf((n + 2.0) / 4.0))
            }
            EmbeddingMode::VolumeScaled => manifold
                .volume()
                .map(|v| v.sqrt())
                .ok_or_else(|| Error::unsupported("volume scaling needs a finite-volume variant")),
            _ => Ok(1.0),
        }
    }
}

fn pairs_for(manifold: &AnalyticManifold, indices: &[usize]) -> Result<Vec<EigenPair>> {
    let max_index = indices.iter().copied().max().unwrap_or(0);
    manifold.eigen_pairs(max_index + 1)
}

/// Image of one point under the embedding.
pub fn embed_point(
    manifold: &AnalyticManifold,
    x: &Point,
    spec: &EmbeddingSpec,
) -> Result<Vec<f64>> {
    let indices = spec.coordinate_indices();
    let pairs = pairs_for(manifold, &indices)?;
    let prefactor = spec.prefactor(manifold)?;
    let mut coords = Vec::with_capacity(indices.len());
    for &j in &indices {
        let pair = &pairs[j];
        coords.push(prefactor * spec.weight(pair.eigenvalue) * pair.evaluate(x)?);
    }
    if let EmbeddingMode::UnitSphere = spec.mode {
        let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Singularity(
                "zero coordinate vector cannot be normalized".into(),
            ));
        }
        for c in &mut coords {
            *c /= norm;
        }
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::Numeric {
            what: "embedding produced a non-finite coordinate".into(),
            residual: f64::NAN,
        });
    }
    Ok(coords)
}

/// Pullback of the ambient Euclidean metric under the embedding, applied
/// to a tangent vector: `prefactor^2 sum_j weight_j^2 |dphi_j v|^2`.
pub fn pullback_metric(
    manifold: &AnalyticManifold,
    x: &Point,
    v: &Tangent,
    spec: &EmbeddingSpec,
) -> Result<f64> {
    if matches!(spec.mode, EmbeddingMode::UnitSphere) {
        return Err(Error::unsupported(
            "pullback of the sphere-normalized embedding is not a weighted coordinate sum",
        ));
    }
    let indices = spec.coordinate_indices();
    let pairs = pairs_for(manifold, &indices)?;
    let prefactor = spec.prefactor(manifold)?;
    let mut sum = 0.0;
    for &j in &indices {
        let pair = &pairs[j];
        let w = spec.weight(pair.eigenvalue);
        let d = pair.gradient(x, v)?;
        sum += w * w * d * d;
    }
    Ok(prefactor * prefactor * sum)
}

/// Length of the image of a parametrized curve under the embedding.
///
/// `curve` maps a parameter in `[0, 1]` to a point and its velocity. The
/// integrand `sqrt(pullback)` is evaluated by the composite midpoint rule
/// starting from `samples` subintervals, doubling until two refinements
/// agree to 1e-9 relative (the integrands here are smooth), capped at
/// `2^20` subintervals.
pub fn embedded_curve_length<F>(
    manifold: &AnalyticManifold,
    curve: F,
    spec: &EmbeddingSpec,
    samples: usize,
) -> Result<f64>
where
    F: Fn(f64) -> (Point, Tangent),
{
    if samples < 2 {
        return Err(Error::domain("curve length needs at least 2 samples"));
    }
    let speed = |s: f64| -> Result<f64> {
        let (p, v) = curve(s);
        Ok(pullback_metric(manifold, &p, &v, spec)?.sqrt())
    };
    let midpoint = |n: usize| -> Result<f64> {
        let h = 1.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            acc += speed((i as f64 + 0.5) * h)?;
        }
        Ok(acc * h)
    };
    let mut n = samples;
    let mut prev = midpoint(n)?;
    let mut last_diff = f64::INFINITY;
    loop {
        n *= 2;
        if n > (1 << 20) {
            return Err(Error::Numeric {
                what: "curve length quadrature did not settle within the sample cap".into(),
                residual: last_diff,
            });
        }
        let cur = midpoint(n)?;
        last_diff = (cur - prev).abs();
        if last_diff <= 1e-9 * cur.abs().max(1e-30) {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Diffusion distance
/// `(sum_{j=1}^{n} exp(-2 lambda_j tau) (phi_j(x) - phi_j(y))^2)^{1/2}`;
/// equal to the Euclidean distance between raw embedding images at
/// `t = 2 tau`.
pub fn diffusion_distance(
    manifold: &AnalyticManifold,
    x: &Point,
    y: &Point,
    tau: f64,
    n: usize,
) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain("diffusion time must be positive"));
    }
    if n == 0 {
        return Err(Error::domain(
            "diffusion distance needs at least one coordinate",
        ));
    }
    let pairs = manifold.eigen_pairs(n + 1)?;
    let mut sum = 0.0;
    for pair in &pairs[1..] {
        let diff = pair.evaluate(x)? - pair.evaluate(y)?;
        sum += (-2.0 * pair.eigenvalue * tau).exp() * diff * diff;
    }
    Ok(sum.sqrt())
}

/// Full-circle curve on a circle manifold, for length checks.
pub fn full_circle_curve(s: f64) -> (Point, Tangent) {
    (Point::Angle(2.0 * PI * s), Tangent::Angle(2.0 * PI))
}
