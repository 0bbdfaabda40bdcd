//! Heat-trace evaluation and truncation budgeting: how many eigenvalue
//! terms a target time and tolerance require.

use crate::error::{Error, Result};
use crate::manifolds::AnalyticManifold;
use std::f64::consts::PI;

/// Cap on generated eigenvalues; a budget beyond this indicates misuse
/// (the requested time is too small for a sensible truncation).
const TERM_CAP: usize = 1_000_000;

/// A nondecreasing eigenvalue sequence: either one of the analytic model
/// spectra (which extend to arbitrarily many terms) or a finite list taken
/// from a matrix decomposition.
#[derive(Clone, Debug)]
pub enum Spectrum {
    Circle { radius: f64 },
    FlatTorus { a: f64, b: f64 },
    Finite(Vec<f64>),
}

impl Spectrum {
    pub fn circle(radius: f64) -> Result<Self> {
        if radius > 0.0 && radius.is_finite() {
            Ok(Spectrum::Circle { radius })
        } else {
            Err(Error::domain("circle radius must be positive"))
        }
    }

    pub fn flat_torus(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(Spectrum::FlatTorus { a, b })
        } else {
            Err(Error::domain("torus radii must be positive"))
        }
    }

    /// Wrap a finite eigenvalue list (validated nondecreasing, nonnegative,
    /// starting at zero).
    pub fn finite(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("finite spectrum must be nonempty"));
        }
        if values[0].abs() > 1e-8 {
            return Err(Error::domain("spectrum must start at the zero eigenvalue"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) || values.iter().any(|v| *v < -1e-12) {
            return Err(Error::domain(
                "spectrum must be nonnegative and nondecreasing",
            ));
        }
        Ok(Spectrum::Finite(values))
    }

    /// Analytic spectrum of a supported manifold variant.
    pub fn from_manifold(m: &AnalyticManifold) -> Result<Self> {
        match m {
            AnalyticManifold::Circle { radius } => Spectrum::circle(*radius),
            AnalyticManifold::FlatTorus { a, b } => Spectrum::flat_torus(*a, *b),
            _ => Err(Error::unsupported(
                "generated spectra cover circles and flat tori; use a finite list otherwise",
            )),
        }
    }

    /// First `count` eigenvalues, with multiplicity, in nondecreasing order.
    pub fn eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        match self {
            Spectrum::Circle { radius } => Ok((0..count)
                .map(|j| {
                    let freq = j.div_ceil(2) as f64;
                    (freq / radius) * (freq / radius)
                })
                .collect()),
            Spectrum::FlatTorus { a, b } => Ok(torus_eigenvalues(*a, *b, count)),
            Spectrum::Finite(values) => {
                if count > values.len() {
                    Err(Error::domain(format!(
                        "finite spectrum has {} eigenvalues, {count} requested",
                        values.len()
                    )))
                } else {
                    Ok(values[..count].to_vec())
                }
            }
        }
    }

    /// Full heat trace `sum_j exp(-lambda_j t)`, computed to machine
    /// precision (analytic variants use rapidly converging lattice sums;
    /// the omitted remainder is geometrically dominated and negligible).
    pub fn total_trace(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("time must be positive"));
        }
        match self {
            Spectrum::Circle { radius } => Ok(circle_theta_sum(*radius, t)),
            Spectrum::FlatTorus { a, b } => Ok(circle_theta_sum(*a, t) * circle_theta_sum(*b, t)),
            Spectrum::Finite(values) => Ok(values.iter().map(|l| (-l * t).exp()).sum()),
        }
    }
}

/// `sum_{m in Z} exp(-m^2 t / R^2)`, summed until terms fall below the
/// working precision of the running total.
fn circle_theta_sum(radius: f64, t: f64) -> f64 {
    let c = t / (radius * radius);
    let mut sum = 1.0;
    let mut m = 1.0_f64;
    loop {
        let term = (-m * m * c).exp();
        sum += 2.0 * term;
        if term < 1e-22 * sum {
            return sum;
        }
        m += 1.0;
    }
}

fn torus_eigenvalues(a: f64, b: f64, count: usize) -> Vec<f64> {
    let mut cutoff = (count as f64 + 16.0) / (a * b) + 4.0 / (a * a) + 4.0 / (b * b);
    loop {
        let mut values = Vec::new();
        let j_max = (a * cutoff.sqrt()).floor() as u64;
        let k_max = (b * cutoff.sqrt()).floor() as u64;
        for j in 0..=j_max {
            for k in 0..=k_max {
                let lambda = (j as f64 / a).powi(2) + (k as f64 / b).powi(2);
                if lambda > cutoff {
                    continue;
                }
                let mult = match (j, k) {
                    (0, 0) => 1,
                    (_, 0) | (0, _) => 2,
                    _ => 4,
                };
                for _ in 0..mult {
                    values.push(lambda);
                }
            }
        }
        if values.len() < count {
            cutoff *= 2.0;
            continue;
        }
        values.sort_by(|x, y| x.partial_cmp(y).unwrap());
        values.truncate(count);
        return values;
    }
}

/// A resolved truncation: the minimal index `n` whose tail falls under the
/// tolerance, together with the certified tail at that index.
#[derive(Clone, Copy, Debug)]
pub struct TruncationBudget {
    pub t: f64,
    pub tolerance: f64,
    pub truncation: usize,
    /// Tail `sum_{j > truncation} exp(-lambda_j t)` actually achieved.
    pub tail: f64,
}

/// Partial heat trace `sum_{j=0}^{n} exp(-lambda_j t)`.
pub fn heat_trace(spectrum: &Spectrum, t: f64, n: usize) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("time must be positive"));
    }
    let values = spectrum.eigenvalues(n + 1)?;
    Ok(values.iter().map(|l| (-l * t).exp()).sum())
}

/// Minimal truncation index `n` such that the infinite tail
/// `sum_{j > n} exp(-lambda_j t)` drops below `tolerance`.
///
/// The tail is the difference between the full trace (certified lattice
/// sum for analytic spectra, exact sum for finite ones) and the running
/// partial sum past the last kept term.
pub fn tail_trace_bound(spectrum: &Spectrum, t: f64, tolerance: f64) -> Result<TruncationBudget> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("time must be positive"));
    }
    if !(tolerance > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let total = spectrum.total_trace(t)?;
    let mut partial = 0.0;
    let mut chunk = 64usize;
    let mut consumed = 0usize;
    loop {
        let upto = (consumed + chunk).min(TERM_CAP);
        let values = match spectrum.eigenvalues(upto) {
            Ok(v) => v,
            // Finite spectra may run out of terms; the tail past the end is 0.
            Err(_) => match spectrum {
                Spectrum::Finite(values) => values.clone(),
                _ => return Err(Error::Budget("spectrum generator exhausted".into())),
            },
        };
        for (j, lambda) in values.iter().enumerate().skip(consumed) {
            partial += (-lambda * t).exp();
            let tail = (total - partial).max(0.0);
            if tail < tolerance {
                return Ok(TruncationBudget {
                    t,
                    tolerance,
                    truncation: j,
                    tail,
                });
            }
        }
        consumed = values.len();
        if consumed >= TERM_CAP {
            return Err(Error::Budget(format!(
                "tail still above tolerance after {TERM_CAP} eigenvalues; time {t} is too small"
            )));
        }
        if matches!(spectrum, Spectrum::Finite(v) if consumed >= v.len()) {
            // Exhausted a finite spectrum without the tail dropping under
            // tolerance: impossible since the final tail is zero.
            return Ok(TruncationBudget {
                t,
                tolerance,
                truncation: consumed - 1,
                tail: 0.0,
            });
        }
        chunk *= 2;
    }
}

/// Circle-only uniform truncation helper: on the circle the eigenfunctions
/// are uniformly bounded by `(pi R)^{-1/2}`, so the same trace tail that
/// certifies the L2 error also certifies the sup-norm error after dividing
/// by `pi R`. Returns the minimal index with sup-norm tail below `epsilon`.
pub fn circle_uniform_truncation(radius: f64, t: f64, epsilon: f64) -> Result<TruncationBudget> {
    let spectrum = Spectrum::circle(radius)?;
    // |phi_j(x) phi_j(y)| <= 1/(pi R), so sup tail <= trace tail / (pi R).
    tail_trace_bound(&spectrum, t, epsilon * PI * radius)
}
