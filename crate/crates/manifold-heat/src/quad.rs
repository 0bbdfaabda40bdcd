//! Quadrature helpers: Gauss-Legendre rules and a periodic trapezoid rule.

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for the rule sizes used here (n <= ~20k).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with the `n`-point Gauss-Legendre rule.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Integrate with node doubling until two successive rules agree to
/// `rel_tol` (relative, with an absolute floor). Returns the value and the
/// last disagreement as a residual estimate.
pub fn integrate_doubling<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    start_nodes: usize,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<(f64, f64)> {
    let mut n = start_nodes.max(2);
    let mut prev = integrate_gl(f, a, b, n);
    let mut last_diff = f64::INFINITY;
    loop {
        n *= 2;
        if n > max_nodes {
            return Err(Error::Numeric {
                what: format!("quadrature did not converge with {max_nodes} nodes"),
                residual: last_diff,
            });
        }
        let cur = integrate_gl(f, a, b, n);
        last_diff = (cur - prev).abs();
        if last_diff <= rel_tol * cur.abs().max(1e-300) {
            return Ok((cur, last_diff));
        }
        prev = cur;
    }
}

/// Trapezoid rule for a periodic integrand sampled at `n` points over one
/// period starting at `a`. Spectrally accurate for smooth periodic `f`.
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(f: &F, a: f64, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    (0..n).map(|i| f(a + i as f64 * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gl_exact_for_polynomials() {
        // 5-point rule integrates degree <= 9 exactly.
        let f = |x: f64| 3.0 * x.powi(8) - x.powi(5) + 2.0 * x * x + 1.0;
        let got = integrate_gl(&f, -1.0, 1.0, 5);
        let expect = 3.0 * 2.0 / 9.0 + 2.0 * 2.0 / 3.0 + 2.0;
        assert!((got - expect).abs() < 1e-13);
    }

    #[test]
    fn doubling_converges_on_gaussian() {
        let f = |x: f64| (-x * x).exp();
        let (val, _) = integrate_doubling(&f, 0.0, 6.0, 8, 1e-12, 1 << 16).unwrap();
        assert!((val - 0.5 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn periodic_trapezoid_on_cosine() {
        let f = |x: f64| 1.0 + (3.0 * x).cos();
        let got = trapezoid_periodic(&f, 0.0, 2.0 * PI, 64);
        assert!((got - 2.0 * PI).abs() < 1e-12);
    }
}
