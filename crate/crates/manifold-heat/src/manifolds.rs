//! Model manifolds with closed-form geometry: geodesic distances, explicit
//! eigenvalues and eigenfunctions, and heat kernels evaluated through
//! several independent representations (periodic image sums, truncated
//! eigenfunction sums, a hyperbolic closed form, and a singular-integral
//! quadrature) so each route can be checked against the others.

use crate::error::{Error, Result};
use crate::quad;
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// A model manifold with analytic spectral data.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticManifold {
    /// Circle of circumference `2*pi*radius`.
    Circle { radius: f64 },
    /// Flat torus: product of circles with radii `a` and `b`, coordinates
    /// `(theta, phi)`.
    FlatTorus { a: f64, b: f64 },
    /// Unit round 2-sphere in the `(theta, phi)` chart with `phi` the polar
    /// angle in `[0, pi]` and `theta` the azimuth.
    Sphere2,
    /// Hyperbolic plane; points are arc-length coordinates on a geodesic.
    Hyperbolic2,
    /// Hyperbolic 3-space; points are arc-length coordinates on a geodesic.
    Hyperbolic3,
    /// Simply connected space of constant curvature `kappa != 0` in
    /// dimension 2 or 3.
    ConstantCurvature { kappa: f64, dim: u32 },
}

/// A point in the chart of one manifold variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    /// Angle on a circle (any finite value; reduced mod `2*pi`).
    Angle(f64),
    /// Torus angles.
    Torus { theta: f64, phi: f64 },
    /// Sphere chart: azimuth `theta`, polar angle `phi` in `[0, pi]`.
    Sphere { theta: f64, phi: f64 },
    /// Signed arc-length coordinate along a geodesic (hyperbolic and
    /// constant-curvature variants).
    Geodesic(f64),
}

/// Tangent vector expressed in the coordinate basis of the chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tangent {
    Angle(f64),
    Torus { theta: f64, phi: f64 },
    Sphere { theta: f64, phi: f64 },
}

/// How to evaluate a heat kernel.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelMethod {
    /// Periodic image sum with images `|m| <= images` (flat variants).
    ImageSum { images: usize },
    /// Truncated eigenfunction sum over indices `0..=truncation`.
    EigenSum { truncation: usize },
    /// Closed form (hyperbolic 3-space).
    ClosedForm,
    /// Singular-integral quadrature (hyperbolic plane); `nodes` is the
    /// starting rule size, doubled until two evaluations agree.
    Quadrature { nodes: usize },
}

impl KernelMethod {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            KernelMethod::ImageSum { images } => *images >= 1,
            KernelMethod::EigenSum { truncation } => *truncation >= 1,
            KernelMethod::ClosedForm => true,
            KernelMethod::Quadrature { nodes } => *nodes >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("kernel method parameter must be positive"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum AngularFactor {
    One,
    Sin(u32),
    Cos(u32),
}

impl AngularFactor {
    fn value(self, x: f64) -> f64 {
        match self {
            AngularFactor::One => 1.0,
            AngularFactor::Sin(j) => (j as f64 * x).sin(),
            AngularFactor::Cos(j) => (j as f64 * x).cos(),
        }
    }

    fn derivative(self, x: f64) -> f64 {
        match self {
            AngularFactor::One => 0.0,
            AngularFactor::Sin(j) => j as f64 * (j as f64 * x).cos(),
            AngularFactor::Cos(j) => -(j as f64) * (j as f64 * x).sin(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum SphereAxis {
    X,
    Y,
    Z,
}

/// One orthonormal eigenfunction together with its eigenvalue and the total
/// multiplicity of that eigenvalue.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    function: EigenFunction,
}

#[derive(Clone, Debug)]
enum EigenFunction {
    Constant(f64),
    Circle {
        factor: AngularFactor,
        norm: f64,
    },
    Torus {
        f_theta: AngularFactor,
        f_phi: AngularFactor,
        norm: f64,
    },
    Sphere {
        axis: SphereAxis,
        norm: f64,
    },
}

impl EigenPair {
    /// Evaluate the eigenfunction at a point of the owning manifold.
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        match (&self.function, p) {
            (EigenFunction::Constant(c), _) => Ok(*c),
            (EigenFunction::Circle { factor, norm }, Point::Angle(theta)) => {
                Ok(norm * factor.value(*theta))
            }
            (
                EigenFunction::Torus {
                    f_theta,
                    f_phi,
                    norm,
                },
                Point::Torus { theta, phi },
            ) => Ok(norm * f_theta.value(*theta) * f_phi.value(*phi)),
            (EigenFunction::Sphere { axis, norm }, Point::Sphere { theta, phi }) => {
                let v = match axis {
                    SphereAxis::X => phi.sin() * theta.cos(),
                    SphereAxis::Y => phi.sin() * theta.sin(),
                    SphereAxis::Z => phi.cos(),
                };
                Ok(norm * v)
            }
            _ => Err(Error::domain(
                "point kind does not match eigenfunction chart",
            )),
        }
    }

    /// Apply the differential of the eigenfunction to a tangent vector.
    pub fn gradient(&self, p: &Point, v: &Tangent) -> Result<f64> {
        match (&self.function, p, v) {
            (EigenFunction::Constant(_), _, _) => Ok(0.0),
            (EigenFunction::Circle { factor, norm }, Point::Angle(theta), Tangent::Angle(vt)) => {
                Ok(norm * factor.derivative(*theta) * vt)
            }
            (
                EigenFunction::Torus {
                    f_theta,
                    f_phi,
                    norm,
                },
                Point::Torus { theta, phi },
                Tangent::Torus { theta: vt, phi: vp },
            ) => Ok(norm
                * (f_theta.derivative(*theta) * f_phi.value(*phi) * vt
                    + f_theta.value(*theta) * f_phi.derivative(*phi) * vp)),
            (
                EigenFunction::Sphere { axis, norm },
                Point::Sphere { theta, phi },
                Tangent::Sphere { theta: vt, phi: vp },
            ) => {
                let d = match axis {
                    SphereAxis::X => phi.cos() * theta.cos() * vp - phi.sin() * theta.sin() * vt,
                    SphereAxis::Y => phi.cos() * theta.sin() * vp + phi.sin() * theta.cos() * vt,
                    SphereAxis::Z => -phi.sin() * vp,
                };
                Ok(norm * d)
            }
            _ => Err(Error::domain(
                "tangent kind does not match eigenfunction chart",
            )),
        }
    }
}

fn normalize_angle(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("angle must be finite"));
    }
    Ok(x.rem_euclid(TAU))
}

/// Principal angular difference in `[-pi, pi)`.
fn principal_difference(a: f64, b: f64) -> Result<f64> {
    let mut d = normalize_angle(a)? - normalize_angle(b)?;
    if d >= PI {
        d -= TAU;
    } else if d < -PI {
        d += TAU;
    }
    Ok(d)
}

/// Stable `x / sinh(x)`; equals 1 at `x = 0`.
fn x_over_sinh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x / x.sinh()
    }
}

/// Stable `sinh(x) / x`; equals 1 at `x = 0`.
fn sinhc(x: f64) -> f64 {
    let a = x.abs();
    if a < 1e-8 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

fn log_sum_exp(exponents: &[f64]) -> f64 {
    let mx = exponents.iter().fold(f64::NEG_INFINITY, |m, &e| m.max(e));
    if !mx.is_finite() {
        return mx;
    }
    mx + exponents.iter().map(|&e| (e - mx).exp()).sum::<f64>().ln()
}

impl AnalyticManifold {
    pub fn circle(radius: f64) -> Result<Self> {
        if radius > 0.0 && radius.is_finite() {
            Ok(AnalyticManifold::Circle { radius })
        } else {
            Err(Error::domain("circle radius must be positive"))
        }
    }

    pub fn flat_torus(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(AnalyticManifold::FlatTorus { a, b })
        } else {
            Err(Error::domain("torus radii must be positive"))
        }
    }

    pub fn constant_curvature(kappa: f64, dim: u32) -> Result<Self> {
        if kappa == 0.0 || !kappa.is_finite() {
            return Err(Error::domain("curvature must be nonzero and finite"));
        }
        if dim != 2 && dim != 3 {
            return Err(Error::unsupported(
                "constant curvature supported in dimensions 2 and 3",
            ));
        }
        Ok(AnalyticManifold::ConstantCurvature { kappa, dim })
    }

    pub fn dimension(&self) -> u32 {
        match self {
            AnalyticManifold::Circle { .. } => 1,
            AnalyticManifold::FlatTorus { .. } | AnalyticManifold::Sphere2 => 2,
            AnalyticManifold::Hyperbolic2 => 2,
            AnalyticManifold::Hyperbolic3 => 3,
            AnalyticManifold::ConstantCurvature { dim, .. } => *dim,
        }
    }

    /// Total volume, when finite.
    pub fn volume(&self) -> Option<f64> {
        match self {
            AnalyticManifold::Circle { radius } => Some(TAU * radius),
            AnalyticManifold::FlatTorus { a, b } => Some(4.0 * PI * PI * a * b),
            AnalyticManifold::Sphere2 => Some(4.0 * PI),
            AnalyticManifold::ConstantCurvature { kappa, dim: 2 } if *kappa > 0.0 => {
                Some(4.0 * PI / kappa)
            }
            _ => None,
        }
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (AnalyticManifold::Circle { .. }, Point::Angle(x)) => normalize_angle(*x).map(|_| ()),
            (AnalyticManifold::FlatTorus { .. }, Point::Torus { theta, phi }) => {
                normalize_angle(*theta)?;
                normalize_angle(*phi)?;
                Ok(())
            }
            (AnalyticManifold::Sphere2, Point::Sphere { theta, phi }) => {
                normalize_angle(*theta)?;
                if !phi.is_finite() || *phi < 0.0 || *phi > PI {
                    Err(Error::domain("sphere polar angle must lie in [0, pi]"))
                } else {
                    Ok(())
                }
            }
            (
                AnalyticManifold::Hyperbolic2
                | AnalyticManifold::Hyperbolic3
                | AnalyticManifold::ConstantCurvature { .. },
                Point::Geodesic(s),
            ) => {
                if s.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("geodesic coordinate must be finite"))
                }
            }
            _ => Err(Error::domain("point kind does not match manifold chart")),
        }
    }

    /// Riemannian distance between two chart points.
    pub fn geodesic_distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        match (self, p, q) {
            (AnalyticManifold::Circle { radius }, Point::Angle(a), Point::Angle(b)) => {
                Ok(radius * principal_difference(*a, *b)?.abs())
            }
            (
                AnalyticManifold::FlatTorus { a, b },
                Point::Torus { theta: t1, phi: p1 },
                Point::Torus { theta: t2, phi: p2 },
            ) => {
                let da = a * principal_difference(*t1, *t2)?.abs();
                let db = b * principal_difference(*p1, *p2)?.abs();
                Ok(da.hypot(db))
            }
            (
                AnalyticManifold::Sphere2,
                Point::Sphere { theta: t1, phi: p1 },
                Point::Sphere { theta: t2, phi: p2 },
            ) => {
                let u = sphere_unit(*t1, *p1);
                let v = sphere_unit(*t2, *p2);
                let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
                let cx = u[1] * v[2] - u[2] * v[1];
                let cy = u[2] * v[0] - u[0] * v[2];
                let cz = u[0] * v[1] - u[1] * v[0];
                let cross = (cx * cx + cy * cy + cz * cz).sqrt();
                Ok(cross.atan2(dot))
            }
            (_, Point::Geodesic(s1), Point::Geodesic(s2)) => Ok((s1 - s2).abs()),
            _ => unreachable!("check_point already matched chart kinds"),
        }
    }

    /// First `count` eigenpairs in nondecreasing eigenvalue order.
    ///
    /// The within-eigenspace order is fixed: sine precedes cosine, and on
    /// tori the groups sharing an eigenvalue are ordered by increasing
    /// second frequency so that purely `theta`-dependent functions come
    /// first. Hyperbolic variants have continuous spectrum and are
    /// rejected; the sphere exposes only the constant and the first band.
    pub fn eigen_pairs(&self, count: usize) -> Result<Vec<EigenPair>> {
        if count == 0 {
            return Err(Error::domain("eigenpair count must be at least 1"));
        }
        match self {
            AnalyticManifold::Circle { radius } => Ok(circle_pairs(*radius, count)),
            AnalyticManifold::FlatTorus { a, b } => Ok(torus_pairs(*a, *b, count)),
            AnalyticManifold::Sphere2 => sphere_pairs(count),
            _ => Err(Error::unsupported(
                "eigenfunction enumeration needs a compact variant (circle, torus, sphere)",
            )),
        }
    }

    /// Heat kernel evaluated by the requested method.
    pub fn heat_kernel(&self, p: &Point, q: &Point, t: f64, method: &KernelMethod) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("time must be positive"));
        }
        method.validate()?;
        self.check_point(p)?;
        self.check_point(q)?;
        match (self, method) {
            (AnalyticManifold::Circle { radius }, KernelMethod::ImageSum { images }) => {
                let (Point::Angle(a), Point::Angle(b)) = (p, q) else {
                    unreachable!()
                };
                circle_image_sum(*radius, principal_difference(*a, *b)?, t, *images)
            }
            (AnalyticManifold::FlatTorus { a, b }, KernelMethod::ImageSum { images }) => {
                let (Point::Torus { theta: t1, phi: p1 }, Point::Torus { theta: t2, phi: p2 }) =
                    (p, q)
                else {
                    unreachable!()
                };
                torus_image_sum(
                    *a,
                    *b,
                    principal_difference(*t1, *t2)?,
                    principal_difference(*p1, *p2)?,
                    t,
                    *images,
                )
            }
            (
                AnalyticManifold::Circle { .. }
                | AnalyticManifold::FlatTorus { .. }
                | AnalyticManifold::Sphere2,
                KernelMethod::EigenSum { truncation },
            ) => self.eigen_sum_kernel(p, q, t, *truncation),
            (AnalyticManifold::Hyperbolic3, KernelMethod::ClosedForm) => {
                Ok(h3_closed_form(self.geodesic_distance(p, q)?, t))
            }
            (AnalyticManifold::Hyperbolic2, KernelMethod::Quadrature { nodes }) => {
                h2_quadrature(self.geodesic_distance(p, q)?, t, *nodes, 1e-10)
            }
            (AnalyticManifold::ConstantCurvature { kappa, dim }, m) => {
                let s = self.geodesic_distance(p, q)?;
                match (kappa.signum() as i32, dim, m) {
                    (-1, 3, KernelMethod::ClosedForm)
                    | (-1, 2, KernelMethod::Quadrature { .. })
                    | (1, 2, KernelMethod::EigenSum { .. }) => {
                        constant_curvature_kernel(*kappa, *dim, s, t)
                    }
                    _ => Err(Error::unsupported(
                        "kernel method not available for this curvature/dimension",
                    )),
                }
            }
            _ => Err(Error::unsupported(
                "kernel method not available for this variant",
            )),
        }
    }

    /// Truncated eigenfunction sum over indices `0..=truncation`.
    pub fn eigen_sum_kernel(&self, p: &Point, q: &Point, t: f64, truncation: usize) -> Result<f64> {
        let pairs = self.eigen_pairs(truncation + 1)?;
        let mut sum = 0.0;
        for pair in &pairs {
            sum += (-pair.eigenvalue * t).exp() * pair.evaluate(p)? * pair.evaluate(q)?;
        }
        Ok(sum)
    }

    /// Natural log of the heat kernel, evaluated with a per-variant method
    /// whose truncation keeps the relative kernel error near 1e-14. Stays
    /// finite deep in the small-`t` regime where the kernel itself
    /// underflows.
    pub fn log_heat_kernel(&self, p: &Point, q: &Point, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("time must be positive"));
        }
        self.check_point(p)?;
        self.check_point(q)?;
        match self {
            AnalyticManifold::Circle { radius } => {
                let (Point::Angle(a), Point::Angle(b)) = (p, q) else {
                    unreachable!()
                };
                Ok(circle_image_log(*radius, principal_difference(*a, *b)?, t))
            }
            AnalyticManifold::FlatTorus { a, b } => {
                let (Point::Torus { theta: t1, phi: p1 }, Point::Torus { theta: t2, phi: p2 }) =
                    (p, q)
                else {
                    unreachable!()
                };
                // The kernel factors exactly over the two circle factors.
                Ok(circle_image_log(*a, principal_difference(*t1, *t2)?, t)
                    + circle_image_log(*b, principal_difference(*p1, *p2)?, t))
            }
            AnalyticManifold::Hyperbolic3 => Ok(h3_log(self.geodesic_distance(p, q)?, t)),
            AnalyticManifold::Hyperbolic2 => {
                h2_quadrature_log(self.geodesic_distance(p, q)?, t, 64, 1e-14)
            }
            AnalyticManifold::ConstantCurvature { kappa, dim } if *kappa < 0.0 => {
                let s = self.geodesic_distance(p, q)?;
                let a = -kappa;
                let base = match dim {
                    3 => h3_log(a.sqrt() * s, a * t),
                    2 => h2_quadrature_log(a.sqrt() * s, a * t, 64, 1e-14)?,
                    _ => unreachable!(),
                };
                Ok((*dim as f64 / 2.0) * a.ln() + base)
            }
            _ => Err(Error::unsupported(
                "exact log-kernel not available for this variant",
            )),
        }
    }
}

/// Interpret a flat coordinate slice in the chart of a manifold: one angle
/// for circles, `(theta, phi)` for tori and spheres, one arc-length
/// coordinate for hyperbolic and constant-curvature variants.
pub fn point_from_coords(manifold: &AnalyticManifold, coords: &[f64]) -> Result<Point> {
    let point = match (manifold, coords) {
        (AnalyticManifold::Circle { .. }, [theta]) => Point::Angle(*theta),
        (AnalyticManifold::FlatTorus { .. }, [theta, phi]) => Point::Torus {
            theta: *theta,
            phi: *phi,
        },
        (AnalyticManifold::Sphere2, [theta, phi]) => Point::Sphere {
            theta: *theta,
            phi: *phi,
        },
        (
            AnalyticManifold::Hyperbolic2
            | AnalyticManifold::Hyperbolic3
            | AnalyticManifold::ConstantCurvature { .. },
            [s],
        ) => Point::Geodesic(*s),
        _ => {
            return Err(Error::domain(format!(
                "coordinate count {} does not fit the manifold chart",
                coords.len()
            )))
        }
    };
    manifold.check_point(&point)?;
    Ok(point)
}

fn sphere_unit(theta: f64, phi: f64) -> [f64; 3] {
    [phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]
}

fn circle_pairs(radius: f64, count: usize) -> Vec<EigenPair> {
    let mut out = Vec::with_capacity(count);
    out.push(EigenPair {
        eigenvalue: 0.0,
        multiplicity: 1,
        function: EigenFunction::Constant(1.0 / (TAU * radius).sqrt()),
    });
    let norm = 1.0 / (PI * radius).sqrt();
    let mut j = 1u32;
    while out.len() < count {
        let lambda = (j as f64 / radius) * (j as f64 / radius);
        for factor in [AngularFactor::Sin(j), AngularFactor::Cos(j)] {
            if out.len() == count {
                break;
            }
            out.push(EigenPair {
                eigenvalue: lambda,
                multiplicity: 2,
                function: EigenFunction::Circle { factor, norm },
            });
        }
        j += 1;
    }
    out
}

fn torus_pairs(a: f64, b: f64, count: usize) -> Vec<EigenPair> {
    // Gather frequency pairs with eigenvalue below a growing cutoff until
    // enough functions are available, then order them.
    let mut cutoff = (count as f64 + 16.0) / (a * b) + 4.0 / (a * a) + 4.0 / (b * b);
    loop {
        let mut groups: Vec<(f64, u32, u32)> = Vec::new();
        let j_max = (a * cutoff.sqrt()).floor() as u32;
        let k_max = (b * cutoff.sqrt()).floor() as u32;
        for j in 0..=j_max {
            for k in 0..=k_max {
                let lambda = (j as f64 / a).powi(2) + (k as f64 / b).powi(2);
                if lambda <= cutoff {
                    groups.push((lambda, j, k));
                }
            }
        }
        let total: usize = groups.iter().map(|&(_, j, k)| group_size(j, k)).sum();
        if total < count {
            cutoff *= 2.0;
            continue;
        }
        // Eigenvalue ascending; among equal eigenvalues the group with the
        // smaller second frequency first, so theta-only functions precede
        // phi-dependent ones.
        groups.sort_by(|x, y| {
            x.0.partial_cmp(&y.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.2.cmp(&y.2))
                .then(x.1.cmp(&y.1))
        });
        // Total multiplicity of each eigenvalue class.
        let mut multiplicity = vec![0usize; groups.len()];
        let mut i = 0;
        while i < groups.len() {
            let mut j = i;
            let mut m = 0;
            while j < groups.len() && eigen_close(groups[j].0, groups[i].0) {
                m += group_size(groups[j].1, groups[j].2);
                j += 1;
            }
            for slot in multiplicity.iter_mut().take(j).skip(i) {
                *slot = m;
            }
            i = j;
        }
        let mut out = Vec::with_capacity(count);
        'fill: for (g, &(lambda, j, k)) in groups.iter().enumerate() {
            for function in torus_group_functions(a, b, j, k) {
                if out.len() == count {
                    break 'fill;
                }
                out.push(EigenPair {
                    eigenvalue: lambda,
                    multiplicity: multiplicity[g],
                    function,
                });
            }
        }
        return out;
    }
}

fn eigen_close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

fn group_size(j: u32, k: u32) -> usize {
    match (j, k) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 2,
        _ => 4,
    }
}

fn torus_group_functions(a: f64, b: f64, j: u32, k: u32) -> Vec<EigenFunction> {
    use AngularFactor::{Cos, One, Sin};
    match (j, k) {
        (0, 0) => vec![EigenFunction::Constant(1.0 / (TAU * (a * b).sqrt()))],
        (j, 0) => {
            let norm = 1.0 / (PI * (2.0 * a * b).sqrt());
            vec![
                EigenFunction::Torus {
                    f_theta: Sin(j),
                    f_phi: One,
                    norm,
                },
                EigenFunction::Torus {
                    f_theta: Cos(j),
                    f_phi: One,
                    norm,
                },
            ]
        }
        (0, k) => {
            let norm = 1.0 / (PI * (2.0 * a * b).sqrt());
            vec![
                EigenFunction::Torus {
                    f_theta: One,
                    f_phi: Sin(k),
                    norm,
                },
                EigenFunction::Torus {
                    f_theta: One,
                    f_phi: Cos(k),
                    norm,
                },
            ]
        }
        (j, k) => {
            let norm = 1.0 / (PI * (a * b).sqrt());
            vec![
                EigenFunction::Torus {
                    f_theta: Sin(j),
                    f_phi: Sin(k),
                    norm,
                },
                EigenFunction::Torus {
                    f_theta: Sin(j),
                    f_phi: Cos(k),
                    norm,
                },
                EigenFunction::Torus {
                    f_theta: Cos(j),
                    f_phi: Sin(k),
                    norm,
                },
                EigenFunction::Torus {
                    f_theta: Cos(j),
                    f_phi: Cos(k),
                    norm,
                },
            ]
        }
    }
}

fn sphere_pairs(count: usize) -> Result<Vec<EigenPair>> {
    if count > 4 {
        return Err(Error::unsupported(
            "sphere eigenfunctions are available for the constant and first band only (4 functions)",
        ));
    }
    // The band-1 normalizer comes from the normalization integral together
    // with X^2 + Y^2 + Z^2 = 1: each coordinate integrates to Vol/3.
    let norm = (3.0 / (4.0 * PI)).sqrt();
    let mut out = vec![EigenPair {
        eigenvalue: 0.0,
        multiplicity: 1,
        function: EigenFunction::Constant(1.0 / (4.0 * PI).sqrt()),
    }];
    for axis in [SphereAxis::X, SphereAxis::Y, SphereAxis::Z] {
        out.push(EigenPair {
            eigenvalue: 2.0,
            multiplicity: 3,
            function: EigenFunction::Sphere { axis, norm },
        });
    }
    out.truncate(count);
    Ok(out)
}

/// Periodic image sum for the circle kernel. The omitted tail is bounded by
/// `2 exp(-(2 pi m R - D)^2 / 4t)` and must come out below 1e-14.
///
/// Evaluated on `|delta|` so swapping the endpoints reproduces the exact
/// same floating-point sum.
fn circle_image_sum(radius: f64, delta: f64, t: f64, images: usize) -> Result<f64> {
    let delta = delta.abs();
    let tail = circle_image_tail_bound(radius, delta, t, images);
    if !(tail < 1e-14) {
        return Err(Error::Numeric {
            what: format!("image sum with {images} images leaves tail above 1e-14"),
            residual: tail,
        });
    }
    let m = images as i64;
    let mut sum = 0.0;
    for i in -m..=m {
        let x = (delta + TAU * i as f64) * radius;
        sum += (-x * x / (4.0 * t)).exp();
    }
    Ok(sum / (4.0 * PI * t).sqrt())
}

fn circle_image_tail_bound(radius: f64, delta: f64, t: f64, images: usize) -> f64 {
    let d = delta.abs() * radius;
    let gap = TAU * images as f64 * radius - d;
    2.0 * (-gap * gap / (4.0 * t)).exp()
}

/// Log of the circle kernel by adaptive log-sum-exp over images; the image
/// range grows until added exponents are 46 e-folds below the maximum.
fn circle_image_log(radius: f64, delta: f64, t: f64) -> f64 {
    let delta = delta.abs();
    let expo = |m: i64| {
        let x = (delta + TAU * m as f64) * radius;
        -x * x / (4.0 * t)
    };
    let mut exps = vec![expo(0)];
    let mut max_seen = exps[0];
    for sign in [1i64, -1] {
        let mut m = sign;
        loop {
            let e = expo(m);
            max_seen = max_seen.max(e);
            if e < max_seen - 46.0 {
                break;
            }
            exps.push(e);
            m += sign;
        }
    }
    log_sum_exp(&exps) - 0.5 * (4.0 * PI * t).ln()
}

fn torus_image_sum(a: f64, b: f64, d_theta: f64, d_phi: f64, t: f64, images: usize) -> Result<f64> {
    let (d_theta, d_phi) = (d_theta.abs(), d_phi.abs());
    for (radius, delta) in [(a, d_theta), (b, d_phi)] {
        let tail = circle_image_tail_bound(radius, delta, t, images);
        if !(tail < 1e-14) {
            return Err(Error::Numeric {
                what: format!("torus image sum with {images} images leaves tail above 1e-14"),
                residual: tail,
            });
        }
    }
    let m = images as i64;
    let mut sum = 0.0;
    for i in -m..=m {
        let xa = (d_theta + TAU * i as f64) * a;
        for j in -m..=m {
            let xb = (d_phi + TAU * j as f64) * b;
            sum += (-(xa * xa + xb * xb) / (4.0 * t)).exp();
        }
    }
    Ok(sum / (4.0 * PI * t))
}

/// Hyperbolic 3-space heat kernel in closed form:
/// `(4 pi t)^{-3/2} (s / sinh s) exp(-t - s^2 / 4t)`.
pub fn h3_closed_form(s: f64, t: f64) -> f64 {
    (4.0 * PI * t).powf(-1.5) * x_over_sinh(s) * (-t - s * s / (4.0 * t)).exp()
}

fn h3_log(s: f64, t: f64) -> f64 {
    -1.5 * (4.0 * PI * t).ln() + x_over_sinh(s).ln() - t - s * s / (4.0 * t)
}

/// One step of the odd-dimension recurrence, from the real-line Gaussian
/// (`base_dim = 1`) up to hyperbolic 3-space:
/// `h(s) = -(exp(-t) / (2 pi sinh s)) d/ds [(4 pi t)^{-1/2} exp(-s^2/4t)]`.
///
/// The radial derivative is taken analytically; `s = 0` is a genuine
/// singularity of the recurrence (the closed form stays finite there).
pub fn millson_step(base_dim: u32, s: f64, t: f64) -> Result<f64> {
    if base_dim != 1 {
        return Err(Error::unsupported(
            "recurrence step implemented from the one-dimensional Gaussian base only",
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("time must be positive"));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Singularity(
            "recurrence divides by sinh(s); separation must be positive".into(),
        ));
    }
    let gaussian = (4.0 * PI * t).powf(-0.5) * (-s * s / (4.0 * t)).exp();
    let d_gaussian_ds = -(s / (2.0 * t)) * gaussian;
    Ok(-((-t).exp() / (TAU * s.sinh())) * d_gaussian_ds)
}

/// Hyperbolic-plane heat kernel by quadrature of the singular integral
///
/// `sqrt(2) (4 pi t)^{-3/2} e^{-t/4} \int_s^inf u e^{-u^2/4t}
///  (cosh u - cosh s)^{-1/2} du`.
///
/// The substitution `u = s + v^2` removes the inverse-square-root
/// singularity; `cosh u - cosh s` is evaluated as
/// `2 sinh(s + v^2/2) sinh(v^2/2)` to avoid cancellation. Nodes double
/// until two rules agree to `rel_tol`.
pub fn h2_quadrature(s: f64, t: f64, start_nodes: usize, rel_tol: f64) -> Result<f64> {
    let (reduced, _) = h2_reduced_integral(s, t, start_nodes, rel_tol)?;
    Ok(2.0_f64.sqrt() * (4.0 * PI * t).powf(-1.5) * (-t / 4.0 - s * s / (4.0 * t)).exp() * reduced)
}

fn h2_quadrature_log(s: f64, t: f64, start_nodes: usize, rel_tol: f64) -> Result<f64> {
    let (reduced, _) = h2_reduced_integral(s, t, start_nodes, rel_tol)?;
    Ok(0.5 * 2.0_f64.ln() - 1.5 * (4.0 * PI * t).ln() - t / 4.0 - s * s / (4.0 * t) + reduced.ln())
}

fn h2_reduced_integral(s: f64, t: f64, start_nodes: usize, rel_tol: f64) -> Result<(f64, f64)> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::domain("separation must be nonnegative"));
    }
    // Reduced integrand with exp(-s^2/4t) factored out; decays like
    // exp(-(2s + v^2) v^2 / 4t), cut where that factor reaches e^-150.
    let v_max = ((s * s + 600.0 * t).sqrt() - s).sqrt();
    let f = move |v: f64| {
        let u = s + v * v;
        let growth = (u * u - s * s) / (4.0 * t);
        let q = (s + v * v / 2.0).sinh() * sinhc(v * v / 2.0);
        2.0 * u * (-growth).exp() / q.sqrt()
    };
    quad::integrate_doubling(&f, 0.0, v_max, start_nodes, rel_tol, 1 << 20)
}

/// Heat kernel of the simply connected space of constant curvature `kappa`
/// at separation `s`: for negative curvature this rescales the hyperbolic
/// kernels, `|k|^{n/2} h^{H^n}_{|k| t}(|k|^{1/2} s)`. Positive curvature is
/// served in dimension 2 only, through the sphere's first-band partial sum,
/// and is approximate by construction.
pub fn constant_curvature_kernel(kappa: f64, dim: u32, s: f64, t: f64) -> Result<f64> {
    if kappa == 0.0 || !kappa.is_finite() {
        return Err(Error::domain("curvature must be nonzero"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("time must be positive"));
    }
    if s < 0.0 || !s.is_finite() {
        return Err(Error::domain("separation must be nonnegative"));
    }
    if kappa < 0.0 {
        let a = -kappa;
        match dim {
            3 => Ok(a.powf(1.5) * h3_closed_form(a.sqrt() * s, a * t)),
            2 => Ok(a * h2_quadrature(a.sqrt() * s, a * t, 64, 1e-12)?),
            _ => Err(Error::unsupported(
                "negative curvature kernels cover dimensions 2 and 3",
            )),
        }
    } else {
        match dim {
            2 => {
                let d = kappa.sqrt() * s;
                if d > PI {
                    return Err(Error::domain(
                        "separation exceeds the diameter of the positively curved space",
                    ));
                }
                // First-band partial sum on the unit sphere, rescaled.
                let tp = kappa * t;
                Ok(kappa * ((4.0 * PI).recip() + 3.0 / (4.0 * PI) * (-2.0 * tp).exp() * d.cos()))
            }
            _ => Err(Error::unsupported(
                "positive curvature is served in dimension 2 only (first-band approximation)",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle1() -> AnalyticManifold {
        AnalyticManifold::circle(1.0).unwrap()
    }

    #[test]
    fn circle_distance_takes_smaller_arc() {
        let m = circle1();
        let d = m
            .geodesic_distance(&Point::Angle(0.0), &Point::Angle(3.0 * PI / 2.0))
            .unwrap();
        assert!((d - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn torus_distances_add_in_squares() {
        let m = AnalyticManifold::flat_torus(1.0, 1.0).unwrap();
        let d = m
            .geodesic_distance(
                &Point::Torus {
                    theta: 0.0,
                    phi: 0.0,
                },
                &Point::Torus { theta: PI, phi: PI },
            )
            .unwrap();
        assert!((d - PI * 2.0_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sphere_quarter_arc_from_pole() {
        let m = AnalyticManifold::Sphere2;
        let d = m
            .geodesic_distance(
                &Point::Sphere {
                    theta: 0.0,
                    phi: 0.0,
                },
                &Point::Sphere {
                    theta: 1.3,
                    phi: PI / 2.0,
                },
            )
            .unwrap();
        assert!((d - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_rejects_polar_angle_outside_chart() {
        let m = AnalyticManifold::Sphere2;
        let bad = Point::Sphere {
            theta: 0.0,
            phi: 3.5,
        };
        assert!(matches!(
            m.geodesic_distance(
                &bad,
                &Point::Sphere {
                    theta: 0.0,
                    phi: 0.0
                }
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn circle_eigenvalues_with_multiplicity() {
        let pairs = circle1().eigen_pairs(5).unwrap();
        let values: Vec<f64> = pairs.iter().map(|p| p.eigenvalue).collect();
        assert_eq!(values, vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        assert_eq!(pairs[1].multiplicity, 2);
        // sin before cos: the second eigenfunction vanishes at 0.
        assert_eq!(pairs[1].evaluate(&Point::Angle(0.0)).unwrap(), 0.0);
        let a1 = pairs[2].evaluate(&Point::Angle(0.0)).unwrap();
        assert!((a1 - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn squashed_torus_eigenvalue_ladder() {
        let m = AnalyticManifold::flat_torus(1.0, 0.5).unwrap();
        let pairs = m.eigen_pairs(17).unwrap();
        let expect: [(f64, usize); 17] = [
            (0.0, 1),
            (1.0, 2),
            (1.0, 2),
            (4.0, 4),
            (4.0, 4),
            (4.0, 4),
            (4.0, 4),
            (5.0, 4),
            (5.0, 4),
            (5.0, 4),
            (5.0, 4),
            (8.0, 4),
            (8.0, 4),
            (8.0, 4),
            (8.0, 4),
            (9.0, 2),
            (9.0, 2),
        ];
        for (pair, (lambda, mult)) in pairs.iter().zip(expect) {
            assert!((pair.eigenvalue - lambda).abs() < 1e-12);
            assert_eq!(pair.multiplicity, mult);
        }
    }

    #[test]
    fn square_torus_merges_group_multiplicities() {
        // On the square torus the eigenvalue 1 class merges the (1,0) and
        // (0,1) pairs into multiplicity 4.
        let m = AnalyticManifold::flat_torus(1.0, 1.0).unwrap();
        let pairs = m.eigen_pairs(9).unwrap();
        let expect = [
            (0.0, 1),
            (1.0, 4),
            (1.0, 4),
            (1.0, 4),
            (1.0, 4),
            (2.0, 4),
            (2.0, 4),
            (2.0, 4),
            (2.0, 4),
        ];
        for (pair, (lambda, mult)) in pairs.iter().zip(expect) {
            assert!((pair.eigenvalue - lambda).abs() < 1e-12);
            assert_eq!(pair.multiplicity, mult);
        }
    }

    #[test]
    fn thin_torus_first_band_is_circle_like() {
        let m = AnalyticManifold::flat_torus(1.0, 0.1).unwrap();
        let pairs = m.eigen_pairs(23).unwrap();
        assert_eq!(pairs[0].eigenvalue, 0.0);
        for j in 1..=9 {
            assert!((pairs[2 * j - 1].eigenvalue - (j * j) as f64).abs() < 1e-12);
            assert!((pairs[2 * j].eigenvalue - (j * j) as f64).abs() < 1e-12);
            assert_eq!(pairs[2 * j].multiplicity, 2);
        }
        for pair in &pairs[19..23] {
            assert!((pair.eigenvalue - 100.0).abs() < 1e-9);
            assert_eq!(pair.multiplicity, 4);
        }
        // Index 19 must be the theta-frequency-10 sine so the 20-term
        // truncation stays independent of phi.
        let p0 = Point::Torus {
            theta: 0.7,
            phi: 0.3,
        };
        let p1 = Point::Torus {
            theta: 0.7,
            phi: 2.9,
        };
        assert_eq!(
            pairs[19].evaluate(&p0).unwrap(),
            pairs[19].evaluate(&p1).unwrap()
        );
    }

    #[test]
    fn orthonormality_by_quadrature_on_circle() {
        let pairs = circle1().eigen_pairs(5).unwrap();
        for (i, pi_) in pairs.iter().enumerate() {
            for (j, pj) in pairs.iter().enumerate() {
                let f = |x: f64| {
                    pi_.evaluate(&Point::Angle(x)).unwrap() * pj.evaluate(&Point::Angle(x)).unwrap()
                };
                let integral = quad::trapezoid_periodic(&f, 0.0, TAU, 512);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((integral - expect).abs() < 1e-12, "({i},{j}) -> {integral}");
            }
        }
    }

    #[test]
    fn kernel_image_and_eigen_routes_agree_at_origin() {
        let m = circle1();
        let p = Point::Angle(0.0);
        let img = m
            .heat_kernel(&p, &p, 1.0, &KernelMethod::ImageSum { images: 3 })
            .unwrap();
        assert!((img - 0.2821240).abs() < 1e-6);
        assert!((img - 0.28212397345676227).abs() < 1e-12);
        let eig = m
            .heat_kernel(&p, &p, 1.0, &KernelMethod::EigenSum { truncation: 12 })
            .unwrap();
        assert!((img - eig).abs() < 1e-6);
    }

    #[test]
    fn h3_closed_form_spot_value() {
        let m = AnalyticManifold::Hyperbolic3;
        let h = m
            .heat_kernel(
                &Point::Geodesic(0.0),
                &Point::Geodesic(1.0),
                1.0,
                &KernelMethod::ClosedForm,
            )
            .unwrap();
        assert!((h - 5.473e-3).abs() < 1e-6);
        assert!((h - 0.005472740776373401).abs() < 1e-14);
    }

    #[test]
    fn millson_matches_closed_form() {
        for (s, t) in [(1.0, 1.0), (2.0, 0.5)] {
            let rec = millson_step(1, s, t).unwrap();
            let closed = h3_closed_form(s, t);
            assert!((rec - closed).abs() < 1e-12 * closed.max(1.0));
        }
        assert!(matches!(
            millson_step(1, 0.0, 1.0),
            Err(Error::Singularity(_))
        ));
        // Near the singular point the recurrence still agrees with the
        // closed-form limit.
        let near = millson_step(1, 1e-9, 1.0).unwrap();
        let limit = h3_closed_form(0.0, 1.0);
        assert!((near - limit).abs() < 1e-6 * limit);
    }

    #[test]
    fn constant_curvature_identities() {
        let unit = constant_curvature_kernel(-1.0, 3, 1.0, 1.0).unwrap();
        assert_eq!(unit, h3_closed_form(1.0, 1.0));
        let scaled = constant_curvature_kernel(-4.0, 3, 0.5, 0.25).unwrap();
        assert!((scaled - 8.0 * h3_closed_form(1.0, 1.0)).abs() < 1e-15);
        let via_h2 = constant_curvature_kernel(-1.0, 2, 1.0, 1.0).unwrap();
        let direct = h2_quadrature(1.0, 1.0, 64, 1e-12).unwrap();
        assert!((via_h2 - direct).abs() < 1e-12);
        assert!(matches!(
            constant_curvature_kernel(1.0, 3, 0.5, 0.5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn h2_quadrature_reference_values() {
        // Reference values from an independent adaptive integrator.
        let cases = [
            (1.0, 1.0, 0.04149118395782222),
            (0.5, 0.25, 0.2236303093302671),
            (2.0, 0.7, 0.016246416238582217),
        ];
        for (s, t, expect) in cases {
            let got = h2_quadrature(s, t, 32, 1e-12).unwrap();
            assert!((got - expect).abs() < 1e-12, "h2({s},{t}) = {got}");
        }
        // Small separation and time approach the flat plane kernel 1/(4 pi t).
        let flat = h2_quadrature(1e-6, 1e-3, 32, 1e-12).unwrap() * 4.0 * PI * 1e-3;
        assert!((flat - 1.0).abs() < 1e-3);
    }

    #[test]
    fn log_kernel_matches_direct_evaluation() {
        let m = circle1();
        let p = Point::Angle(0.2);
        let q = Point::Angle(2.2);
        for t in [0.1, 1.0] {
            let direct = m
                .heat_kernel(&p, &q, t, &KernelMethod::ImageSum { images: 10 })
                .unwrap();
            let logv = m.log_heat_kernel(&p, &q, t).unwrap();
            assert!((logv - direct.ln()).abs() < 1e-12);
        }
        // Deep small-t regime: the direct kernel underflows, the log stays finite.
        let lh = m
            .log_heat_kernel(&Point::Angle(0.0), &Point::Angle(PI), 1e-4)
            .unwrap();
        let expect = -PI * PI / (4.0 * 1e-4);
        assert!((lh - expect).abs() / expect.abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_time_and_methods() {
        let m = circle1();
        let p = Point::Angle(0.0);
        assert!(matches!(
            m.heat_kernel(&p, &p, 0.0, &KernelMethod::ImageSum { images: 3 }),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            m.heat_kernel(&p, &p, 1.0, &KernelMethod::ClosedForm),
            Err(Error::Unsupported(_))
        ));
        let h3 = AnalyticManifold::Hyperbolic3;
        assert!(matches!(h3.eigen_pairs(3), Err(Error::Unsupported(_))));
    }

    proptest! {
        #[test]
        fn kernel_symmetry_on_circle(a in 0.0..TAU, b in 0.0..TAU, t in 0.05f64..2.0) {
            let m = circle1();
            let h1 = m.heat_kernel(&Point::Angle(a), &Point::Angle(b), t, &KernelMethod::ImageSum { images: 10 }).unwrap();
            let h2 = m.heat_kernel(&Point::Angle(b), &Point::Angle(a), t, &KernelMethod::ImageSum { images: 10 }).unwrap();
            prop_assert_eq!(h1, h2);
            prop_assert!(h1 > 0.0);
        }

        #[test]
        fn torus_distance_is_a_metric(
            t1 in 0.0..TAU, p1 in 0.0..TAU,
            t2 in 0.0..TAU, p2 in 0.0..TAU,
            t3 in 0.0..TAU, p3 in 0.0..TAU,
        ) {
            let m = AnalyticManifold::flat_torus(1.0, 0.5).unwrap();
            let a = Point::Torus { theta: t1, phi: p1 };
            let b = Point::Torus { theta: t2, phi: p2 };
            let c = Point::Torus { theta: t3, phi: p3 };
            let dab = m.geodesic_distance(&a, &b).unwrap();
            let dba = m.geodesic_distance(&b, &a).unwrap();
            let dac = m.geodesic_distance(&a, &c).unwrap();
            let dcb = m.geodesic_distance(&c, &b).unwrap();
            prop_assert_eq!(dab, dba);
            prop_assert!(dab <= dac + dcb + 1e-12);
            let daa = m.geodesic_distance(&a, &a).unwrap();
            prop_assert_eq!(daa, 0.0);
        }
    }
}
