//! Deterministic point-cloud generators: circles, flat-torus grids,
//! golden-spiral spheres, surfaces of revolution built from piecewise
//! sine/constant profiles (barbells and lollipops), and the fixed set of
//! six 9-pixel photo vectors used as a worked fixture.

use crate::error::{Error, Result};
use crate::graph::PointCloud;
use std::f64::consts::PI;

/// A piecewise profile `s -> f(s) >= 0` defining a surface of revolution
/// `(f(s) cos theta, f(s) sin theta, s)`.
#[derive(Clone, Debug)]
pub struct RevolutionProfile {
    segments: Vec<Segment>,
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    /// `amplitude * sin((s - origin) / amplitude)`, rising from a pole.
    SineRising {
        origin: f64,
    },
    /// `amplitude * sin((origin - s) / amplitude)`, falling to a pole.
    SineFalling {
        origin: f64,
    },
    Constant,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    start: f64,
    end: f64,
    amplitude: f64,
    shape: Shape,
}

impl Segment {
    fn value(&self, s: f64) -> f64 {
        match self.shape {
            Shape::SineRising { origin } => self.amplitude * ((s - origin) / self.amplitude).sin(),
            Shape::SineFalling { origin } => self.amplitude * ((origin - s) / self.amplitude).sin(),
            Shape::Constant => self.amplitude,
        }
    }

    fn derivative(&self, s: f64) -> f64 {
        match self.shape {
            Shape::SineRising { origin } => ((s - origin) / self.amplitude).cos(),
            Shape::SineFalling { origin } => -((origin - s) / self.amplitude).cos(),
            Shape::Constant => 0.0,
        }
    }
}

impl RevolutionProfile {
    pub fn s_min(&self) -> f64 {
        self.segments.first().unwrap().start
    }

    pub fn s_max(&self) -> f64 {
        self.segments.last().unwrap().end
    }

    /// Breakpoints of the piecewise definition, including both ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().map(|seg| seg.start).collect();
        out.push(self.s_max());
        out
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        if s < self.s_min() - 1e-12 || s > self.s_max() + 1e-12 {
            return Err(Error::domain("parameter outside the profile domain"));
        }
        let seg = self
            .segments
            .iter()
            .find(|seg| s <= seg.end)
            .unwrap_or(self.segments.last().unwrap());
        Ok(seg.value(s).max(0.0))
    }

    pub fn derivative(&self, s: f64) -> Result<f64> {
        if s < self.s_min() - 1e-12 || s > self.s_max() + 1e-12 {
            return Err(Error::domain("parameter outside the profile domain"));
        }
        let seg = self
            .segments
            .iter()
            .find(|seg| s <= seg.end)
            .unwrap_or(self.segments.last().unwrap());
        Ok(seg.derivative(s))
    }

    /// Mismatch `|f(b-) - f(b+)|` at each interior breakpoint.
    pub fn continuity_residuals(&self) -> Vec<f64> {
        self.segments
            .windows(2)
            .map(|w| (w[0].value(w[0].end) - w[1].value(w[1].start)).abs())
            .collect()
    }
}

/// Profile families.
#[derive(Clone, Copy, Debug)]
pub enum ProfileKind {
    /// Spheres of radius `r1` and `r2` with caps removed, joined by a
    /// cylinder of radius `neck` and length `length`.
    Barbell {
        r1: f64,
        r2: f64,
        length: f64,
        neck: f64,
    },
    /// Sphere of radius `radius` with a cap removed, a cylinder of radius
    /// `neck` and length `length`, closed by a hemisphere of radius `neck`.
    Lollipop { radius: f64, neck: f64, length: f64 },
}

/// Arc length along a sphere of radius `r` from the pole to the parallel
/// of radius `neck`, measured on the far side so the removed cap is small.
/// Solved by bisection of `r sin(a / r) = neck` on the falling branch to
/// 1e-14; the tangential case `neck = r` is the quarter arc.
fn cap_arc(r: f64, neck: f64) -> Result<f64> {
    if !(neck > 0.0) || neck > r {
        return Err(Error::domain("neck radius must lie in (0, sphere radius]"));
    }
    if (r - neck).abs() <= 1e-15 * r {
        return Ok(0.5 * PI * r);
    }
    let g = |a: f64| r * (a / r).sin() - neck;
    let mut lo = 0.5 * PI * r;
    let mut hi = PI * r;
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(Error::domain(
            "no matching junction arc on the falling branch",
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * r.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Build a barbell or lollipop profile; junction parameters are solved
/// numerically and continuity is verified at every breakpoint.
pub fn make_profile(kind: ProfileKind) -> Result<RevolutionProfile> {
    let profile = match kind {
        ProfileKind::Barbell {
            r1,
            r2,
            length,
            neck,
        } => {
            if !(r1 > 0.0 && r2 > 0.0) {
                return Err(Error::domain("sphere radii must be positive"));
            }
            if !(length >= 0.0) {
                return Err(Error::domain("cylinder length must be nonnegative"));
            }
            if !(neck > 0.0) || neck > r1.min(r2) {
                return Err(Error::domain(
                    "neck radius must lie in (0, min sphere radius]",
                ));
            }
            let c1 = cap_arc(r1, neck)?;
            let c2 = cap_arc(r2, neck)?;
            let half = length / 2.0;
            RevolutionProfile {
                segments: vec![
                    Segment {
                        start: -half - c1,
                        end: -half,
                        amplitude: r1,
                        shape: Shape::SineRising { origin: -half - c1 },
                    },
                    Segment {
                        start: -half,
                        end: half,
                        amplitude: neck,
                        shape: Shape::Constant,
                    },
                    Segment {
                        start: half,
                        end: half + c2,
                        amplitude: r2,
                        shape: Shape::SineFalling { origin: half + c2 },
                    },
                ],
            }
        }
        ProfileKind::Lollipop {
            radius,
            neck,
            length,
        } => {
            if !(radius > 0.0) {
                return Err(Error::domain("sphere radius must be positive"));
            }
            if !(length >= 0.0) {
                return Err(Error::domain("cylinder length must be nonnegative"));
            }
            if !(neck > 0.0) || neck > radius {
                return Err(Error::domain("neck radius must lie in (0, sphere radius]"));
            }
            let c1 = cap_arc(radius, neck)?;
            let c2 = 0.5 * PI * neck;
            let half = length / 2.0;
            RevolutionProfile {
                segments: vec![
                    Segment {
                        start: -half - c1,
                        end: -half,
                        amplitude: radius,
                        shape: Shape::SineRising { origin: -half - c1 },
                    },
                    Segment {
                        start: -half,
                        end: half,
                        amplitude: neck,
                        shape: Shape::Constant,
                    },
                    Segment {
                        start: half,
                        end: half + c2,
                        amplitude: neck,
                        shape: Shape::SineFalling { origin: half + c2 },
                    },
                ],
            }
        }
    };
    let worst = profile
        .continuity_residuals()
        .into_iter()
        .fold(0.0_f64, f64::max);
    if worst > 1e-12 {
        return Err(Error::Numeric {
            what: "profile breakpoints do not match continuously".into(),
            residual: worst,
        });
    }
    Ok(profile)
}

/// Shape specifications for the deterministic samplers.
#[derive(Clone, Debug)]
pub enum ShapeSpec {
    /// `count` equally spaced points on a circle of radius `radius` in R^2.
    Circle { radius: f64, count: usize },
    /// Flat-embedded torus grid in R^4:
    /// `(a cos theta, a sin theta, b cos phi, b sin phi)`.
    TorusGrid {
        a: f64,
        b: f64,
        n_theta: usize,
        n_phi: usize,
    },
    /// Golden-spiral points on a sphere of radius `radius` in R^3.
    SphereEven { radius: f64, count: usize },
    /// Product grid on a surface of revolution; rows are spaced evenly in
    /// profile arc length and pole rows collapse to single points.
    Revolution {
        profile: RevolutionProfile,
        n_s: usize,
        n_theta: usize,
    },
    /// The six 9-pixel photo vectors.
    PhotoSet,
}

/// Generate the point cloud for a shape. Identical specs produce bitwise
/// identical clouds.
pub fn sample(spec: &ShapeSpec) -> Result<PointCloud> {
    match spec {
        ShapeSpec::Circle { radius, count } => {
            if !(*radius > 0.0) {
                return Err(Error::domain("circle radius must be positive"));
            }
            if *count < 3 {
                return Err(Error::domain("circle sample needs at least 3 points"));
            }
            let pts = (0..*count)
                .map(|i| {
                    let ang = 2.0 * PI * i as f64 / *count as f64;
                    vec![radius * ang.cos(), radius * ang.sin()]
                })
                .collect();
            PointCloud::new(pts, None)
        }
        ShapeSpec::TorusGrid {
            a,
            b,
            n_theta,
            n_phi,
        } => {
            if !(*a > 0.0 && *b > 0.0) {
                return Err(Error::domain("torus radii must be positive"));
            }
            if *n_theta < 3 || *n_phi < 3 {
                return Err(Error::domain(
                    "torus grid needs at least 3 points per angle",
                ));
            }
            let mut pts = Vec::with_capacity(n_theta * n_phi);
            for i in 0..*n_theta {
                let th = 2.0 * PI * i as f64 / *n_theta as f64;
                for j in 0..*n_phi {
                    let ph = 2.0 * PI * j as f64 / *n_phi as f64;
                    pts.push(vec![a * th.cos(), a * th.sin(), b * ph.cos(), b * ph.sin()]);
                }
            }
            PointCloud::new(pts, None)
        }
        ShapeSpec::SphereEven { radius, count } => {
            if !(*radius > 0.0) {
                return Err(Error::domain("sphere radius must be positive"));
            }
            if *count < 3 {
                return Err(Error::domain("sphere sample needs at least 3 points"));
            }
            let golden_angle = PI * (3.0 - 5.0_f64.sqrt());
            let n = *count as f64;
            let pts = (0..*count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n;
                    let r = (1.0 - z * z).sqrt();
                    let ang = golden_angle * i as f64;
                    vec![radius * r * ang.cos(), radius * r * ang.sin(), radius * z]
                })
                .collect();
            PointCloud::new(pts, None)
        }
        ShapeSpec::Revolution {
            profile,
            n_s,
            n_theta,
        } => sample_revolution(profile, *n_s, *n_theta),
        ShapeSpec::PhotoSet => {
            let raw: [[f64; 9]; 6] = [
                [1.0, 2.0, 3.0, 2.0, 3.0, 4.0, 3.0, 4.0, 3.0],
                [3.0, 4.0, 3.0, 4.0, 3.0, 2.0, 3.0, 2.0, 1.0],
                [2.0, 3.0, 4.0, 3.0, 4.0, 3.0, 4.0, 3.0, 2.0],
                [2.0, 1.0, 2.0, 1.0, 2.0, 3.0, 2.0, 3.0, 4.0],
                [3.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 3.0],
                [4.0, 3.0, 2.0, 3.0, 2.0, 1.0, 2.0, 1.0, 2.0],
            ];
            let labels = (1..=6).map(|i| format!("p{i}")).collect();
            PointCloud::new(raw.iter().map(|r| r.to_vec()).collect(), Some(labels))
        }
    }
}

fn sample_revolution(
    profile: &RevolutionProfile,
    n_s: usize,
    n_theta: usize,
) -> Result<PointCloud> {
    if n_s < 3 || n_theta < 3 {
        return Err(Error::domain(
            "revolution grid needs at least 3 rows and 3 angles",
        ));
    }
    // Cumulative arc length of the profile curve, sampled densely per
    // segment, so rows land at equal arc-length steps.
    const DENSITY: usize = 4096;
    let s_min = profile.s_min();
    let s_max = profile.s_max();
    let total_steps = DENSITY;
    let h = (s_max - s_min) / total_steps as f64;
    let mut cumulative = Vec::with_capacity(total_steps + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    let mut prev_speed = (1.0 + profile.derivative(s_min)?.powi(2)).sqrt();
    for i in 1..=total_steps {
        let s = s_min + i as f64 * h;
        let speed = (1.0 + profile.derivative(s)?.powi(2)).sqrt();
        acc += 0.5 * (prev_speed + speed) * h;
        cumulative.push(acc);
        prev_speed = speed;
    }
    let total_arc = acc;
    // Invert the cumulative table at equal arc targets.
    let mut s_rows = Vec::with_capacity(n_s);
    for r in 0..n_s {
        let target = total_arc * r as f64 / (n_s - 1) as f64;
        let idx = cumulative.partition_point(|&c| c < target).min(total_steps);
        let s = if idx == 0 {
            s_min
        } else {
            let c0 = cumulative[idx - 1];
            let c1 = cumulative[idx];
            let frac = if c1 > c0 {
                (target - c0) / (c1 - c0)
            } else {
                0.0
            };
            s_min + ((idx - 1) as f64 + frac) * h
        };
        s_rows.push(s);
    }
    let mut pts = Vec::new();
    for &s in &s_rows {
        let f = profile.value(s)?;
        if f <= 1e-12 {
            // Pole row collapses to a single point on the axis.
            pts.push(vec![0.0, 0.0, s]);
        } else {
            for j in 0..n_theta {
                let ang = 2.0 * PI * j as f64 / n_theta as f64;
                pts.push(vec![f * ang.cos(), f * ang.sin(), s]);
            }
        }
    }
    PointCloud::new(pts, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_has_unit_sides() {
        let pc = sample(&ShapeSpec::Circle {
            radius: 1.0,
            count: 6,
        })
        .unwrap();
        assert_eq!(pc.len(), 6);
        for i in 0..6 {
            assert!((pc.distance(i, (i + 1) % 6) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn photoset_distance_classes() {
        let pc = sample(&ShapeSpec::PhotoSet).unwrap();
        assert_eq!(pc.len(), 6);
        assert_eq!(pc.dim(), 9);
        assert_eq!(pc.labels().unwrap()[0], "p1");
        let mut sq = Vec::new();
        for i in 0..6 {
            for j in (i + 1)..6 {
                sq.push(pc.sq_distance(i, j) as i64);
            }
        }
        sq.sort_unstable();
        // Six cycle edges at squared distance 9, six chords at 24, three
        // diameters at 33.
        assert_eq!(
            sq,
            vec![9, 9, 9, 9, 9, 9, 24, 24, 24, 24, 24, 24, 33, 33, 33]
        );
    }

    #[test]
    fn photoset_cycle_at_distance_three() {
        use crate::graph::{build_adjacency, AdjacencyRule};
        let pc = sample(&ShapeSpec::PhotoSet).unwrap();
        // Strictly between 3 and sqrt(24): exactly the distance-3 cycle
        // 1-3-2-6-5-4-1 (0-based: 0-2-1-5-4-3-0).
        let g = build_adjacency(&pc, AdjacencyRule::Epsilon(4.0)).unwrap();
        let mut edges = g
            .edges()
            .iter()
            .map(|&(i, j, _)| (i, j))
            .collect::<Vec<_>>();
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 2), (0, 3), (1, 2), (1, 5), (3, 4), (4, 5)]);
        // At 5 the sqrt(24) chords come in as well and the graph is 4-regular.
        let g5 = build_adjacency(&pc, AdjacencyRule::Epsilon(5.0)).unwrap();
        assert_eq!(g5.edges().len(), 12);
        let degrees = g5.degrees();
        for d in degrees {
            assert_eq!(d, 4.0);
        }
    }

    #[test]
    fn golden_spiral_sits_on_sphere_evenly() {
        let pc = sample(&ShapeSpec::SphereEven {
            radius: 1.0,
            count: 500,
        })
        .unwrap();
        let mut nn = vec![f64::INFINITY; 500];
        for i in 0..500 {
            let norm: f64 = pc.point(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            for j in 0..500 {
                if i != j {
                    nn[i] = nn[i].min(pc.distance(i, j));
                }
            }
        }
        let lo = nn.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = nn.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo < 2.0, "nearest-neighbor spread {}", hi / lo);
    }

    #[test]
    fn determinism_is_bitwise() {
        let a = sample(&ShapeSpec::SphereEven {
            radius: 2.0,
            count: 97,
        })
        .unwrap();
        let b = sample(&ShapeSpec::SphereEven {
            radius: 2.0,
            count: 97,
        })
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn barbell_profile_matches_neck() {
        let p = make_profile(ProfileKind::Barbell {
            r1: 20.0,
            r2: 20.0,
            length: 10.0,
            neck: 5.0,
        })
        .unwrap();
        assert!((p.value(-5.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((p.value(5.0).unwrap() - 5.0).abs() < 1e-12);
        assert!(p.value(p.s_min()).unwrap().abs() < 1e-12);
        assert!(p.value(p.s_max()).unwrap().abs() < 1e-12);
        for r in p.continuity_residuals() {
            assert!(r <= 1e-12);
        }
    }

    #[test]
    fn tangential_barbell_cap_is_quarter_arc() {
        let r = 7.0;
        let p = make_profile(ProfileKind::Barbell {
            r1: r,
            r2: r,
            length: 4.0,
            neck: r,
        })
        .unwrap();
        // Cap arc pi r / 2 on both sides of the cylinder.
        assert!((p.s_max() - (2.0 + 0.5 * PI * r)).abs() < 1e-12);
        assert!((p.value(2.0).unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn lollipop_profile_continuity() {
        let p = make_profile(ProfileKind::Lollipop {
            radius: 10.0,
            neck: 5.0,
            length: 30.0,
        })
        .unwrap();
        for r in p.continuity_residuals() {
            assert!(r <= 1e-12);
        }
        assert!((p.value(15.0).unwrap() - 5.0).abs() < 1e-12);
        // Hemisphere tip.
        assert!((p.s_max() - (15.0 + 2.5 * PI)).abs() < 1e-12);
    }

    #[test]
    fn rejects_oversized_neck() {
        assert!(make_profile(ProfileKind::Barbell {
            r1: 2.0,
            r2: 3.0,
            length: 1.0,
            neck: 2.5
        })
        .is_err());
    }

    #[test]
    fn revolution_samples_lie_on_surface() {
        let p = make_profile(ProfileKind::Lollipop {
            radius: 10.0,
            neck: 5.0,
            length: 30.0,
        })
        .unwrap();
        let pc = sample(&ShapeSpec::Revolution {
            profile: p.clone(),
            n_s: 30,
            n_theta: 12,
        })
        .unwrap();
        for i in 0..pc.len() {
            let pt = pc.point(i);
            let radial = (pt[0] * pt[0] + pt[1] * pt[1]).sqrt();
            let f = p.value(pt[2]).unwrap();
            assert!((radial - f).abs() <= 1e-12, "point {i}");
        }
        // Two pole rows collapsed to single points.
        assert_eq!(pc.len(), 28 * 12 + 2);
    }
}
