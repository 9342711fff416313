//! Planar cross-sections of a pseudo-cone, as polylines for plotting.
//!
//! The section `K ∩ P` of a plane `P = {p + s e1 + t e2}` is convex. We find
//! an interior point by maximizing the smallest constraint slack (a concave
//! function of `(s, t)`), then shoot `resolution` rays from it and record
//! where each ray leaves `K`. Switches between boundary pieces are located
//! by bisection on the ray angle. Unbounded sections are cut by a window
//! whose radius scales with the data, so the output is homogeneous under
//! dilation of `K` together with the plane.

use std::f64::consts::TAU;
use std::fmt;

use crate::cone_geometry::{ConeSpec, UnitVector};
use crate::error::{Error, Result};
use crate::linalg::{add, axpy, dot, norm, scale};
use crate::pseudo_cone::PseudoCone;

const SEARCH_ITERS: usize = 100;
const ANGLE_BISECTIONS: usize = 60;

/// An affine plane `p + s e1 + t e2` with orthonormal `e1`, `e2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionPlane {
    pub point: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

impl SectionPlane {
    pub fn new(point: Vec<f64>, e1: Vec<f64>, e2: Vec<f64>) -> Result<Self> {
        let n = point.len();
        for e in [&e1, &e2] {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.len(),
                });
            }
        }
        let ok = (norm(&e1) - 1.0).abs() <= 1e-9 && (norm(&e2) - 1.0).abs() <= 1e-9 && dot(&e1, &e2).abs() <= 1e-9;
        if !ok {
            return Err(Error::InvalidInput("plane basis must be orthonormal".into()));
        }
        Ok(Self { point, e1, e2 })
    }

    /// The ambient plane of R^2.
    pub fn ambient2() -> Self {
        Self {
            point: vec![0.0, 0.0],
            e1: vec![1.0, 0.0],
            e2: vec![0.0, 1.0],
        }
    }

    pub fn at(&self, s: f64, t: f64) -> Vec<f64> {
        axpy(&axpy(&self.point, s, &self.e1), t, &self.e2)
    }

    fn direction(&self, theta: f64) -> Vec<f64> {
        axpy(&scale(&self.e1, theta.cos()), theta.sin(), &self.e2)
    }
}

/// Which constraint of `K` a boundary point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Facet `i` of `K`.
    Facet(usize),
    /// The boundary of a circular `C`.
    Cone,
    /// Facet `k` of a polyhedral `C`.
    ConeFacet(usize),
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Facet(i) => write!(f, "facet:{i}"),
            Self::Cone => write!(f, "cone"),
            Self::ConeFacet(k) => write!(f, "cone_facet:{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionPoint {
    pub s: f64,
    pub t: f64,
    pub kind: BoundaryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    /// Boundary points in angular order. A corner appears twice, once
    /// with each adjacent kind.
    pub points: Vec<SectionPoint>,
    /// Closed sections repeat their first point at the end.
    pub closed: bool,
}

impl Section {
    /// `s,t,kind` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,kind\n");
        for p in &self.points {
            out.push_str(&format!("{:.16e},{:.16e},{}\n", p.s, p.t, p.kind));
        }
        out
    }
}

// In-plane view of each constraint as slack(x) >= 0.
enum Constraint {
    // -b - <x,u> >= 0, with the in-plane gradient norm for scaling
    Linear {
        normal: Vec<f64>,
        offset: f64,
        scale: f64,
        kind: BoundaryKind,
    },
    // <x,a> - cos(α)|x| >= 0
    Round {
        axis: Vec<f64>,
        cos: f64,
    },
}

impl Constraint {
    fn slack(&self, x: &[f64]) -> f64 {
        match self {
            Self::Linear {
                normal, offset, scale, ..
            } => (-offset - dot(x, normal)) / scale,
            Self::Round { axis, cos } => dot(x, axis) - cos * norm(x),
        }
    }

    fn kind(&self) -> BoundaryKind {
        match self {
            Self::Linear { kind, .. } => *kind,
            Self::Round { .. } => BoundaryKind::Cone,
        }
    }

    /// First `r > 0` where `x0 + r w` leaves the constraint set; `x0` must
    /// be strictly inside.
    fn exit(&self, x0: &[f64], w: &[f64]) -> f64 {
        match self {
            Self::Linear { normal, offset, .. } => {
                let rate = dot(w, normal);
                if rate > 0.0 {
                    (-offset - dot(x0, normal)) / rate
                } else {
                    f64::INFINITY
                }
            }
            Self::Round { axis, cos } => {
                let c2 = cos * cos;
                let (xa, wa) = (dot(x0, axis), dot(w, axis));
                let a = wa * wa - c2 * dot(w, w);
                let b = 2.0 * (xa * wa - c2 * dot(x0, w));
                let c = xa * xa - c2 * dot(x0, x0);
                smallest_positive_root(a, b, c)
            }
        }
    }
}

fn smallest_positive_root(a: f64, b: f64, c: f64) -> f64 {
    let mut roots = Vec::with_capacity(2);
    if a.abs() <= 1e-15 * (b.abs() + c.abs()) {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            }
        }
    }
    roots.into_iter().filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min)
}

fn constraints(k: &PseudoCone, plane: &SectionPlane) -> Vec<Constraint> {
    let in_plane = |v: &[f64]| (dot(v, &plane.e1).powi(2) + dot(v, &plane.e2).powi(2)).sqrt();
    let linear = |normal: &UnitVector, offset: f64, kind| {
        let g = in_plane(normal);
        Constraint::Linear {
            normal: normal.to_vec(),
            offset,
            scale: if g > 1e-12 { g } else { 1.0 },
            kind,
        }
    };
    let mut out: Vec<Constraint> = k
        .facets()
        .iter()
        .enumerate()
        .map(|(i, f)| linear(f.normal(), f.offset(), BoundaryKind::Facet(i)))
        .collect();
    match k.cone() {
        ConeSpec::Circular(c) => out.push(Constraint::Round {
            axis: c.axis().to_vec(),
            cos: c.half_angle().cos(),
        }),
        ConeSpec::Polyhedral(p) => out.extend(
            p.facet_normals()
                .iter()
                .enumerate()
                .map(|(m, f)| linear(f, 0.0, BoundaryKind::ConeFacet(m))),
        ),
    }
    out
}

fn min_slack(cs: &[Constraint], x: &[f64]) -> f64 {
    cs.iter().map(|c| c.slack(x)).fold(f64::INFINITY, f64::min)
}

// Maximizes a concave function on [lo, hi] by ternary search.
fn ternary(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    for _ in 0..SEARCH_ITERS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Traces `bd K ∩ P` with `resolution` rays.
///
/// Requires `n = 2` or `n = 3`. Fails with [`Error::EmptySection`] when the
/// plane misses the interior of `K`.
pub fn export_section(k: &PseudoCone, plane: &SectionPlane, resolution: usize) -> Result<Section> {
    let n = k.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidInput(format!("sections need n = 2 or 3, got {n}")));
    }
    if plane.point.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: plane.point.len(),
        });
    }
    if resolution < 3 {
        return Err(Error::InvalidInput("resolution must be at least 3".into()));
    }
    let cs = constraints(k, plane);

    // data scale: the plane offset and the radius of K along the cone centre
    let centre = cone_centre(k.cone());
    let scale = norm(&plane.point) + k.radial_unchecked(&centre);
    let half_width = 4.0 * scale;
    let window = 4.0 * half_width;

    // the tiny quadratic makes the maximizer unique, so it moves with the data
    let g = |s: f64, t: f64| min_slack(&cs, &plane.at(s, t)) - 1e-3 * (s * s + t * t) / half_width;
    let (s0, _) = ternary(-half_width, half_width, |s| {
        ternary(-half_width, half_width, |t| g(s, t)).1
    });
    let (t0, best) = ternary(-half_width, half_width, |t| g(s0, t));
    if best.is_nan() || best <= 1e-12 * scale || min_slack(&cs, &plane.at(s0, t0)) <= 1e-12 * scale {
        return Err(Error::EmptySection);
    }
    let q = plane.at(s0, t0);

    // exit radius and active constraint along angle θ, cut at the window
    let probe = |theta: f64| -> (f64, Option<BoundaryKind>) {
        let w = plane.direction(theta);
        let (mut r, mut kind) = (f64::INFINITY, None);
        for c in &cs {
            let e = c.exit(&q, &w);
            if e < r {
                r = e;
                kind = Some(c.kind());
            }
        }
        // distance from q to the window circle around the plane origin
        let (qs, qt) = (s0, t0);
        let (ws, wt) = (theta.cos(), theta.sin());
        let proj = qs * ws + qt * wt;
        let to_window = -proj + (proj * proj - (qs * qs + qt * qt - window * window)).sqrt();
        if r > to_window {
            (to_window, None)
        } else {
            (r, kind)
        }
    };
    let point = |theta: f64, r: f64, kind| SectionPoint {
        s: s0 + r * theta.cos(),
        t: t0 + r * theta.sin(),
        kind,
    };

    let samples: Vec<(f64, f64, Option<BoundaryKind>)> = (0..resolution)
        .map(|m| {
            let theta = TAU * m as f64 / resolution as f64;
            let (r, kind) = probe(theta);
            (theta, r, kind)
        })
        .collect();

    // walk the circle, inserting corners where the active piece switches
    let mut ring: Vec<(f64, f64, Option<BoundaryKind>)> = Vec::with_capacity(2 * resolution);
    for m in 0..resolution {
        let a = samples[m];
        let b = samples[(m + 1) % resolution];
        ring.push(a);
        if a.2 != b.2 {
            let (mut lo, mut hi) = (a.0, if m + 1 == resolution { TAU } else { b.0 });
            for _ in 0..ANGLE_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if probe(mid).1 == a.2 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            // the corner is where both pieces meet; take the nearer exit
            let (ra, _) = probe(lo);
            let (rb, _) = probe(hi);
            let theta = 0.5 * (lo + hi);
            let r = 0.5 * (ra + rb);
            ring.push((theta, r, a.2));
            ring.push((theta, r, b.2));
        }
    }

    let Some(cut) = ring.iter().position(|x| x.2.is_none()) else {
        let mut points: Vec<SectionPoint> = ring
            .into_iter()
            .map(|(th, r, kind)| point(th, r, kind.expect("bounded")))
            .collect();
        points.push(points[0].clone());
        return Ok(Section { points, closed: true });
    };
    // start right after the window run (the run is a single arc since the
    // section is convex)
    let len = ring.len();
    let mut start = cut;
    while ring[start % len].2.is_none() {
        start += 1;
        if start - cut > len {
            return Err(Error::EmptySection);
        }
    }
    let points = (0..len)
        .map(|d| ring[(start + d) % len])
        .take_while(|x| x.2.is_some())
        .map(|(th, r, kind)| point(th, r, kind.expect("checked")))
        .collect();
    Ok(Section { points, closed: false })
}

fn cone_centre(cone: &ConeSpec) -> Vec<f64> {
    match cone {
        ConeSpec::Circular(c) => c.axis().to_vec(),
        ConeSpec::Polyhedral(p) => {
            let mut sum = vec![0.0; cone.dim()];
            for g in p.generators() {
                sum = add(&sum, g);
            }
            let l = norm(&sum);
            sum.iter().map(|x| x / l).collect()
        }
    }
}
