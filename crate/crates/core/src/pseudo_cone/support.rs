//! Support values and reverse Gauss images by candidate enumeration.
//!
//! For `u ∈ Ω_{C°}` the linear functional `y ↦ -<u,y>` is coercive on `C`,
//! so its minimum over `K` is attained on a compact face whose extreme
//! points are extreme points of `K`. Every extreme point is an endpoint of
//! `L ∩ K` for some line `L` cut out by `n-1` active constraints, except on
//! round cones in R^3, where extreme points also run along the curves
//! `{<y,u_i> = -b_i} ∩ bd C`; there the minimum of the objective restricted
//! to a curve is found in closed form.
//!
//! Candidates are always scored with the exact objective
//! `g(v) = |<u,v>| ρ_K(v)` at their direction `v`, so a candidate set larger
//! than necessary never changes the minimum.

use itertools::Itertools;

use super::grid::{self, GridOptions};
use super::{GaussImage, PseudoCone, TIE_ANGLE, TIE_REL_TOL};
use crate::cone_geometry::{ConeSpec, UnitVector};
use crate::error::Result;
use crate::linalg;

/// Directions closer than this to `bd C` (radians) count as boundary.
const BOUNDARY_MARGIN: f64 = 1e-10;
const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMethod {
    /// Exact candidate enumeration. Available for polyhedral cones, and for
    /// circular cones in dimension 2 and 3.
    Exact,
    /// Coarse grid over the closed cap with multistart pattern-search
    /// refinement. Circular cones only.
    Grid,
}

/// Result of minimizing `g(v) = |<u,v>| ρ_K(v)` over the closure of `Ω_C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimization {
    /// `h̄_K(u)`.
    pub value: f64,
    /// Distinct near-optimal directions (relative tie `1e-9`, separation `1e-7`).
    pub minimizers: Vec<UnitVector>,
    /// Whether some near-optimal direction lies on `bd C`.
    pub on_boundary: bool,
}

impl Minimization {
    pub fn gauss_image(&self) -> GaussImage {
        if self.minimizers.len() == 1 && !self.on_boundary {
            GaussImage::Unique(self.minimizers[0].clone())
        } else {
            GaussImage::Ambiguous(self.minimizers.clone())
        }
    }
}

struct RoundFrame {
    axis: Vec<f64>,
    cos_a: f64,
    sin_a: f64,
    e1: Vec<f64>,
    e2: Vec<f64>,
}

impl RoundFrame {
    fn boundary_point(&self, phi: f64) -> Vec<f64> {
        let (s, c) = phi.sin_cos();
        let mut w = linalg::scale(&self.axis, self.cos_a);
        w = linalg::axpy(&w, self.sin_a * c, &self.e1);
        linalg::axpy(&w, self.sin_a * s, &self.e2)
    }

    /// Coefficients of `<x, w(phi)> = x0 + x1 cos(phi) + x2 sin(phi)`.
    fn trig_coefficients(&self, x: &[f64]) -> [f64; 3] {
        [
            self.cos_a * linalg::dot(x, &self.axis),
            self.sin_a * linalg::dot(x, &self.e1),
            self.sin_a * linalg::dot(x, &self.e2),
        ]
    }
}

/// Precomputed, `u`-independent part of the candidate set for one
/// pseudo-cone.
pub struct SupportOracle<'a> {
    k: &'a PseudoCone,
    method: SupportMethod,
    skeleton: Vec<Vec<f64>>,
    round: Option<RoundFrame>,
}

impl<'a> SupportOracle<'a> {
    pub fn new(k: &'a PseudoCone) -> Self {
        let method = if k.cone.linear_facets().is_some() || k.dim() == 3 {
            SupportMethod::Exact
        } else {
            SupportMethod::Grid
        };
        Self::with_method(k, method)
    }

    /// Forces a method. Requesting [`SupportMethod::Grid`] on a polyhedral
    /// cone, or [`SupportMethod::Exact`] where it is unavailable, falls
    /// back to the other method.
    pub fn with_method(k: &'a PseudoCone, method: SupportMethod) -> Self {
        let linear = k.cone.linear_facets();
        let round3 = matches!(k.cone, ConeSpec::Circular(_)) && k.dim() == 3;
        let method = match (method, &k.cone) {
            (SupportMethod::Grid, ConeSpec::Circular(_)) => SupportMethod::Grid,
            (SupportMethod::Grid, _) => SupportMethod::Exact,
            (SupportMethod::Exact, _) if linear.is_some() || round3 => SupportMethod::Exact,
            (SupportMethod::Exact, _) => SupportMethod::Grid,
        };
        let mut oracle = Self {
            k,
            method,
            skeleton: Vec::new(),
            round: None,
        };
        if method == SupportMethod::Exact {
            match linear {
                Some(cone_facets) => oracle.skeleton = linear_skeleton(k, &cone_facets),
                None => {
                    let ConeSpec::Circular(c) = &k.cone else {
                        unreachable!("round frame only for circular cones")
                    };
                    let basis = linalg::orthonormal_complement_basis(c.axis());
                    let (sin_a, cos_a) = c.half_angle().sin_cos();
                    let frame = RoundFrame {
                        axis: c.axis().to_vec(),
                        cos_a,
                        sin_a,
                        e1: basis[0].clone(),
                        e2: basis[1].clone(),
                    };
                    oracle.skeleton = round_skeleton(k, &frame);
                    oracle.round = Some(frame);
                }
            }
        }
        oracle
    }

    pub fn method(&self) -> SupportMethod {
        self.method
    }

    pub fn pseudo_cone(&self) -> &PseudoCone {
        self.k
    }

    /// The `u`-independent candidate directions (unit vectors in the closed
    /// cone). Empty for the grid method.
    pub fn candidate_directions(&self) -> &[Vec<f64>] {
        &self.skeleton
    }

    /// `g(v) = |<u,v>| ρ_K(v)`.
    pub fn objective(&self, u: &[f64], v: &[f64]) -> f64 {
        linalg::dot(u, v).abs() * self.k.radial_unchecked(v)
    }

    pub fn minimize(&self, u: &UnitVector) -> Result<Minimization> {
        self.k.check_normal(u)?;
        Ok(match self.method {
            SupportMethod::Grid => grid::minimize(self.k, u, &GridOptions::default()),
            SupportMethod::Exact => {
                let mut candidates = self.skeleton.clone();
                if let Some(frame) = &self.round {
                    candidates.extend(curve_candidates(self.k, frame, u));
                }
                let scored: Vec<(Vec<f64>, f64)> = candidates
                    .into_iter()
                    .map(|v| {
                        let g = self.objective(u, &v);
                        (v, g)
                    })
                    .collect();
                summarize(&self.k.cone, scored, |v| {
                    self.k.cone.boundary_margin(v) <= BOUNDARY_MARGIN
                })
            }
        })
    }

    pub fn support_abs(&self, u: &UnitVector) -> Result<f64> {
        Ok(self.minimize(u)?.value)
    }

    pub fn reverse_gauss(&self, u: &UnitVector) -> Result<GaussImage> {
        Ok(self.minimize(u)?.gauss_image())
    }

    /// `|<v,u>| ρ_K(v) / h̄_K(u) - 1`; zero exactly when `(v,u) ∈ ∂•K`.
    pub fn subdifferential_gap(&self, v: &UnitVector, u: &UnitVector) -> Result<f64> {
        self.k.check_direction(v)?;
        let h = self.support_abs(u)?;
        Ok(self.objective(u, v) / h - 1.0)
    }

    pub fn in_pseudo_subdifferential(&self, v: &UnitVector, u: &UnitVector, tol: f64) -> Result<bool> {
        self.k.check_direction(v)?;
        let h = self.support_abs(u)?;
        Ok(self.objective(u, v) <= h * (1.0 + tol))
    }
}

/// Collapses scored candidates into a [`Minimization`].
pub(super) fn summarize(
    cone: &ConeSpec,
    scored: Vec<(Vec<f64>, f64)>,
    on_boundary: impl Fn(&[f64]) -> bool,
) -> Minimization {
    let value = scored.iter().map(|(_, g)| *g).fold(f64::INFINITY, f64::min);
    let cutoff = value * (1.0 + TIE_REL_TOL);
    let mut reps: Vec<Vec<f64>> = Vec::new();
    let mut boundary = false;
    for (v, g) in &scored {
        if *g > cutoff {
            continue;
        }
        boundary |= on_boundary(v);
        if reps.iter().all(|r| linalg::angle(r, v) > TIE_ANGLE) {
            reps.push(v.clone());
        }
    }
    debug_assert!(reps.iter().all(|r| cone.contains(r, 1e-6)));
    Minimization {
        value,
        minimizers: reps
            .into_iter()
            .map(|v| UnitVector::new(v).expect("candidate directions are nonzero"))
            .collect(),
        on_boundary: boundary,
    }
}

fn push_direction(out: &mut Vec<Vec<f64>>, y: &[f64]) {
    if let Some(v) = linalg::normalized(y) {
        if out.iter().all(|w| linalg::angle(w, &v) > 1e-12) {
            out.push(v);
        }
    }
}

/// Feasible parameter interval of `y0 + t d` under `<y,n_k> <= rhs_k`.
fn line_interval(
    y0: &[f64],
    d: &[f64],
    constraints: impl Iterator<Item = (usize, f64)>,
    normals: &[&[f64]],
    scale: f64,
) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (k, rhs) in constraints {
        let s = linalg::dot(d, normals[k]);
        let r = rhs - linalg::dot(y0, normals[k]);
        if s.abs() < 1e-13 {
            if r < -FEASIBILITY_TOL * scale {
                return None;
            }
        } else if s > 0.0 {
            hi = hi.min(r / s);
        } else {
            lo = lo.max(r / s);
        }
    }
    (lo <= hi + FEASIBILITY_TOL * scale).then_some((lo, hi))
}

/// Extreme points of `K` when every constraint is linear: endpoints of the
/// feasible segment on each line cut out by `n-1` constraints.
fn linear_skeleton(k: &PseudoCone, cone_facets: &[UnitVector]) -> Vec<Vec<f64>> {
    let n = k.dim();
    let mut normals: Vec<&[f64]> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for f in &k.facets {
        normals.push(f.normal());
        rhs.push(-f.offset());
    }
    for f in cone_facets {
        normals.push(f);
        rhs.push(0.0);
    }
    let scale = 1.0 + k.facets.iter().map(|f| f.offset()).fold(0.0, f64::max);
    let mut out = Vec::new();
    for subset in (0..normals.len()).combinations(n - 1) {
        // lines spanned by cone facets alone pass through the origin and are
        // cut by K facets; they are still needed (extreme rays of C)
        let rows: Vec<&[f64]> = subset.iter().map(|&i| normals[i]).collect();
        let d = linalg::orthogonal_complement(&rows, n);
        if linalg::norm(&d) < 1e-10 {
            continue;
        }
        let d = linalg::normalized(&d).expect("nonzero");
        let sub_rhs: Vec<f64> = subset.iter().map(|&i| rhs[i]).collect();
        let Some(y0) = linalg::min_norm_solution(&rows, &sub_rhs) else {
            continue;
        };
        let others = (0..normals.len()).filter(|i| !subset.contains(i)).map(|i| (i, rhs[i]));
        let Some((lo, hi)) = line_interval(&y0, &d, others, &normals, scale) else {
            continue;
        };
        for t in [lo, hi] {
            if t.is_finite() {
                let y = linalg::axpy(&y0, t, &d);
                if k.cone.contains(&y, FEASIBILITY_TOL) {
                    push_direction(&mut out, &y);
                }
            }
        }
    }
    out
}

/// Extreme points of `K` on edge lines `{<y,u_i> = -b_i, <y,u_j> = -b_j}`
/// for a round cone in R^3: endpoints cut by other facets or by `bd C`.
fn round_skeleton(k: &PseudoCone, frame: &RoundFrame) -> Vec<Vec<f64>> {
    let normals: Vec<&[f64]> = k.facets.iter().map(|f| f.normal().as_slice()).collect();
    let rhs: Vec<f64> = k.facets.iter().map(|f| -f.offset()).collect();
    let scale = 1.0 + k.facets.iter().map(|f| f.offset()).fold(0.0, f64::max);
    let cos2 = frame.cos_a * frame.cos_a;
    let a = &frame.axis;
    let mut out = Vec::new();
    for (i, j) in (0..normals.len()).tuple_combinations() {
        let d = linalg::orthogonal_complement(&[normals[i], normals[j]], 3);
        if linalg::norm(&d) < 1e-10 {
            continue;
        }
        let d = linalg::normalized(&d).expect("nonzero");
        let Some(y0) = linalg::min_norm_solution(&[normals[i], normals[j]], &[rhs[i], rhs[j]]) else {
            continue;
        };
        let others = (0..normals.len()).filter(|&m| m != i && m != j).map(|m| (m, rhs[m]));
        let Some((lo, hi)) = line_interval(&y0, &d, others, &normals, scale) else {
            continue;
        };
        // <y,a>^2 = cos^2 |y|^2 along the line
        let (da, ya) = (linalg::dot(&d, a), linalg::dot(&y0, a));
        let qa = da * da - cos2;
        let qb = 2.0 * (ya * da - cos2 * linalg::dot(&y0, &d));
        let qc = ya * ya - cos2 * linalg::dot(&y0, &y0);
        let mut ts: Vec<f64> = quadratic_roots(qa, qb, qc);
        ts.extend([lo, hi].into_iter().filter(|t| t.is_finite()));
        let slack = FEASIBILITY_TOL * scale;
        for t in ts {
            if t < lo - slack || t > hi + slack {
                continue;
            }
            let y = linalg::axpy(&y0, t, &d);
            if k.cone.contains(&y, FEASIBILITY_TOL) {
                push_direction(&mut out, &y);
            }
        }
    }
    out
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return if b.abs() > 1e-14 * scale {
            vec![-c / b]
        } else {
            Vec::new()
        };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-14 * scale * scale {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Stationary points of `-<u,y>` along each curve `{<y,u_i> = -b_i} ∩ bd C`.
///
/// On the boundary circle `w(φ)` the objective is
/// `b_i p(φ)/q(φ)` with `p = <u,w>`, `q = <u_i,w>` both of the form
/// `x0 + x1 cos φ + x2 sin φ`. Then `p'q - pq'` reduces to
/// `A cos φ + B sin φ + D` with the coefficients below, which has the
/// closed-form zeros `atan2(B,A) ± acos(-D / hypot(A,B))`.
fn curve_candidates(k: &PseudoCone, frame: &RoundFrame, u: &[f64]) -> Vec<Vec<f64>> {
    let p = frame.trig_coefficients(u);
    let mut out = Vec::new();
    for f in &k.facets {
        let q = frame.trig_coefficients(f.normal());
        let a = p[2] * q[0] - p[0] * q[2];
        let b = p[0] * q[1] - p[1] * q[0];
        let d = p[2] * q[1] - p[1] * q[2];
        let r = a.hypot(b);
        if r < 1e-12 && d.abs() < 1e-12 {
            // u parallel to the facet normal: the objective is constant on
            // the curve, sample it
            out.extend((0..8).map(|m| frame.boundary_point(m as f64 * std::f64::consts::FRAC_PI_4)));
            continue;
        }
        if r < 1e-300 {
            continue;
        }
        let phi0 = b.atan2(a);
        let delta = (-d / r).clamp(-1.0, 1.0).acos();
        out.push(frame.boundary_point(phi0 + delta));
        out.push(frame.boundary_point(phi0 - delta));
    }
    out
}
