//! Ambient cones, their duals, spherical regions and the log cost.
//!
//! A [`ConeSpec`] is a pointed closed convex cone `C` with interior points.
//! Directions `v` live in `Ω_C = S^{n-1} ∩ int C` and normals `u` in
//! `Ω_{C°} = S^{n-1} ∩ int C°`, where `C° = {x : <x,y> <= 0 for all y in C}`.
//! On these regions `<u,v> < 0` strictly and the transport cost is
//! `c(u,v) = log|<u,v>|`.

use std::f64::consts::FRAC_PI_2;
use std::ops::Deref;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;

/// Below this value of `|<u,v>|` the log cost is refused.
pub const NEAR_ORTHOGONAL: f64 = 1e-12;

/// Angular distance kept between sampled points and the region boundary.
pub const SAMPLE_MARGIN: f64 = 1e-3;

const UNIT_TOL: f64 = 1e-12;

/// A direction on the unit sphere of R^n, n >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Normalizes `coords`. Fails on zero, non-finite or one-dimensional input.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "unit vectors need dimension >= 2, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        let n = linalg::norm(&coords);
        if n == 0.0 {
            return Err(Error::InvalidInput("zero vector has no direction".into()));
        }
        if (n - 1.0).abs() <= UNIT_TOL {
            return Ok(Self(coords));
        }
        Ok(Self(linalg::scale(&coords, 1.0 / n)))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    /// Angle in radians between two directions.
    pub fn angle_to(&self, other: &UnitVector) -> f64 {
        linalg::angle(&self.0, &other.0)
    }
}

impl Deref for UnitVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Round cone `{x : <x,axis> >= |x| cos(half_angle)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularCone {
    axis: UnitVector,
    half_angle: f64,
}

impl CircularCone {
    pub fn axis(&self) -> &UnitVector {
        &self.axis
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }
}

/// Finitely generated cone, stored with both its generators and its
/// outward facet normals (`C = {x : <x,f> <= 0 for every facet normal f}`).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    generators: Vec<UnitVector>,
    facets: Vec<UnitVector>,
}

impl PolyhedralCone {
    pub fn generators(&self) -> &[UnitVector] {
        &self.generators
    }

    pub fn facet_normals(&self) -> &[UnitVector] {
        &self.facets
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeSpec {
    Circular(CircularCone),
    Polyhedral(PolyhedralCone),
}

impl ConeSpec {
    pub fn circular(axis: UnitVector, half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
            return Err(Error::DegenerateCone(format!(
                "half-angle {half_angle} must lie strictly between 0 and pi/2"
            )));
        }
        Ok(Self::Circular(CircularCone { axis, half_angle }))
    }

    /// Cone generated by `generators`; checks that it is pointed and has
    /// interior points.
    pub fn polyhedral(generators: Vec<UnitVector>) -> Result<Self> {
        let n = generators.first().map(UnitVector::dim).unwrap_or(0);
        if n < 2 {
            return Err(Error::DegenerateCone("no generators".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        if generators.len() < n {
            return Err(Error::DegenerateCone(format!(
                "{} generators cannot span R^{n}",
                generators.len()
            )));
        }
        let rows: Vec<Vec<f64>> = generators.iter().map(|g| g.0.clone()).collect();
        if linalg::rank(&rows, 1e-10) < n {
            return Err(Error::DegenerateCone("generators do not span".into()));
        }
        let facets = facets_from_generators(&generators, n);
        let facet_rows: Vec<Vec<f64>> = facets.iter().map(|f| f.0.clone()).collect();
        if facets.is_empty() || linalg::rank(&facet_rows, 1e-10) < n {
            return Err(Error::DegenerateCone("cone contains a line".into()));
        }
        // sum of the dual generators is interior to the dual cone
        let mut sep = vec![0.0; n];
        for f in &facets {
            sep = linalg::add(&sep, f);
        }
        if generators.iter().any(|g| linalg::dot(g, &sep) >= -1e-12) {
            return Err(Error::DegenerateCone("no strictly separating functional".into()));
        }
        Ok(Self::Polyhedral(PolyhedralCone { generators, facets }))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Circular(c) => c.axis.dim(),
            Self::Polyhedral(p) => p.generators[0].dim(),
        }
    }

    /// The dual cone `C°`.
    pub fn dual(&self) -> Result<Self> {
        match self {
            Self::Circular(c) => Self::circular(c.axis.negated(), FRAC_PI_2 - c.half_angle),
            Self::Polyhedral(p) => Self::polyhedral(p.facets.clone()),
        }
    }

    /// Strict membership `x ∈ int C`.
    pub fn in_interior(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            Self::Circular(c) => linalg::dot(x, &c.axis) > linalg::norm(x) * c.half_angle.cos(),
            Self::Polyhedral(p) => p.facets.iter().all(|f| linalg::dot(x, f) < 0.0),
        }
    }

    /// Strict membership `x ∈ int C°`, evaluated without building the dual.
    pub fn in_dual_interior(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            Self::Circular(c) => -linalg::dot(x, &c.axis) > linalg::norm(x) * c.half_angle.sin(),
            Self::Polyhedral(p) => p.generators.iter().all(|g| linalg::dot(x, g) < 0.0),
        }
    }

    /// Closed membership with a tolerance relative to `|x|`.
    pub fn contains(&self, x: &[f64], rel_tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let nx = linalg::norm(x);
        match self {
            Self::Circular(c) => linalg::dot(x, &c.axis) >= nx * c.half_angle.cos() - rel_tol * nx,
            Self::Polyhedral(p) => p.facets.iter().all(|f| linalg::dot(x, f) <= rel_tol * nx),
        }
    }

    /// Lower bound on the angular distance from the direction of `x` to
    /// `bd C`; negative outside. Exact for circular cones.
    pub fn boundary_margin(&self, x: &[f64]) -> f64 {
        match self {
            Self::Circular(c) => c.half_angle - linalg::angle(x, &c.axis),
            Self::Polyhedral(p) => {
                let nx = linalg::norm(x);
                p.facets
                    .iter()
                    .map(|f| (-linalg::dot(x, f) / nx).clamp(-1.0, 1.0).asin())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Outward normals of the facets when `C` is an intersection of
    /// finitely many halfspaces (polyhedral cones, and circular cones in
    /// the plane). `None` for round cones in dimension >= 3.
    pub fn linear_facets(&self) -> Option<Vec<UnitVector>> {
        match self {
            Self::Polyhedral(p) => Some(p.facets.clone()),
            Self::Circular(c) if c.axis.dim() == 2 => {
                let a = c.axis.as_slice();
                let perp = [-a[1], a[0]];
                let (s, co) = c.half_angle.sin_cos();
                let facets = [1.0, -1.0]
                    .iter()
                    .map(|sign| {
                        let ray = linalg::axpy(&linalg::scale(a, co), sign * s, &perp);
                        let mut f = vec![-ray[1], ray[0]];
                        if linalg::dot(&f, a) > 0.0 {
                            f = linalg::scale(&f, -1.0);
                        }
                        UnitVector(f)
                    })
                    .collect();
                Some(facets)
            }
            Self::Circular(_) => None,
        }
    }
}

fn facets_from_generators(gens: &[UnitVector], n: usize) -> Vec<UnitVector> {
    let mut facets: Vec<UnitVector> = Vec::new();
    for combo in (0..gens.len()).combinations(n - 1) {
        let rows: Vec<&[f64]> = combo.iter().map(|&i| gens[i].as_slice()).collect();
        let w = linalg::orthogonal_complement(&rows, n);
        if linalg::norm(&w) < 1e-10 {
            continue;
        }
        let mut w = linalg::normalized(&w).expect("nonzero");
        let (mut pos, mut neg) = (false, false);
        for g in gens {
            let d = linalg::dot(g, &w);
            pos |= d > 1e-12;
            neg |= d < -1e-12;
        }
        match (pos, neg) {
            (true, true) | (false, false) => continue,
            (true, false) => w = linalg::scale(&w, -1.0),
            (false, true) => {}
        }
        if facets.iter().all(|f| linalg::angle(f, &w) > 1e-9) {
            facets.push(UnitVector(w));
        }
    }
    facets
}

/// Which open spherical region of a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// `Ω_C`, directions of pseudo-cone points.
    OmegaC,
    /// `Ω_{C°}`, outer normals.
    OmegaCDual,
}

/// `Ω_C` or `Ω_{C°}` for a fixed ambient cone.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalRegion {
    which: RegionKind,
    cone: ConeSpec,
    // C itself for OmegaC, C° for OmegaCDual
    support: ConeSpec,
}

impl SphericalRegion {
    pub fn new(which: RegionKind, cone: ConeSpec) -> Result<Self> {
        let support = match which {
            RegionKind::OmegaC => cone.clone(),
            RegionKind::OmegaCDual => cone.dual()?,
        };
        Ok(Self { which, cone, support })
    }

    pub fn kind(&self) -> RegionKind {
        self.which
    }

    /// The ambient cone `C` (not the dual, even for `Ω_{C°}`).
    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// `C` for `Ω_C`, `C°` for `Ω_{C°}`.
    pub fn region_cone(&self) -> &ConeSpec {
        &self.support
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self.which {
            RegionKind::OmegaC => self.cone.in_interior(x),
            RegionKind::OmegaCDual => self.cone.in_dual_interior(x),
        }
    }

    /// Deterministic pseudorandom directions at angular distance at least
    /// [`SAMPLE_MARGIN`] from the region boundary.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<UnitVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| sample_in_cone(&self.support, SAMPLE_MARGIN, &mut rng))
            .collect()
    }
}

/// One pseudorandom unit vector strictly inside `cone`, `margin` radians
/// away from its boundary.
pub fn sample_in_cone<R: Rng + ?Sized>(cone: &ConeSpec, margin: f64, rng: &mut R) -> UnitVector {
    match cone {
        ConeSpec::Circular(c) => {
            let n = c.axis.dim();
            let max_angle = (c.half_angle - margin).max(0.0);
            let cos_t: f64 = rng.random_range(max_angle.cos()..=1.0);
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let w = random_orthogonal_direction(&c.axis, n, rng);
            let v = linalg::axpy(&linalg::scale(&c.axis, cos_t), sin_t, &w);
            UnitVector::new(v).expect("unit combination")
        }
        ConeSpec::Polyhedral(p) => {
            let n = p.generators[0].dim();
            for _ in 0..100_000 {
                let mut x = vec![0.0; n];
                for g in &p.generators {
                    let w: f64 = rng.sample(Exp1);
                    x = linalg::axpy(&x, w, g);
                }
                if cone.boundary_margin(&x) >= margin {
                    return UnitVector::new(x).expect("interior point is nonzero");
                }
            }
            let mut center = vec![0.0; n];
            for g in &p.generators {
                center = linalg::add(&center, g);
            }
            UnitVector::new(center).expect("interior point is nonzero")
        }
    }
}

fn random_orthogonal_direction<R: Rng + ?Sized>(axis: &[f64], n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let w = linalg::axpy(&g, -linalg::dot(&g, axis), axis);
        if linalg::norm(&w) > 1e-6 {
            return linalg::normalized(&w).expect("nonzero");
        }
    }
}

/// `log|<a,b>|` with the near-orthogonality guard but no region checks.
pub fn log_abs_dot(a: &[f64], b: &[f64]) -> Result<f64> {
    let d = linalg::dot(a, b).abs();
    if d < NEAR_ORTHOGONAL {
        return Err(Error::NearOrthogonal { dot: d });
    }
    Ok(d.ln())
}

/// `c(u,v) = log|<u,v>|` for a normal `u ∈ Ω_{C°}` and a direction
/// `v ∈ Ω_C`. The value is symmetric in its two arguments and never
/// positive.
pub fn cost(cone: &ConeSpec, u: &UnitVector, v: &UnitVector) -> Result<f64> {
    let n = cone.dim();
    for w in [u, v] {
        if w.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.dim(),
            });
        }
    }
    if !cone.in_dual_interior(u) {
        return Err(Error::Domain("normal u is not in the interior of C°".into()));
    }
    if !cone.in_interior(v) {
        return Err(Error::Domain("direction v is not in the interior of C".into()));
    }
    log_abs_dot(u, v)
}

/// `dual_cone` as a free function.
pub fn dual_cone(cone: &ConeSpec) -> Result<ConeSpec> {
    cone.dual()
}

pub fn in_interior(cone: &ConeSpec, x: &[f64]) -> bool {
    cone.in_interior(x)
}

pub fn sample_region(region: &SphericalRegion, count: usize, seed: u64) -> Vec<UnitVector> {
    region.sample(count, seed)
}
