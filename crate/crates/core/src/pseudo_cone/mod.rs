//! Finitely generated C-pseudo-cones.
//!
//! A [`PseudoCone`] is `K = ∩_i {x ∈ C : <x,u_i> <= -b_i}` with facet
//! normals `u_i ∈ Ω_{C°}` and offsets `b_i > 0`. It never contains the
//! origin and satisfies `K + C = K ⊂ C`.
//!
//! The radial function has the closed form `ρ_K(v) = max_i b_i / |<v,u_i>|`.
//! Support values and the reverse radial Gauss map both come from
//! minimizing `v ↦ |<u,v>| ρ_K(v)` over the closure of `Ω_C`; see
//! [`SupportOracle`].

mod grid;
mod support;

pub use grid::{support_abs_grid, GridOptions, GridResult};
pub use support::{Minimization, SupportMethod, SupportOracle};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::cone_geometry::{sample_in_cone, ConeSpec, RegionKind, SphericalRegion, UnitVector};
use crate::error::{Error, Result};
use crate::linalg;

/// Relative tie threshold on objective values for ambiguity detection.
pub const TIE_REL_TOL: f64 = 1e-9;
/// Minimizers closer than this (radians) are the same point.
pub const TIE_ANGLE: f64 = 1e-7;
/// Default relative tolerance of [`PseudoCone::in_pseudo_subdifferential`].
pub const SUBDIFFERENTIAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    normal: UnitVector,
    offset: f64,
}

impl Facet {
    pub fn normal(&self) -> &UnitVector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// Image of a normal under the reverse radial Gauss map.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussImage {
    Unique(UnitVector),
    /// The normal is attained at several boundary points, or only on
    /// `K ∩ bd C`; holds the distinct near-optimal directions.
    Ambiguous(Vec<UnitVector>),
}

impl GaussImage {
    pub fn unique(&self) -> Option<&UnitVector> {
        match self {
            Self::Unique(v) => Some(v),
            Self::Ambiguous(_) => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, Self::Unique(_))
    }

    /// Same verdict, and for unique images the same direction within `angle_tol`.
    pub fn agrees_with(&self, other: &GaussImage, angle_tol: f64) -> bool {
        match (self, other) {
            (Self::Unique(a), Self::Unique(b)) => a.angle_to(b) <= angle_tol,
            (Self::Ambiguous(_), Self::Ambiguous(_)) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoCone {
    cone: ConeSpec,
    facets: Vec<Facet>,
}

impl PseudoCone {
    /// Validates that every normal is strictly inside `Ω_{C°}` and every
    /// offset is positive and finite.
    pub fn new(cone: ConeSpec, facets: Vec<(UnitVector, f64)>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::InvalidInput("a pseudo-cone needs at least one facet".into()));
        }
        let n = cone.dim();
        let facets = facets
            .into_iter()
            .enumerate()
            .map(|(i, (normal, offset))| {
                if normal.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: normal.dim(),
                    });
                }
                if !(offset.is_finite() && offset > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "facet {i}: offset {offset} must be positive"
                    )));
                }
                if !cone.in_dual_interior(&normal) {
                    return Err(Error::Domain(format!("facet {i}: normal is not in the interior of C°")));
                }
                Ok(Facet { normal, offset })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cone, facets })
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// `ρ_K(v) = min{r > 0 : r v ∈ K}` for `v ∈ Ω_C`.
    pub fn radial(&self, v: &UnitVector) -> Result<f64> {
        self.check_direction(v)?;
        Ok(self.radial_unchecked(v))
    }

    /// The max-ratio formula without the region check. Valid for any unit
    /// `v` in the closed cone.
    pub fn radial_unchecked(&self, v: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset / linalg::dot(v, &f.normal).abs())
            .fold(0.0, f64::max)
    }

    /// Facets whose ratio `b_i / |<v,u_i>|` is within `rel_tol` of the
    /// maximum, i.e. the facets through the boundary point `ρ_K(v) v`.
    pub fn active_facets(&self, v: &[f64], rel_tol: f64) -> Vec<usize> {
        let ratios: Vec<f64> = self
            .facets
            .iter()
            .map(|f| f.offset / linalg::dot(v, &f.normal).abs())
            .collect();
        let max = ratios.iter().copied().fold(0.0, f64::max);
        (0..ratios.len())
            .filter(|&i| ratios[i] >= max * (1.0 - rel_tol))
            .collect()
    }

    /// Closed membership `x ∈ K`, with a tolerance of `1e-12` relative to
    /// the facet offsets and `|x|` so that computed boundary points count.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let nx = linalg::norm(x);
        self.cone.contains(x, 1e-12)
            && self
                .facets
                .iter()
                .all(|f| linalg::dot(x, &f.normal) <= -f.offset + 1e-12 * (f.offset + nx))
    }

    /// `λK`: every offset multiplied by `λ > 0`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "dilation factor {lambda} must be positive"
            )));
        }
        Ok(Self {
            cone: self.cone.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset * lambda,
                })
                .collect(),
        })
    }

    /// Precomputes the candidate set used by support and Gauss-map queries.
    /// Reuse it when querying the same pseudo-cone many times.
    pub fn oracle(&self) -> SupportOracle<'_> {
        SupportOracle::new(self)
    }

    /// `h̄_K(u) = -sup{<u,y> : y ∈ K}` for `u ∈ Ω_{C°}`.
    pub fn support_abs(&self, u: &UnitVector) -> Result<f64> {
        self.oracle().support_abs(u)
    }

    /// Reverse radial Gauss map `α_K*(u)`.
    pub fn reverse_gauss(&self, u: &UnitVector) -> Result<GaussImage> {
        self.oracle().reverse_gauss(u)
    }

    /// Whether `u` is an outer normal of `K` at `ρ_K(v) v`, up to a relative
    /// tolerance on the support equality.
    pub fn in_pseudo_subdifferential(&self, v: &UnitVector, u: &UnitVector, tol: f64) -> Result<bool> {
        self.oracle().in_pseudo_subdifferential(v, u, tol)
    }

    /// Indices of facets that can be dropped without changing the radial
    /// function on a probe set (candidate points plus 1000 samples of `Ω_C`).
    /// Removal is greedy, so only one copy of a repeated facet is kept.
    pub fn redundant_facets(&self) -> Vec<usize> {
        let mut probes: Vec<Vec<f64>> = self.oracle().candidate_directions().to_vec();
        if let Ok(region) = SphericalRegion::new(RegionKind::OmegaC, self.cone.clone()) {
            probes.extend(region.sample(1000, 0x5eed).into_iter().map(UnitVector::into_inner));
        }
        let mut kept: Vec<bool> = vec![true; self.facets.len()];
        let mut redundant = Vec::new();
        for i in 0..self.facets.len() {
            let needed = probes.iter().any(|v| {
                let own = self.facets[i].offset / linalg::dot(v, &self.facets[i].normal).abs();
                let others = (0..self.facets.len())
                    .filter(|&j| j != i && kept[j])
                    .map(|j| self.facets[j].offset / linalg::dot(v, &self.facets[j].normal).abs())
                    .fold(0.0, f64::max);
                own > others * (1.0 + 1e-12)
            });
            if !needed {
                kept[i] = false;
                redundant.push(i);
            }
        }
        redundant
    }

    /// Copy without the facets reported by [`Self::redundant_facets`].
    pub fn prune(&self) -> Self {
        let drop = self.redundant_facets();
        Self {
            cone: self.cone.clone(),
            facets: self
                .facets
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, f)| f.clone())
                .collect(),
        }
    }

    /// Pseudorandom pairs `(v, u) ∈ ∂•K` with `v ∈ Ω_C`, mixing unique
    /// reverse Gauss images of random normals, skeleton directions with
    /// random combinations of their active normals, and facet normals with
    /// directions through their facet. May return fewer than `count` pairs
    /// when `K` offers few admissible points.
    pub fn sample_subdifferential(&self, count: usize, seed: u64) -> Vec<(UnitVector, UnitVector)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let oracle = self.oracle();
        let dual = self.cone.dual().expect("dual of a valid cone");
        let vertices: Vec<&Vec<f64>> = oracle
            .candidate_directions()
            .iter()
            .filter(|v| self.cone.boundary_margin(v) > 1e-6)
            .collect();
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count && attempts < 100 * count + 100 {
            attempts += 1;
            match rng.random_range(0..3) {
                0 => {
                    let u = sample_in_cone(&dual, 1e-3, &mut rng);
                    if let Ok(GaussImage::Unique(v)) = oracle.reverse_gauss(&u) {
                        out.push((v, u));
                    }
                }
                1 if !vertices.is_empty() => {
                    let v = vertices[rng.random_range(0..vertices.len())];
                    let mut u = vec![0.0; self.dim()];
                    for i in self.active_facets(v, 1e-9) {
                        let w: f64 = rng.sample(Exp1);
                        u = linalg::axpy(&u, w, &self.facets[i].normal);
                    }
                    if let Ok(u) = UnitVector::new(u) {
                        if self.cone.in_dual_interior(&u) {
                            out.push((UnitVector::new(v.clone()).expect("unit"), u));
                        }
                    }
                }
                _ => {
                    let i = rng.random_range(0..self.facets.len());
                    let u = self.facets[i].normal.clone();
                    let Ok(m) = oracle.minimize(&u) else { continue };
                    let mut y = vec![0.0; self.dim()];
                    for v in &m.minimizers {
                        let w: f64 = rng.sample(Exp1);
                        y = linalg::axpy(&y, w * self.radial_unchecked(v), v);
                    }
                    if let Ok(v) = UnitVector::new(y) {
                        if self.cone.boundary_margin(&v) > 1e-6 {
                            out.push((v, u));
                        }
                    }
                }
            }
        }
        out
    }

    pub(crate) fn check_direction(&self, v: &UnitVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        if !self.cone.in_interior(v) {
            return Err(Error::Domain("direction is not in Ω_C".into()));
        }
        Ok(())
    }

    pub(crate) fn check_normal(&self, u: &UnitVector) -> Result<()> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        if !self.cone.in_dual_interior(u) {
            return Err(Error::Domain("normal is not in Ω_{C°}".into()));
        }
        Ok(())
    }
}

pub fn radial(k: &PseudoCone, v: &UnitVector) -> Result<f64> {
    k.radial(v)
}

pub fn support_abs(k: &PseudoCone, u: &UnitVector) -> Result<f64> {
    k.support_abs(u)
}

pub fn reverse_gauss(k: &PseudoCone, u: &UnitVector) -> Result<GaussImage> {
    k.reverse_gauss(u)
}

pub fn in_pseudo_subdifferential(k: &PseudoCone, v: &UnitVector, u: &UnitVector, tol: f64) -> Result<bool> {
    k.in_pseudo_subdifferential(v, u, tol)
}

pub fn dilate(k: &PseudoCone, lambda: f64) -> Result<PseudoCone> {
    k.dilate(lambda)
}

pub fn contains(k: &PseudoCone, x: &[f64]) -> bool {
    k.contains(x)
}

#[cfg(test)]
mod tests;
