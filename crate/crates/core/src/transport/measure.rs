use crate::cone_geometry::{ConeSpec, RegionKind, SphericalRegion, UnitVector};
use crate::error::{Error, Result};

/// Weights must sum to one within this tolerance.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Atoms closer than this (radians) are rejected as duplicates.
pub const DISTINCT_ANGLE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: UnitVector,
    pub weight: f64,
}

/// A probability measure with finitely many atoms strictly inside a
/// spherical region.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    region: SphericalRegion,
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn new(region: SphericalRegion, atoms: Vec<(UnitVector, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("a measure needs at least one atom".into()));
        }
        let n = region.cone().dim();
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for (k, (point, weight)) in atoms.into_iter().enumerate() {
            if point.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: point.dim(),
                });
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "atom {k}: weight {weight} must be positive"
                )));
            }
            if !region.contains(&point) {
                return Err(Error::Domain(format!("atom {k} is not strictly inside the region")));
            }
            if let Some(prev) = out.iter().position(|a| a.point.angle_to(&point) <= DISTINCT_ANGLE) {
                return Err(Error::InvalidInput(format!("atoms {prev} and {k} coincide")));
            }
            out.push(Atom { point, weight });
        }
        let total: f64 = out.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidInput(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { region, atoms: out })
    }

    /// Equal weights `1/len`.
    pub fn uniform(region: SphericalRegion, points: Vec<UnitVector>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        Self::new(region, points.into_iter().map(|p| (p, w)).collect())
    }

    pub fn region(&self) -> &SphericalRegion {
        &self.region
    }

    pub fn cone(&self) -> &ConeSpec {
        self.region.cone()
    }

    pub fn kind(&self) -> RegionKind {
        self.region.kind()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &UnitVector> {
        self.atoms.iter().map(|a| &a.point)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.weight).collect()
    }
}

/// Finite set of pairs `(v, u)` with `v ∈ Ω_C` and `u ∈ Ω_{C°}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pairs: Vec<(UnitVector, UnitVector)>,
}

impl Pairing {
    pub fn new(cone: &ConeSpec, pairs: Vec<(UnitVector, UnitVector)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidInput("a pairing needs at least one pair".into()));
        }
        let n = cone.dim();
        for (k, (v, u)) in pairs.iter().enumerate() {
            for w in [v, u] {
                if w.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: w.dim(),
                    });
                }
            }
            if !cone.in_interior(v) {
                return Err(Error::Domain(format!("pair {k}: v is not in Ω_C")));
            }
            if !cone.in_dual_interior(u) {
                return Err(Error::Domain(format!("pair {k}: u is not in Ω_{{C°}}")));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(UnitVector, UnitVector)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Subset by indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            pairs: indices.iter().map(|&k| self.pairs[k].clone()).collect(),
        }
    }
}
