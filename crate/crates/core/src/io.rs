//! JSON schemas for every artifact the command line reads or writes, with
//! conversions to and from the library types.
//!
//! Floats are written by `serde_json` in shortest round-trip form, so a
//! parse of the output reproduces every `f64` bit for bit. Unknown fields
//! are rejected everywhere.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cone_geometry::{ConeSpec, RegionKind, SphericalRegion, UnitVector};
use crate::error::{Error, Result};
use crate::gauss_image::{CertificationReport, GaussImageSolution, MapComparison, PushforwardReport};
use crate::pseudo_cone::PseudoCone;
use crate::rochet::ContainmentReport;
use crate::transport::{DiscreteMeasure, DualPotentials, MonotonicityReport, Pairing, PlanEntry, TransportPlan};

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn unit(coords: Vec<f64>) -> Result<UnitVector> {
    UnitVector::new(coords).map_err(|e| Error::Schema(e.to_string()))
}

fn check_dim(dim: Option<usize>, found: usize) -> Result<()> {
    match dim {
        Some(d) if d != found => Err(Error::Schema(format!("declared dim {d}, vectors have {found}"))),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConeJson {
    Circular {
        axis: Vec<f64>,
        half_angle: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Polyhedral {
        generators: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

impl From<&ConeSpec> for ConeJson {
    fn from(c: &ConeSpec) -> Self {
        match c {
            ConeSpec::Circular(c) => Self::Circular {
                axis: c.axis().to_vec(),
                half_angle: c.half_angle(),
                dim: Some(c.axis().dim()),
            },
            ConeSpec::Polyhedral(p) => Self::Polyhedral {
                generators: p.generators().iter().map(|g| g.to_vec()).collect(),
                dim: Some(p.generators()[0].dim()),
            },
        }
    }
}

impl TryFrom<ConeJson> for ConeSpec {
    type Error = Error;

    fn try_from(c: ConeJson) -> Result<Self> {
        match c {
            ConeJson::Circular { axis, half_angle, dim } => {
                check_dim(dim, axis.len())?;
                ConeSpec::circular(unit(axis)?, half_angle)
            }
            ConeJson::Polyhedral { generators, dim } => {
                if let Some(g) = generators.first() {
                    check_dim(dim, g.len())?;
                }
                ConeSpec::polyhedral(generators.into_iter().map(unit).collect::<Result<_>>()?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetJson {
    pub u: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCheckJson {
    pub gap: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyJson {
    pub ok: bool,
    pub tol: f64,
    pub worst_violation: f64,
    pub per_pair: Vec<PairCheckJson>,
}

impl VerifyJson {
    pub fn new(r: &ContainmentReport, tol: f64) -> Self {
        Self {
            ok: r.ok,
            tol,
            worst_violation: r.worst_violation,
            per_pair: r
                .per_pair
                .iter()
                .map(|p| PairCheckJson {
                    gap: p.gap,
                    inside: p.inside,
                })
                .collect(),
        }
    }
}

/// `K` as its ambient cone and facet list. `build-cone` also fills the
/// Rochet offsets `a`, `b` and the containment report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoConeJson {
    pub cone: ConeJson,
    pub facets: Vec<FacetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyJson>,
}

impl From<&PseudoCone> for PseudoConeJson {
    fn from(k: &PseudoCone) -> Self {
        Self {
            cone: k.cone().into(),
            facets: k
                .facets()
                .iter()
                .map(|f| FacetJson {
                    u: f.normal().to_vec(),
                    b: f.offset(),
                })
                .collect(),
            a: None,
            b: None,
            verify: None,
        }
    }
}

impl TryFrom<PseudoConeJson> for PseudoCone {
    type Error = Error;

    fn try_from(k: PseudoConeJson) -> Result<Self> {
        let cone = ConeSpec::try_from(k.cone)?;
        let facets = k
            .facets
            .into_iter()
            .map(|f| Ok((unit(f.u)?, f.b)))
            .collect::<Result<_>>()?;
        PseudoCone::new(cone, facets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionJson {
    OmegaC,
    OmegaCDual,
}

impl From<RegionKind> for RegionJson {
    fn from(k: RegionKind) -> Self {
        match k {
            RegionKind::OmegaC => Self::OmegaC,
            RegionKind::OmegaCDual => Self::OmegaCDual,
        }
    }
}

impl From<RegionJson> for RegionKind {
    fn from(k: RegionJson) -> Self {
        match k {
            RegionJson::OmegaC => Self::OmegaC,
            RegionJson::OmegaCDual => Self::OmegaCDual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub p: Vec<f64>,
    pub w: f64,
}

/// A discrete measure. The ambient cone may be given inline or supplied
/// separately (see [`MeasureJson::into_measure`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureJson {
    pub region: RegionJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeJson>,
    pub atoms: Vec<AtomJson>,
}

impl From<&DiscreteMeasure> for MeasureJson {
    fn from(m: &DiscreteMeasure) -> Self {
        Self {
            region: m.kind().into(),
            cone: Some(m.cone().into()),
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    p: a.point.to_vec(),
                    w: a.weight,
                })
                .collect(),
        }
    }
}

impl MeasureJson {
    /// Builds the measure; `fallback` is used when no inline cone is given.
    /// An inline cone wins over the fallback.
    pub fn into_measure(self, fallback: Option<&ConeSpec>) -> Result<DiscreteMeasure> {
        let cone = match (self.cone, fallback) {
            (Some(c), _) => ConeSpec::try_from(c)?,
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(Error::Schema("measure has no cone and none was supplied".into())),
        };
        let region = SphericalRegion::new(self.region.into(), cone)?;
        let atoms = self
            .atoms
            .into_iter()
            .map(|a| Ok((unit(a.p)?, a.w)))
            .collect::<Result<_>>()?;
        DiscreteMeasure::new(region, atoms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairsJson {
    pub pairs: Vec<PairJson>,
}

impl From<&Pairing> for PairsJson {
    fn from(s: &Pairing) -> Self {
        Self {
            pairs: s
                .pairs()
                .iter()
                .map(|(v, u)| PairJson {
                    v: v.to_vec(),
                    u: u.to_vec(),
                })
                .collect(),
        }
    }
}

impl PairsJson {
    pub fn into_pairing(self, cone: &ConeSpec) -> Result<Pairing> {
        let pairs = self
            .pairs
            .into_iter()
            .map(|p| Ok((unit(p.v)?, unit(p.u)?)))
            .collect::<Result<_>>()?;
        Pairing::new(cone, pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueriesJson {
    pub queries: Vec<Vec<f64>>,
}

impl QueriesJson {
    pub fn unit_vectors(self) -> Result<Vec<UnitVector>> {
        self.queries.into_iter().map(unit).collect()
    }
}

/// `map[j] = i`: source atom `j` is sent whole to target atom `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanEntryJson {
    pub j: usize,
    pub i: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanJson {
    pub entries: Vec<PlanEntryJson>,
    pub total_cost: f64,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl PlanJson {
    pub fn new(plan: &TransportPlan, potentials: &DualPotentials, total_cost: f64) -> Self {
        Self {
            entries: plan
                .entries
                .iter()
                .map(|e| PlanEntryJson {
                    j: e.j,
                    i: e.i,
                    mass: e.mass,
                })
                .collect(),
            total_cost,
            phi: potentials.phi.clone(),
            psi: potentials.psi.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificationJson {
    pub ok: bool,
    pub trials: usize,
    pub seed: u64,
    /// Absent when there were no competitors.
    pub min_gap: Option<f64>,
    pub plan_competitors: usize,
    pub map_competitors: usize,
    pub units: Option<usize>,
}

impl CertificationJson {
    pub fn new(r: &CertificationReport, trials: usize, seed: u64) -> Self {
        Self {
            ok: r.ok,
            trials,
            seed,
            min_gap: r.min_gap.is_finite().then_some(r.min_gap),
            plan_competitors: r.plan_competitors,
            map_competitors: r.map_competitors,
            units: r.units,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushforwardJson {
    pub per_target_mass: Vec<f64>,
    pub tv_gap: f64,
    pub split_sources: Vec<usize>,
    pub merge_count: usize,
}

impl From<&PushforwardReport> for PushforwardJson {
    fn from(r: &PushforwardReport) -> Self {
        Self {
            per_target_mass: r.per_target_mass.clone(),
            tv_gap: r.tv_gap,
            split_sources: r.split_sources.clone(),
            merge_count: r.merge_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub cone_k: PseudoConeJson,
    pub mu: MeasureJson,
    pub nu: MeasureJson,
    pub plan: PlanJson,
    pub pushforward: PushforwardJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertificationJson>,
}

impl SolutionJson {
    pub fn new(sol: &GaussImageSolution, pushforward: &PushforwardReport) -> Self {
        Self {
            cone_k: (&sol.cone_k).into(),
            mu: (&sol.mu).into(),
            nu: (&sol.nu).into(),
            plan: PlanJson::new(&sol.plan, &sol.potentials, sol.total_cost),
            pushforward: pushforward.into(),
            certification: None,
        }
    }

    /// Rebuilds the solution and re-checks all of its certificates.
    pub fn into_solution(self) -> Result<GaussImageSolution> {
        let mu = self.mu.into_measure(None)?;
        let nu = self.nu.into_measure(None)?;
        let cone_k = PseudoCone::try_from(self.cone_k)?;
        for e in &self.plan.entries {
            if e.j >= mu.len() || e.i >= nu.len() {
                return Err(Error::Schema(format!("plan entry ({}, {}) out of range", e.j, e.i)));
            }
        }
        if self.plan.phi.len() != mu.len() || self.plan.psi.len() != nu.len() {
            return Err(Error::Schema("potential lengths do not match the measures".into()));
        }
        let sol = GaussImageSolution {
            plan: TransportPlan {
                entries: self
                    .plan
                    .entries
                    .iter()
                    .map(|e| PlanEntry {
                        j: e.j,
                        i: e.i,
                        mass: e.mass,
                    })
                    .collect(),
                sources: mu.len(),
                targets: nu.len(),
            },
            potentials: DualPotentials {
                phi: self.plan.phi,
                psi: self.plan.psi,
            },
            total_cost: self.plan.total_cost,
            cone_k,
            mu,
            nu,
        };
        sol.validate()?;
        Ok(sol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotoneJson {
    pub monotone: bool,
    pub method: String,
    pub worst_cycle: Vec<usize>,
    pub worst_weight: f64,
}

impl MonotoneJson {
    pub fn new(r: &MonotonicityReport, method: &str) -> Self {
        Self {
            monotone: r.monotone,
            method: method.into(),
            worst_cycle: r.worst_cycle.clone(),
            worst_weight: r.worst_weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapComparisonJson {
    pub valid: bool,
    pub map_cost: f64,
    pub optimal_cost: f64,
    pub gap: f64,
}

impl From<&MapComparison> for MapComparisonJson {
    fn from(c: &MapComparison) -> Self {
        Self {
            valid: c.valid,
            map_cost: c.map_cost,
            optimal_cost: c.optimal_cost,
            gap: c.gap,
        }
    }
}
