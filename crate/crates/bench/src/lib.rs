//! Seeded instances shared by the benchmarks.

use std::f64::consts::FRAC_PI_4;

use conic_transport::{ConeSpec, DiscreteMeasure, PseudoCone, RegionKind, SphericalRegion, UnitVector};

/// Circular cone of half-angle π/4 around the last axis of R^n.
pub fn round_cone(n: usize) -> ConeSpec {
    let mut axis = vec![0.0; n];
    axis[n - 1] = 1.0;
    ConeSpec::circular(UnitVector::new(axis).expect("unit axis"), FRAC_PI_4).expect("valid cone")
}

/// Square-based polyhedral cone in R^3.
pub fn square_cone() -> ConeSpec {
    let g = |x: f64, y: f64| UnitVector::new(vec![x, y, 1.5]).expect("generator");
    ConeSpec::polyhedral(vec![g(1.0, 1.0), g(-1.0, 1.0), g(-1.0, -1.0), g(1.0, -1.0)]).expect("valid cone")
}

/// `K` with `facets` normals sampled from `Ω_{C°}` and offsets cycling in `[0.5, 2]`.
pub fn pseudo_cone(cone: &ConeSpec, facets: usize, seed: u64) -> PseudoCone {
    let dual = SphericalRegion::new(RegionKind::OmegaCDual, cone.clone()).expect("region");
    let normals = dual.sample(facets, seed);
    PseudoCone::new(
        cone.clone(),
        normals
            .into_iter()
            .enumerate()
            .map(|(i, u)| (u, 0.5 + 1.5 * ((i * 7) % 11) as f64 / 10.0))
            .collect(),
    )
    .expect("valid pseudo-cone")
}

/// Uniform `μ` on `Ω_{C°}` with `m` atoms and `ν` on `Ω_C` with `n` atoms.
pub fn measures(cone: &ConeSpec, m: usize, n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    let dual = SphericalRegion::new(RegionKind::OmegaCDual, cone.clone()).expect("region");
    let primal = SphericalRegion::new(RegionKind::OmegaC, cone.clone()).expect("region");
    let mu = DiscreteMeasure::uniform(dual.clone(), dual.sample(m, seed)).expect("measure");
    let nu = DiscreteMeasure::uniform(primal.clone(), primal.sample(n, seed + 1)).expect("measure");
    (mu, nu)
}
