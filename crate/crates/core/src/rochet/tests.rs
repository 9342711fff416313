use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cone_geometry::{sample_in_cone, RegionKind, SphericalRegion};
use crate::transport::{check_monotone_bruteforce, check_monotone_cycles};

fn uv(x: &[f64]) -> UnitVector {
    UnitVector::new(x.to_vec()).unwrap()
}

fn round3() -> ConeSpec {
    ConeSpec::circular(uv(&[0.0, 0.0, 1.0]), FRAC_PI_4).unwrap()
}

fn random_k(rng: &mut ChaCha8Rng, cone: &ConeSpec, facets: usize) -> PseudoCone {
    let dual = cone.dual().unwrap();
    PseudoCone::new(
        cone.clone(),
        (0..facets)
            .map(|_| (sample_in_cone(&dual, 0.05, rng), rng.random_range(0.5..2.0)))
            .collect(),
    )
    .unwrap()
}

/// `(v, u_i)` for every interior vertex direction `v` of `K` and every
/// facet active there. Returns `None` unless every facet appears and the
/// facets are linked through shared vertices, which is what makes the
/// construction recover `K` itself.
fn vertex_pairs(k: &PseudoCone) -> Option<Pairing> {
    let oracle = k.oracle();
    let nf = k.facets().len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn root(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = root(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut pairs = Vec::new();
    let mut covered = vec![false; nf];
    for v in oracle.candidate_directions() {
        if k.cone().boundary_margin(v) <= 1e-6 {
            continue;
        }
        let active = k.active_facets(v, 1e-9);
        if active.len() < 2 {
            continue;
        }
        for &i in &active {
            covered[i] = true;
            pairs.push((uv(v), k.facets()[i].normal().clone()));
            let (a, b) = (root(&mut parent, i), root(&mut parent, active[0]));
            parent[a] = b;
        }
    }
    let r0 = root(&mut parent, 0);
    let linked = (0..nf).all(|i| root(&mut parent, i) == r0);
    (covered.iter().all(|&c| c) && linked).then(|| Pairing::new(k.cone(), pairs).unwrap())
}

#[test]
fn singleton_antipodal_pair_gives_unit_offset() {
    let cone = ConeSpec::circular(uv(&[0.0, 1.0]), FRAC_PI_4).unwrap();
    let s = Pairing::new(&cone, vec![(uv(&[0.0, 1.0]), uv(&[0.0, -1.0]))]).unwrap();
    let p = build_potential(&s, 0, &cone).unwrap();
    assert_eq!(p.a(), &[0.0]);
    assert_eq!(p.b(), &[1.0]);
    assert_eq!(p.phi(&uv(&[0.0, 1.0])).unwrap(), 0.0);
    let k = p.build_cone().unwrap();
    assert_eq!(k.facets()[0].offset(), 1.0);
    let r = verify_containment(&s, &k, 1e-8).unwrap();
    assert!(r.ok);
    assert_eq!(r.worst_violation, 0.0);
}

#[test]
fn singleton_general_pair() {
    // a_0 = -c(v_0, u_0) keeps φ(v_0) = 0
    let cone = ConeSpec::circular(uv(&[0.0, 1.0]), FRAC_PI_4).unwrap();
    let v0 = uv(&[0.3f64.sin(), 0.3f64.cos()]);
    let u0 = uv(&[0.1, -1.0]);
    let s = Pairing::new(&cone, vec![(v0.clone(), u0.clone())]).unwrap();
    let p = build_potential(&s, 0, &cone).unwrap();
    assert!((p.a()[0] + cost(&cone, &u0, &v0).unwrap()).abs() < 1e-15);
    assert!(p.phi(&v0).unwrap().abs() < 1e-15);
    let k = p.build_cone().unwrap();
    assert!((k.radial(&v0).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn recovers_facet_offsets_up_to_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cone = round3();
    let mut done = 0;
    for _ in 0..100 {
        let k = random_k(&mut rng, &cone, 4);
        let Some(s) = vertex_pairs(&k) else { continue };
        let p = build_potential(&s, 0, &cone).unwrap();
        // each pair carries one facet normal; its offset must match up to scale
        let offset_of = |u: &UnitVector| {
            k.facets()
                .iter()
                .find(|f| f.normal().angle_to(u) < 1e-12)
                .unwrap()
                .offset()
        };
        let scale = p.b()[0] / offset_of(&p.pairs().pairs()[0].1);
        for (b, (_, u)) in p.b().iter().zip(p.pairs().pairs()) {
            assert!((b / offset_of(u) - scale).abs() <= 1e-9 * scale);
        }
        // radial ratios agree after normalization
        let built = p.build_cone().unwrap();
        let region = SphericalRegion::new(RegionKind::OmegaC, cone.clone()).unwrap();
        for v in region.sample(50, 1) {
            let ratio = built.radial(&v).unwrap() / k.radial(&v).unwrap();
            assert!((ratio - scale).abs() <= 1e-9 * scale);
        }
        done += 1;
        if done == 10 {
            break;
        }
    }
    assert!(done >= 5, "only {done} usable instances");
}

#[test]
fn roundtrip_from_subdifferential_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cone = round3();
    for trial in 0..40 {
        let k = random_k(&mut rng, &cone, 2 + trial % 5);
        let pairs = k.sample_subdifferential(3 + trial % 5, trial as u64);
        let s = Pairing::new(&cone, pairs).unwrap();
        assert!(check_monotone_bruteforce(&s, &cone).unwrap());
        assert!(check_monotone_cycles(&s, &cone).unwrap());
        let p = build_potential(&s, 0, &cone).unwrap();
        let built = p.build_cone().unwrap();
        let r = verify_containment(&s, &built, 1e-8).unwrap();
        assert!(r.ok, "trial {trial}: worst {}", r.worst_violation);
        assert!(r.worst_violation <= 1e-8);
        // φ = -log ρ on random directions, and φ(v_0) = 0
        let region = SphericalRegion::new(RegionKind::OmegaC, cone.clone()).unwrap();
        for v in region.sample(20, trial as u64) {
            let lhs = p.phi(&v).unwrap();
            assert!((lhs + built.radial(&v).unwrap().ln()).abs() <= 1e-10);
        }
        assert!(p.phi(&s.pairs()[0].0).unwrap().abs() <= 1e-12);
    }
}

#[test]
fn base_point_changes_only_the_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cone = round3();
    let s = loop {
        let k = random_k(&mut rng, &cone, 4);
        if let Some(s) = vertex_pairs(&k) {
            break s;
        }
    };
    let p0 = build_potential(&s, 0, &cone).unwrap();
    for base in 1..s.len() {
        let p = build_potential(&s, base, &cone).unwrap();
        let f = p.b()[0] / p0.b()[0];
        for (x, y) in p.b().iter().zip(p0.b()) {
            assert!((x / y - f).abs() <= 1e-9 * f);
        }
        let r = verify_containment(&s, &p.build_cone().unwrap(), 1e-8).unwrap();
        assert!(r.ok);
    }
}

#[test]
fn swapped_normals_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cone = round3();
    let mut seen = 0;
    for _ in 0..200 {
        let k = random_k(&mut rng, &cone, 3);
        let pairs = k.sample_subdifferential(2, rng.random());
        if pairs.len() < 2 {
            continue;
        }
        let swapped = vec![
            (pairs[0].0.clone(), pairs[1].1.clone()),
            (pairs[1].0.clone(), pairs[0].1.clone()),
        ];
        let Ok(s) = Pairing::new(&cone, swapped) else { continue };
        let pc = pair_costs(&s, &cone).unwrap();
        let defect = pc[0][1] + pc[1][0] - pc[0][0] - pc[1][1];
        if defect >= -1e-6 {
            continue;
        }
        assert!(!check_monotone_cycles(&s, &cone).unwrap());
        match build_potential(&s, 0, &cone) {
            Err(Error::NotMonotone { cycle, weight }) => {
                assert_eq!(cycle.len(), 2);
                assert!((weight - defect).abs() < 1e-12);
            }
            other => panic!("expected NotMonotone, got {other:?}"),
        }
        seen += 1;
    }
    assert!(seen > 20);
}

#[test]
fn duplicates_are_merged() {
    let cone = ConeSpec::circular(uv(&[0.0, 1.0]), FRAC_PI_4).unwrap();
    let pair = (uv(&[0.1, 1.0]), uv(&[0.0, -1.0]));
    let other = (uv(&[-0.2, 1.0]), uv(&[0.0, -1.0]));
    let s = Pairing::new(&cone, vec![pair.clone(), other, pair]).unwrap();
    let p = build_potential(&s, 2, &cone).unwrap();
    assert_eq!(p.pairs().len(), 2);
    assert_eq!(p.origin(), &[0, 1]);
    assert_eq!(p.base_index(), 0);
}

#[test]
fn unrelated_cone_fails_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let cone = round3();
    let mut failures = 0;
    for _ in 0..20 {
        let k = random_k(&mut rng, &cone, 4);
        let s = Pairing::new(&cone, k.sample_subdifferential(5, rng.random())).unwrap();
        let other = random_k(&mut rng, &cone, 4);
        let r = verify_containment(&s, &other, 1e-8).unwrap();
        if !r.ok {
            assert!(r.worst_violation > 1e-8);
            failures += 1;
        }
    }
    assert!(failures >= 15);
}

#[test]
fn dilation_keeps_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cone = round3();
    let k = random_k(&mut rng, &cone, 5);
    let s = Pairing::new(&cone, k.sample_subdifferential(6, 4)).unwrap();
    let base = verify_containment(&s, &k, 1e-8).unwrap();
    for lambda in [0.5, 3.0] {
        let r = verify_containment(&s, &k.dilate(lambda).unwrap(), 1e-8).unwrap();
        assert_eq!(r.ok, base.ok);
        for (a, b) in r.per_pair.iter().zip(&base.per_pair) {
            assert_eq!(a.inside, b.inside);
        }
    }
}
