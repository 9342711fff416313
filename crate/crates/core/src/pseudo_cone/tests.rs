use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cone_geometry::sample_in_cone;

fn uv(x: &[f64]) -> UnitVector {
    UnitVector::new(x.to_vec()).unwrap()
}

fn planar(theta: f64) -> ConeSpec {
    ConeSpec::circular(uv(&[0.0, 1.0]), theta).unwrap()
}

fn single_facet() -> PseudoCone {
    PseudoCone::new(planar(FRAC_PI_4), vec![(uv(&[0.0, -1.0]), 1.0)]).unwrap()
}

/// Facets `(0,-1)` and the normal at `tilt` from `-axis`, both with offset 1.
fn two_facet(theta: f64, tilt: f64) -> PseudoCone {
    PseudoCone::new(
        planar(theta),
        vec![(uv(&[0.0, -1.0]), 1.0), (uv(&[-tilt.sin(), -tilt.cos()]), 1.0)],
    )
    .unwrap()
}

fn bisect_radial(k: &PseudoCone, v: &[f64]) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while !k.contains(&linalg::scale(v, hi)) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if k.contains(&linalg::scale(v, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn random_k3(rng: &mut ChaCha8Rng, cone: &ConeSpec, facets: usize) -> PseudoCone {
    let dual = cone.dual().unwrap();
    let f = (0..facets)
        .map(|_| (sample_in_cone(&dual, 0.05, rng), rng.random_range(0.5..2.0)))
        .collect();
    PseudoCone::new(cone.clone(), f).unwrap()
}

#[test]
fn radial_single_facet() {
    let k = single_facet();
    assert!((k.radial(&uv(&[0.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
    let v = uv(&[SQRT_2 / 2.0, SQRT_2 / 2.0]);
    // v sits on the boundary of the π/4 cone, so use the unchecked formula
    assert!((k.radial_unchecked(&v) - SQRT_2).abs() < 1e-12);
    assert!(matches!(k.radial(&v), Err(Error::Domain(_))));
}

#[test]
fn radial_two_facets_matches_bisection() {
    let k = PseudoCone::new(
        planar(FRAC_PI_8),
        vec![
            (uv(&[0.0, -1.0]), 1.0),
            (uv(&[-FRAC_PI_3.sin(), -FRAC_PI_3.cos()]), 1.0),
        ],
    )
    .unwrap();
    let v = uv(&[0.0, 1.0]);
    let r = k.radial(&v).unwrap();
    assert!((r - 2.0).abs() < 1e-12);
    assert!((bisect_radial(&k, &v) - r).abs() <= 1e-10 * r);
}

#[test]
fn construction_rejects_bad_facets() {
    let c = planar(FRAC_PI_4);
    assert!(PseudoCone::new(c.clone(), vec![]).is_err());
    assert!(matches!(
        PseudoCone::new(c.clone(), vec![(uv(&[0.0, -1.0]), 0.0)]),
        Err(Error::InvalidInput(_))
    ));
    // normal outside C°
    assert!(matches!(
        PseudoCone::new(c.clone(), vec![(uv(&[-1.0, -0.5]), 1.0)]),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        PseudoCone::new(c, vec![(uv(&[0.0, 0.0, -1.0]), 1.0)]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn support_of_single_facet() {
    let k = single_facet();
    assert!((k.support_abs(&uv(&[0.0, -1.0])).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn support_matches_dense_arc_grid() {
    let k = single_facet();
    let u = uv(&[-(0.7f64).sin(), -(0.7f64).cos()]);
    let m = 100_000;
    let dense = (0..=m)
        .map(|i| {
            let t = -FRAC_PI_4 + 2.0 * FRAC_PI_4 * i as f64 / m as f64;
            let v = [t.sin(), t.cos()];
            linalg::dot(&u, &v).abs() * k.radial_unchecked(&v)
        })
        .fold(f64::INFINITY, f64::min);
    let h = k.support_abs(&u).unwrap();
    assert!((h - dense).abs() < 1e-6, "{h} vs {dense}");
    // the support point is the corner of K on the boundary ray
    let corner = [-1.0, 1.0];
    assert!((h + linalg::dot(&u, &corner)).abs() < 1e-12);
}

#[test]
fn support_scales_under_dilation() {
    let k = two_facet(FRAC_PI_6, FRAC_PI_4);
    let k2 = k.dilate(2.5).unwrap();
    let region = SphericalRegion::new(RegionKind::OmegaCDual, k.cone().clone()).unwrap();
    for u in region.sample(50, 3) {
        let h = k.support_abs(&u).unwrap();
        let h2 = k2.support_abs(&u).unwrap();
        assert!((h2 - 2.5 * h).abs() <= 1e-12 * h2);
    }
}

#[test]
fn reverse_gauss_finds_vertex() {
    let k = two_facet(FRAC_PI_6, FRAC_PI_4);
    let u1 = k.facets()[0].normal().clone();
    let u2 = k.facets()[1].normal().clone();
    let u = uv(&linalg::add(&u1, &u2));
    let x = linalg::solve(&[&u1, &u2], &[-1.0, -1.0]).unwrap();
    let vertex = uv(&x);
    match k.reverse_gauss(&u).unwrap() {
        GaussImage::Unique(v) => assert!(v.angle_to(&vertex) < 1e-12),
        other => panic!("expected a unique image, got {other:?}"),
    }
    // grid path agrees
    let g = support_abs_grid(&k, &u, &GridOptions::default()).unwrap();
    let gi = g.minimization.gauss_image();
    assert!(gi.unique().unwrap().angle_to(&vertex) < 1e-7);
}

#[test]
fn reverse_gauss_of_facet_normal_is_ambiguous() {
    let k = single_facet();
    let img = k.reverse_gauss(&uv(&[0.0, -1.0])).unwrap();
    assert!(!img.is_unique());
    let GaussImage::Ambiguous(c) = img else { unreachable!() };
    assert!(c.len() >= 2);
}

#[test]
fn reverse_gauss_invariant_under_dilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cone = ConeSpec::circular(uv(&[0.1, 0.2, 1.0]), 0.6).unwrap();
    let k = random_k3(&mut rng, &cone, 4);
    let k3 = k.dilate(3.0).unwrap();
    let region = SphericalRegion::new(RegionKind::OmegaCDual, cone).unwrap();
    for u in region.sample(50, 5) {
        let a = k.reverse_gauss(&u).unwrap();
        let b = k3.reverse_gauss(&u).unwrap();
        assert!(a.agrees_with(&b, 1e-9), "{a:?} vs {b:?}");
    }
}

#[test]
fn subdifferential_examples() {
    let k = single_facet();
    let u = uv(&[0.0, -1.0]);
    assert!(k
        .in_pseudo_subdifferential(&uv(&[0.0, 1.0]), &u, SUBDIFFERENTIAL_TOL)
        .unwrap());
    let v = uv(&[(0.5f64).sin(), (0.5f64).cos()]);
    assert!(k.in_pseudo_subdifferential(&v, &u, SUBDIFFERENTIAL_TOL).unwrap());

    let k = two_facet(FRAC_PI_6, FRAC_PI_4);
    let u1 = k.facets()[0].normal().clone();
    let u2 = k.facets()[1].normal().clone();
    let vertex = uv(&linalg::solve(&[&u1, &u2], &[-1.0, -1.0]).unwrap());
    assert!(k.in_pseudo_subdifferential(&vertex, &u1, SUBDIFFERENTIAL_TOL).unwrap());
    // at (0,1) only facet 2 is active, so u1 is not a normal there
    assert!(!k
        .in_pseudo_subdifferential(&uv(&[0.0, 1.0]), &u1, SUBDIFFERENTIAL_TOL)
        .unwrap());
}

#[test]
fn dilate_identity_and_radial_doubling() {
    let k = two_facet(FRAC_PI_6, FRAC_PI_4);
    assert_eq!(k.dilate(1.0).unwrap(), k);
    assert!(k.dilate(0.0).is_err());
    let k2 = k.dilate(2.0).unwrap();
    let region = SphericalRegion::new(RegionKind::OmegaC, k.cone().clone()).unwrap();
    for v in region.sample(50, 9) {
        let r = k.radial(&v).unwrap();
        assert!((k2.radial(&v).unwrap() - 2.0 * r).abs() <= 1e-15 * r);
    }
}

#[test]
fn containment_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cone = ConeSpec::circular(uv(&[0.0, 0.0, 1.0]), FRAC_PI_4).unwrap();
    let k = random_k3(&mut rng, &cone, 3);
    assert!(!k.contains(&[0.0, 0.0, 0.0]));
    for _ in 0..200 {
        let v = sample_in_cone(&cone, 1e-3, &mut rng);
        let r = k.radial(&v).unwrap();
        assert!(k.contains(&linalg::scale(&v, r)));
        assert!(!k.contains(&linalg::scale(&v, 0.99 * r)));
    }
    for _ in 0..10_000 {
        let v = sample_in_cone(&cone, 1e-3, &mut rng);
        let x = linalg::scale(&v, k.radial(&v).unwrap() * rng.random_range(1.0..3.0));
        let y = linalg::scale(&sample_in_cone(&cone, 1e-3, &mut rng), rng.random_range(0.0..5.0));
        assert!(k.contains(&linalg::add(&x, &y)));
    }
}

#[test]
fn exact_and_grid_agree_on_round_cone_in_three_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cone = ConeSpec::circular(uv(&[0.0, 0.0, 1.0]), FRAC_PI_4).unwrap();
    let region = SphericalRegion::new(RegionKind::OmegaCDual, cone.clone()).unwrap();
    for trial in 0..5 {
        let k = random_k3(&mut rng, &cone, 2 + trial);
        let oracle = k.oracle();
        assert_eq!(oracle.method(), SupportMethod::Exact);
        for u in region.sample(10, trial as u64) {
            let exact = oracle.support_abs(&u).unwrap();
            let grid = support_abs_grid(&k, &u, &GridOptions::default()).unwrap();
            let g = grid.minimization.value;
            // the grid can only overestimate an infimum
            assert!(g >= exact * (1.0 - 1e-12), "grid {g} below exact {exact}");
            assert!((g - exact).abs() <= 1e-6 * exact, "grid {g} vs exact {exact}");
        }
    }
}

#[test]
fn polyhedral_support_is_the_linear_program_value() {
    let cone = ConeSpec::polyhedral(vec![
        uv(&[1.0, 0.0, 1.0]),
        uv(&[0.0, 1.0, 1.0]),
        uv(&[-1.0, 0.0, 1.0]),
        uv(&[0.0, -1.0, 1.0]),
    ])
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dual = cone.dual().unwrap();
    for _ in 0..20 {
        let k = random_k3(&mut rng, &cone, 3);
        let u = sample_in_cone(&dual, 1e-2, &mut rng);
        let h = k.support_abs(&u).unwrap();
        // every sampled point of K gives an upper bound on h̄
        for _ in 0..2000 {
            let v = sample_in_cone(&cone, 0.0, &mut rng);
            let y = linalg::scale(&v, k.radial_unchecked(&v));
            assert!(-linalg::dot(&u, &y) >= h * (1.0 - 1e-12));
        }
        // and the minimizer attains it
        let m = k.oracle().minimize(&u).unwrap();
        let v = &m.minimizers[0];
        let y = linalg::scale(v, k.radial_unchecked(v));
        assert!((-linalg::dot(&u, &y) - h).abs() <= 1e-12 * h);
    }
}

#[test]
fn redundant_facets_are_detected() {
    let k = PseudoCone::new(
        planar(FRAC_PI_4),
        vec![
            (uv(&[0.0, -1.0]), 1.0),
            (uv(&[0.0, -1.0]), 0.5),
            (uv(&[0.0, -1.0]), 1.0),
        ],
    )
    .unwrap();
    let pruned = k.prune();
    assert_eq!(pruned.facets().len(), 1);
    assert_eq!(pruned.facets()[0].offset(), 1.0);
}

#[test]
fn tight_on_unique_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cone = ConeSpec::circular(uv(&[0.0, 0.0, 1.0]), 0.7).unwrap();
    let region = SphericalRegion::new(RegionKind::OmegaCDual, cone.clone()).unwrap();
    let k = random_k3(&mut rng, &cone, 5);
    let oracle = k.oracle();
    for u in region.sample(200, 1) {
        if let GaussImage::Unique(v) = oracle.reverse_gauss(&u).unwrap() {
            let h = oracle.support_abs(&u).unwrap();
            let lhs = h.ln() - k.radial(&v).unwrap().ln();
            let c = crate::cone_geometry::cost(&cone, &u, &v).unwrap();
            assert!((lhs - c).abs() < 1e-9);
            assert!(oracle.in_pseudo_subdifferential(&v, &u, SUBDIFFERENTIAL_TOL).unwrap());
        }
    }
}
