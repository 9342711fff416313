//! Instance generators and independent oracles shared by the integration
//! tests and the acceptance runner. Nothing here calls the library's own
//! radial, support or transport routines.
#![allow(dead_code)]

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use conic_transport::cone_geometry::sample_in_cone;
use conic_transport::{ConeSpec, PseudoCone, UnitVector};

pub fn uv(x: &[f64]) -> UnitVector {
    UnitVector::new(x.to_vec()).unwrap()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn axis(n: usize) -> UnitVector {
    let mut a = vec![0.0; n];
    a[n - 1] = 1.0;
    uv(&a)
}

pub fn round_cone(n: usize, half_angle: f64) -> ConeSpec {
    ConeSpec::circular(axis(n), half_angle).unwrap()
}

/// Square-based cone in R^3 spanned by `(±1, ±1, h)`.
pub fn square_cone(h: f64) -> ConeSpec {
    ConeSpec::polyhedral(vec![
        uv(&[1.0, 1.0, h]),
        uv(&[-1.0, 1.0, h]),
        uv(&[-1.0, -1.0, h]),
        uv(&[1.0, -1.0, h]),
    ])
    .unwrap()
}

/// `K` with `facets` random normals in `Ω_{C°}` and offsets in `[lo, hi]`.
pub fn random_k(rng: &mut ChaCha8Rng, cone: &ConeSpec, facets: usize, lo: f64, hi: f64) -> PseudoCone {
    let dual = cone.dual().unwrap();
    PseudoCone::new(
        cone.clone(),
        (0..facets)
            .map(|_| (sample_in_cone(&dual, 0.02, rng), rng.random_range(lo..=hi)))
            .collect(),
    )
    .unwrap()
}

/// `x ∈ K`, from the half-space description only.
pub fn member(k: &PseudoCone, x: &[f64]) -> bool {
    k.facets().iter().all(|f| dot(x, f.normal()) <= -f.offset())
}

/// Smallest `r` with `r v ∈ K`, by bisection on membership.
pub fn bisect_radial(k: &PseudoCone, v: &[f64]) -> f64 {
    let at = |r: f64| v.iter().map(|x| r * x).collect::<Vec<_>>();
    let mut hi = 1.0;
    while !member(k, &at(hi)) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if member(k, &at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    hi
}

/// Outward facet normals of a polyhedral cone, recomputed from its
/// generators: a normal is orthogonal to n-1 independent generators and
/// non-positive on all of them.
pub fn cone_facets(cone: &ConeSpec) -> Vec<Vec<f64>> {
    let ConeSpec::Polyhedral(p) = cone else {
        panic!("polyhedral cone expected")
    };
    let gens: Vec<&[f64]> = p.generators().iter().map(|g| g.as_slice()).collect();
    let n = gens[0].len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in (0..gens.len()).combinations(n - 1) {
        let m = DMatrix::from_fn(n - 1, n, |r, c| gens[subset[r]][c]);
        // the null vector of M is the eigenvector of MᵀM for eigenvalue 0
        let e = (m.transpose() * m).symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| e.eigenvalues[*a].total_cmp(&e.eigenvalues[*b]));
        if e.eigenvalues[order[1]] <= 1e-10 {
            continue;
        }
        let mut f: Vec<f64> = e.eigenvectors.column(order[0]).iter().copied().collect();
        let signs: Vec<f64> = gens.iter().map(|g| dot(g, &f)).collect();
        if signs.iter().all(|s| *s <= 1e-10) {
        } else if signs.iter().all(|s| *s >= -1e-10) {
            f.iter_mut().for_each(|x| *x = -*x);
        } else {
            continue;
        }
        let l = dot(&f, &f).sqrt();
        f.iter_mut().for_each(|x| *x /= l);
        if out.iter().all(|g| dot(g, &f) < 1.0 - 1e-9) {
            out.push(f);
        }
    }
    out
}

/// `h̄_K(u) = min_{x∈K} <-u, x>` by vertex enumeration, for polyhedral `C`.
/// Every n-subset of the hyperplanes `<x,u_i> = -b_i` and `<x,f> = 0` is
/// solved; feasible points are compared.
pub fn lp_support(k: &PseudoCone, u: &[f64]) -> f64 {
    let n = k.dim();
    let mut planes: Vec<(Vec<f64>, f64)> = k.facets().iter().map(|f| (f.normal().to_vec(), -f.offset())).collect();
    planes.extend(cone_facets(k.cone()).into_iter().map(|f| (f, 0.0)));
    let feasible = |x: &[f64]| planes.iter().all(|(a, b)| dot(a, x) <= b + 1e-9 * (1.0 + b.abs()));
    let mut best = f64::INFINITY;
    for subset in (0..planes.len()).combinations(n) {
        let a = DMatrix::from_fn(n, n, |r, c| planes[subset[r]].0[c]);
        let b = DVector::from_fn(n, |r, _| planes[subset[r]].1);
        let Some(x) = a.lu().solve(&b) else { continue };
        let x: Vec<f64> = x.iter().copied().collect();
        if x.iter().all(|v| v.is_finite()) && feasible(&x) {
            best = best.min(-dot(u, &x));
        }
    }
    best
}

/// `h̄_K(u)` in the plane by a dense sweep of the arc of directions with a
/// golden-section polish around the best samples.
pub fn arc_support(k: &PseudoCone, u: &[f64], half_angle: f64, axis_angle: f64) -> f64 {
    let g = |theta: f64| {
        let v = [theta.cos(), theta.sin()];
        dot(u, &v).abs() * bisect_radial(k, &v)
    };
    let (lo, hi) = (axis_angle - half_angle, axis_angle + half_angle);
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let samples: Vec<(f64, f64)> = (0..=steps).map(|s| lo + s as f64 * h).map(|t| (t, g(t))).collect();
    let mut best = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|a, b| samples[*a].1.total_cmp(&samples[*b].1));
    for &m in order.iter().take(8) {
        let (mut a, mut b) = ((samples[m].0 - h).max(lo), (samples[m].0 + h).min(hi));
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if g(c) < g(d) {
                b = d;
            } else {
                a = c;
            }
        }
        best = best.min(g(0.5 * (a + b)));
    }
    best
}

/// Minimum over all bijections between unit expansions; `costs[j][i]`.
pub fn brute_force_assignment(costs: &[Vec<f64>], mu_units: &[usize], nu_units: &[usize]) -> f64 {
    let rows: Vec<usize> = mu_units
        .iter()
        .enumerate()
        .flat_map(|(j, &k)| std::iter::repeat_n(j, k))
        .collect();
    let cols: Vec<usize> = nu_units
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k))
        .collect();
    assert_eq!(rows.len(), cols.len());
    let total = rows.len();
    (0..total)
        .permutations(total)
        .map(|p| (0..total).map(|a| costs[rows[a]][cols[p[a]]]).sum::<f64>() / total as f64)
        .fold(f64::INFINITY, f64::min)
}

/// `log|<u, v>|`, recomputed.
pub fn log_cost(u: &[f64], v: &[f64]) -> f64 {
    dot(u, v).abs().ln()
}

/// No permutation of the `u`'s lowers `Σ c(u_σ(i), v_i)` by more than `tol`.
pub fn monotone_by_permutations(pairs: &[(UnitVector, UnitVector)], tol: f64) -> bool {
    let n = pairs.len();
    let base: f64 = pairs.iter().map(|(v, u)| log_cost(u, v)).sum();
    (0..n).permutations(n).all(|p| {
        let c: f64 = (0..n).map(|i| log_cost(&pairs[p[i]].1, &pairs[i].0)).sum();
        c >= base - tol
    })
}

/// Random weights `k_j / total` with every `k_j >= 1`.
pub fn random_units(rng: &mut ChaCha8Rng, atoms: usize, total: usize) -> Vec<usize> {
    let mut units = vec![1; atoms];
    for _ in atoms..total {
        units[rng.random_range(0..atoms)] += 1;
    }
    units
}

/// Circular or polyhedral cone in dimension `n ∈ {2, 3}`.
pub fn random_cone(rng: &mut ChaCha8Rng, n: usize) -> ConeSpec {
    let round = rng.random_bool(0.5);
    match (n, round) {
        (_, true) => round_cone(n, rng.random_range(0.3..1.2)),
        (2, false) => {
            let (a, b): (f64, f64) = (rng.random_range(0.2..1.3), rng.random_range(1.8..2.9));
            ConeSpec::polyhedral(vec![uv(&[a.cos(), a.sin()]), uv(&[b.cos(), b.sin()])]).unwrap()
        }
        (_, false) => {
            let m = rng.random_range(3..=6);
            let h = rng.random_range(0.8..2.0);
            let gens = (0..m)
                .map(|k| {
                    let t = std::f64::consts::TAU * (k as f64 + rng.random_range(-0.2..0.2)) / m as f64;
                    uv(&[t.cos(), t.sin(), h])
                })
                .collect();
            ConeSpec::polyhedral(gens).unwrap()
        }
    }
}

/// Measure on `region` with weights `units[j] / total` at random points.
pub fn unit_measure(
    region: &conic_transport::SphericalRegion,
    units: &[usize],
    seed: u64,
) -> conic_transport::DiscreteMeasure {
    let total: usize = units.iter().sum();
    let pts = region.sample(units.len(), seed);
    conic_transport::DiscreteMeasure::new(
        region.clone(),
        pts.into_iter()
            .zip(units)
            .map(|(p, &k)| (p, k as f64 / total as f64))
            .collect(),
    )
    .unwrap()
}
