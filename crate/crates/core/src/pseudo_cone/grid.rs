//! Grid plus multistart search for round cones in any dimension.
//!
//! Works in the gnomonic chart `z ↦ normalize(a + Σ z_k e_k)`, which maps
//! the closed disk `|z| <= tan α` onto the closed cap of directions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::support::{summarize, Minimization};
use super::PseudoCone;
use crate::cone_geometry::{CircularCone, ConeSpec, UnitVector};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptions {
    /// Approximate number of coarse grid points.
    pub coarse_points: usize,
    /// Number of separated grid minima refined by pattern search.
    pub basins: usize,
    /// Step halvings before a refinement stops.
    pub max_halvings: usize,
    /// Seed for the random coarse points used when `n >= 4`.
    pub seed: u64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            coarse_points: 10_000,
            basins: 50,
            max_halvings: 60,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub minimization: Minimization,
    /// Objective evaluations spent.
    pub evaluations: usize,
}

/// Support value and minimizers by the grid method. Only circular cones
/// have a chart; polyhedral cones are rejected.
pub fn support_abs_grid(k: &PseudoCone, u: &UnitVector, opts: &GridOptions) -> Result<GridResult> {
    k.check_normal(u)?;
    let ConeSpec::Circular(c) = k.cone() else {
        return Err(Error::InvalidInput("the grid method needs a circular cone".into()));
    };
    Ok(run(k, c, u, opts))
}

pub(super) fn minimize(k: &PseudoCone, u: &UnitVector, opts: &GridOptions) -> Minimization {
    let ConeSpec::Circular(c) = k.cone() else {
        unreachable!("grid method is only selected for circular cones")
    };
    run(k, c, u, opts).minimization
}

struct Chart<'a> {
    k: &'a PseudoCone,
    u: &'a [f64],
    axis: &'a [f64],
    basis: Vec<Vec<f64>>,
    radius: f64,
    evaluations: usize,
}

impl Chart<'_> {
    fn point(&self, z: &[f64]) -> Vec<f64> {
        let mut y = self.axis.to_vec();
        for (zk, e) in z.iter().zip(&self.basis) {
            y = linalg::axpy(&y, *zk, e);
        }
        linalg::normalized(&y).expect("chart points are nonzero")
    }

    fn clamp(&self, z: &mut [f64]) {
        let r = linalg::norm(z);
        if r > self.radius {
            for zk in z.iter_mut() {
                *zk *= self.radius / r;
            }
        }
    }

    /// Value and chart gradient of each ratio `b_i <u,y>/<u_i,y>` at
    /// `y = a + Σ z_k e_k`; the objective is their maximum.
    fn pieces(&self, z: &[f64]) -> Vec<(f64, Vec<f64>)> {
        let lin = |w: &[f64]| -> (f64, Vec<f64>) {
            let grad: Vec<f64> = self.basis.iter().map(|e| -linalg::dot(w, e)).collect();
            (-linalg::dot(w, self.axis) + linalg::dot(&grad, z), grad)
        };
        let (p, dp) = lin(self.u);
        self.k
            .facets()
            .iter()
            .map(|f| {
                let (q, dq) = lin(f.normal());
                let b = f.offset();
                let grad = dp.iter().zip(&dq).map(|(a, c)| b * (a * q - p * c) / (q * q)).collect();
                (b * p / q, grad)
            })
            .collect()
    }

    /// Descent candidates for the max of the pieces near `z`: negative
    /// gradients of nearly active pieces, directions along the kink of each
    /// nearly active pair, and their tangential parts on the rim.
    fn active_set_directions(&self, z: &[f64], step: f64) -> Vec<Vec<f64>> {
        let pieces = self.pieces(z);
        let top = pieces.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let active: Vec<&Vec<f64>> = pieces
            .iter()
            .filter(|(f, g)| top - f <= 2.0 * step * linalg::norm(g) + 1e-15 * top)
            .map(|(_, g)| g)
            .collect();
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for (i, gi) in active.iter().enumerate() {
            dirs.push(linalg::scale(gi, -1.0));
            for gj in &active[i + 1..] {
                let w = linalg::sub(gi, gj);
                let ww = linalg::dot(&w, &w);
                if ww > 0.0 {
                    for g in [gi, gj] {
                        dirs.push(linalg::axpy(&linalg::scale(g, -1.0), linalg::dot(g, &w) / ww, &w));
                    }
                }
            }
        }
        let r = linalg::norm(z);
        if r >= self.radius * (1.0 - 1e-12) {
            let radial = linalg::scale(z, 1.0 / r);
            let tangential: Vec<Vec<f64>> = dirs
                .iter()
                .map(|d| linalg::axpy(d, -linalg::dot(d, &radial), &radial))
                .collect();
            dirs.extend(tangential);
        }
        dirs.iter().filter_map(|d| linalg::normalized(d)).collect()
    }

    fn eval(&mut self, z: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = self.point(z);
        linalg::dot(self.u, &v).abs() * self.k.radial_unchecked(&v)
    }
}

fn run(k: &PseudoCone, c: &CircularCone, u: &UnitVector, opts: &GridOptions) -> GridResult {
    let n = k.dim();
    let m = n - 1;
    let alpha = c.half_angle();
    let mut chart = Chart {
        k,
        u,
        axis: c.axis(),
        basis: linalg::orthonormal_complement_basis(c.axis()),
        radius: alpha.tan(),
        evaluations: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let total = opts.coarse_points.max(4);

    let mut coarse: Vec<Vec<f64>> = Vec::with_capacity(total + 1);
    let spacing;
    match m {
        1 => {
            for i in 0..total {
                let phi = -alpha + 2.0 * alpha * i as f64 / (total - 1) as f64;
                coarse.push(vec![phi.tan()]);
            }
            spacing = 2.0 * chart.radius / total as f64;
        }
        2 => {
            let rings = (total as f64).sqrt().ceil() as usize;
            coarse.push(vec![0.0, 0.0]);
            for r in 1..=rings {
                let rad = (alpha * r as f64 / rings as f64).tan();
                for a in 0..rings {
                    let t = std::f64::consts::TAU * a as f64 / rings as f64;
                    coarse.push(vec![rad * t.cos(), rad * t.sin()]);
                }
            }
            spacing = chart.radius / rings as f64;
        }
        _ => {
            coarse.push(vec![0.0; m]);
            for _ in 0..total {
                let g: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
                let dir = linalg::normalized(&g).unwrap_or_else(|| {
                    let mut e = vec![0.0; m];
                    e[0] = 1.0;
                    e
                });
                let s: f64 = rng.random::<f64>().powf(1.0 / m as f64);
                let rad = (alpha * s).tan();
                coarse.push(linalg::scale(&dir, rad));
            }
            spacing = chart.radius * (total as f64).powf(-1.0 / m as f64);
        }
    }

    let mut scored: Vec<(Vec<f64>, f64)> = coarse
        .into_iter()
        .map(|z| {
            let g = chart.eval(&z);
            (z, g)
        })
        .collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));

    let separation = 3.0 * spacing;
    let mut starts: Vec<(Vec<f64>, f64)> = Vec::new();
    for (z, g) in &scored {
        if starts.len() >= opts.basins {
            break;
        }
        if starts
            .iter()
            .all(|(s, _)| linalg::norm(&linalg::sub(s, z)) > separation)
        {
            starts.push((z.clone(), *g));
        }
    }

    let directions = search_directions(m, &mut rng);
    let mut refined: Vec<(Vec<f64>, f64)> = Vec::with_capacity(starts.len());
    for (z0, g0) in starts {
        let (z, g) = pattern_search(
            &mut chart,
            z0,
            g0,
            2.0 * spacing,
            &directions,
            opts.max_halvings,
            &mut rng,
        );
        refined.push((chart.point(&z), g));
    }
    let minimization = summarize(k.cone(), refined, |v| k.cone().boundary_margin(v) <= 1e-9);
    GridResult {
        minimization,
        evaluations: chart.evaluations,
    }
}

/// Coordinate axes, pairwise diagonals (small charts only) and a few fixed
/// random directions, all with both signs.
fn search_directions<R: Rng>(m: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        dirs.push(e);
    }
    if m <= 4 {
        for i in 0..m {
            for j in i + 1..m {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; m];
                    e[i] = std::f64::consts::FRAC_1_SQRT_2;
                    e[j] = s * std::f64::consts::FRAC_1_SQRT_2;
                    dirs.push(e);
                }
            }
        }
    }
    if m >= 2 {
        for _ in 0..8 {
            let g: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            if let Some(d) = linalg::normalized(&g) {
                dirs.push(d);
            }
        }
    }
    let negated: Vec<Vec<f64>> = dirs.iter().map(|d| linalg::scale(d, -1.0)).collect();
    dirs.extend(negated);
    dirs
}

fn pattern_search<R: Rng>(
    chart: &mut Chart<'_>,
    mut z: Vec<f64>,
    mut g: f64,
    mut step: f64,
    directions: &[Vec<f64>],
    max_halvings: usize,
    rng: &mut R,
) -> (Vec<f64>, f64) {
    let m = z.len();
    let probes = if m >= 2 { 4 } else { 0 };
    let mut halvings = 0;
    let mut moves = 0;
    while halvings < max_halvings && moves < 20_000 {
        let mut fresh = chart.active_set_directions(&z, step);
        fresh.extend((0..probes).filter_map(|_| {
            let d: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            linalg::normalized(&d)
        }));
        let mut improved = false;
        for d in directions.iter().chain(&fresh) {
            let mut trial = linalg::axpy(&z, step, d);
            chart.clamp(&mut trial);
            let gt = chart.eval(&trial);
            if gt < g {
                z = trial;
                g = gt;
                improved = true;
                moves += 1;
                break;
            }
        }
        if !improved {
            step *= 0.5;
            halvings += 1;
        }
    }
    (z, g)
}
