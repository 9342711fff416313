//! Discrete Gauss image problem: from `μ` on `Ω_{C°}` and `ν` on `Ω_C`,
//! an optimal plan for the log cost and a pseudo-cone whose
//! pseudo-subdifferential carries that plan.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone_geometry::UnitVector;
use crate::error::{Error, Result};
use crate::pseudo_cone::{PseudoCone, SUBDIFFERENTIAL_TOL};
use crate::transport::simplex::{northwest_corner, solve_transport};
use crate::transport::{
    cost_matrix, plan_cost, plan_from_simplex, DiscreteMeasure, DualPotentials, Pairing, TransportPlan,
};

/// Tolerance on the two potential identities `log ρ_K(v_i) + ψ_i = const`
/// and `log h̄_K(u_j) - φ_j = const`.
pub const POTENTIAL_TOL: f64 = 1e-8;
/// Tolerance on `Σ μ log h̄_K - Σ ν log ρ_K = total cost`.
pub const CHAIN_TOL: f64 = 1e-7;
/// Competitors may undercut the optimum by at most this much.
pub const COMPETITOR_TOL: f64 = 1e-9;
/// A pair `(j, i)` is tight when `|φ_j + ψ_i - c_ji|` is below this.
pub const TIGHT_TOL: f64 = 1e-9;
/// Largest denominator tried when looking for a common weight unit.
const MAX_UNITS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussImageSolution {
    pub cone_k: PseudoCone,
    pub plan: TransportPlan,
    pub potentials: DualPotentials,
    pub total_cost: f64,
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
}

/// Solves the transport problem and builds `K` with facets `(u_j, b_j)`,
/// `b_j = exp(φ_j - max φ)`. Every certificate is checked before
/// returning; a failed check is reported as [`Error::CertificateFailure`].
pub fn solve_gauss_image(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<GaussImageSolution> {
    let costs = cost_matrix(mu, nu)?;
    let raw = solve_transport(&mu.weights(), &nu.weights(), &costs)?;
    let (plan, potentials) = plan_from_simplex(raw, mu.len(), nu.len());
    let total_cost = plan_cost(&plan, &costs);
    let top = potentials.phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cone_k = PseudoCone::new(
        mu.cone().clone(),
        mu.points()
            .zip(&potentials.phi)
            .map(|(u, p)| (u.clone(), (p - top).exp()))
            .collect(),
    )?;
    let sol = GaussImageSolution {
        cone_k,
        plan,
        potentials,
        total_cost,
        mu: mu.clone(),
        nu: nu.clone(),
    };
    sol.validate()?;
    Ok(sol)
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    hi - lo
}

impl GaussImageSolution {
    /// Re-runs every certificate check.
    pub fn validate(&self) -> Result<()> {
        let oracle = self.cone_k.oracle();
        let u: Vec<&UnitVector> = self.mu.points().collect();
        let v: Vec<&UnitVector> = self.nu.points().collect();
        for e in &self.plan.entries {
            if !oracle.in_pseudo_subdifferential(v[e.i], u[e.j], SUBDIFFERENTIAL_TOL)? {
                let gap = oracle.subdifferential_gap(v[e.i], u[e.j])?;
                return Err(Error::CertificateFailure(format!(
                    "plan entry ({}, {}) is not in the pseudo-subdifferential (gap {gap:e})",
                    e.j, e.i
                )));
            }
        }
        let log_rho: Vec<f64> = v
            .iter()
            .map(|x| self.cone_k.radial(x).map(f64::ln))
            .collect::<Result<_>>()?;
        let log_h: Vec<f64> = u
            .iter()
            .map(|x| oracle.support_abs(x).map(f64::ln))
            .collect::<Result<_>>()?;
        let s = spread(log_rho.iter().zip(&self.potentials.psi).map(|(r, p)| r + p));
        if s > POTENTIAL_TOL {
            return Err(Error::CertificateFailure(format!(
                "log ρ + ψ varies by {s:e} across target atoms"
            )));
        }
        let s = spread(log_h.iter().zip(&self.potentials.phi).map(|(h, p)| h - p));
        if s > POTENTIAL_TOL {
            return Err(Error::CertificateFailure(format!(
                "log h̄ - φ varies by {s:e} across source atoms"
            )));
        }
        let chain = self.duality_chain(&log_h, &log_rho);
        if (chain - self.total_cost).abs() > CHAIN_TOL {
            return Err(Error::CertificateFailure(format!(
                "Σμ log h̄ - Σν log ρ = {chain} differs from the total cost {}",
                self.total_cost
            )));
        }
        Ok(())
    }

    fn duality_chain(&self, log_h: &[f64], log_rho: &[f64]) -> f64 {
        let a: f64 = self.mu.weights().iter().zip(log_h).map(|(w, x)| w * x).sum();
        let b: f64 = self.nu.weights().iter().zip(log_rho).map(|(w, x)| w * x).sum();
        a - b
    }

    /// `Σ_j μ_j log h̄_K(u_j) - Σ_i ν_i log ρ_K(v_i)`.
    pub fn duality_gap_chain(&self) -> Result<f64> {
        let oracle = self.cone_k.oracle();
        let log_h: Vec<f64> = self
            .mu
            .points()
            .map(|x| oracle.support_abs(x).map(f64::ln))
            .collect::<Result<_>>()?;
        let log_rho: Vec<f64> = self
            .nu
            .points()
            .map(|x| self.cone_k.radial(x).map(f64::ln))
            .collect::<Result<_>>()?;
        Ok(self.duality_chain(&log_h, &log_rho))
    }

    pub fn costs(&self) -> Result<Vec<Vec<f64>>> {
        cost_matrix(&self.mu, &self.nu)
    }

    /// Pairs `(v_i, u_j)` with `π_ji > 0`.
    pub fn support_pairing(&self) -> Result<Pairing> {
        crate::transport::support_pairing(&self.plan, &self.mu, &self.nu)
    }

    /// Pairs `(v_i, u_j)` whose dual constraint is tight within `tol`.
    /// Contains the plan support and links every atom, even when the plan
    /// itself is degenerate.
    pub fn tight_pairing(&self, tol: f64) -> Result<Pairing> {
        let costs = self.costs()?;
        let mut pairs = Vec::new();
        for (j, u) in self.mu.points().enumerate() {
            for (i, v) in self.nu.points().enumerate() {
                let slack = costs[j][i] - self.potentials.phi[j] - self.potentials.psi[i];
                if slack.abs() <= tol {
                    pairs.push((v.clone(), u.clone()));
                }
            }
        }
        Pairing::new(self.mu.cone(), pairs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub ok: bool,
    /// Smallest `competitor cost - optimal cost` seen; `+inf` with no competitors.
    pub min_gap: f64,
    pub plan_competitors: usize,
    pub map_competitors: usize,
    /// Common weight unit `1/units` used for map competitors, if any.
    pub units: Option<usize>,
}

/// Smallest `k <= MAX_UNITS` with every weight an integer multiple of `1/k`.
pub fn common_unit(weights: &[f64]) -> Option<usize> {
    (1..=MAX_UNITS).find(|&k| {
        weights.iter().all(|w| {
            let x = w * k as f64;
            x.round() >= 1.0 && (x - x.round()).abs() <= 1e-9
        })
    })
}

fn unit_counts(weights: &[f64], k: usize) -> Vec<usize> {
    weights.iter().map(|w| (w * k as f64).round() as usize).collect()
}

/// Compares the optimal plan against random feasible competitors: basic
/// plans from the north-west corner rule on shuffled rows and columns,
/// and, when all weights share a unit `1/K`, random bijections between the
/// unit expansions of `μ` and `ν`.
pub fn certify_optimality(sol: &GaussImageSolution, trials: usize, seed: u64) -> Result<CertificationReport> {
    let costs = sol.costs()?;
    let (wm, wn) = (sol.mu.weights(), sol.nu.weights());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = wm.clone();
    all.extend(&wn);
    let units = common_unit(&all);
    let mut min_gap = f64::INFINITY;
    let (mut plans, mut maps) = (0, 0);
    let mut rows: Vec<usize> = (0..wm.len()).collect();
    let mut cols: Vec<usize> = (0..wn.len()).collect();
    for _ in 0..trials {
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let c: f64 = northwest_corner(&wm, &wn, &rows, &cols)
            .iter()
            .map(|&(j, i, x)| x * costs[j][i])
            .sum();
        min_gap = min_gap.min(c - sol.total_cost);
        plans += 1;
        if let Some(k) = units {
            let src: Vec<usize> = unit_counts(&wm, k)
                .into_iter()
                .enumerate()
                .flat_map(|(j, n)| std::iter::repeat_n(j, n))
                .collect();
            let mut dst: Vec<usize> = unit_counts(&wn, k)
                .into_iter()
                .enumerate()
                .flat_map(|(i, n)| std::iter::repeat_n(i, n))
                .collect();
            dst.shuffle(&mut rng);
            let c: f64 = src.iter().zip(&dst).map(|(&j, &i)| costs[j][i]).sum::<f64>() / k as f64;
            min_gap = min_gap.min(c - sol.total_cost);
            maps += 1;
        }
    }
    Ok(CertificationReport {
        ok: min_gap >= -COMPETITOR_TOL,
        min_gap,
        plan_competitors: plans,
        map_competitors: maps,
        units,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardReport {
    pub per_target_mass: Vec<f64>,
    /// Total variation distance `½ Σ |mass_i - ν_i|`.
    pub tv_gap: f64,
    /// Source atoms whose mass goes to more than one target.
    pub split_sources: Vec<usize>,
    /// Number of sources sharing their target with another source.
    pub merge_count: usize,
}

pub fn pushforward_report(sol: &GaussImageSolution) -> PushforwardReport {
    let per_target_mass = sol.plan.column_sums();
    let tv_gap = 0.5
        * per_target_mass
            .iter()
            .zip(sol.nu.weights())
            .map(|(m, w)| (m - w).abs())
            .sum::<f64>();
    let mut out_degree = vec![0usize; sol.plan.sources];
    let mut in_degree = vec![0usize; sol.plan.targets];
    for e in &sol.plan.entries {
        out_degree[e.j] += 1;
        in_degree[e.i] += 1;
    }
    PushforwardReport {
        per_target_mass,
        tv_gap,
        split_sources: (0..out_degree.len()).filter(|&j| out_degree[j] > 1).collect(),
        merge_count: in_degree.iter().filter(|&&d| d > 1).sum(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapComparison {
    /// Whether the map pushes `μ` forward to `ν` (within `1e-10` per atom).
    pub valid: bool,
    pub map_cost: f64,
    pub optimal_cost: f64,
    pub gap: f64,
}

/// Evaluates a transport map given as `map[j] = i` (source atom `j` sent
/// whole to target atom `i`).
pub fn compare_map(sol: &GaussImageSolution, map: &[usize]) -> Result<MapComparison> {
    if map.len() != sol.mu.len() {
        return Err(Error::DimensionMismatch {
            expected: sol.mu.len(),
            found: map.len(),
        });
    }
    if let Some(&bad) = map.iter().find(|&&i| i >= sol.nu.len()) {
        return Err(Error::InvalidInput(format!("map target {bad} out of range")));
    }
    let costs = sol.costs()?;
    let wm = sol.mu.weights();
    let mut pushed = vec![0.0; sol.nu.len()];
    let mut map_cost = 0.0;
    for (j, &i) in map.iter().enumerate() {
        pushed[i] += wm[j];
        map_cost += wm[j] * costs[j][i];
    }
    let valid = pushed.iter().zip(sol.nu.weights()).all(|(p, w)| (p - w).abs() <= 1e-10);
    Ok(MapComparison {
        valid,
        map_cost,
        optimal_cost: sol.total_cost,
        gap: map_cost - sol.total_cost,
    })
}
