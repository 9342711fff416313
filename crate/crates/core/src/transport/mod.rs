//! Discrete measures, exact transport for the log cost, and monotonicity
//! checkers.
//!
//! Indices follow the convention `j` for atoms of `μ` on `Ω_{C°}` (sources)
//! and `i` for atoms of `ν` on `Ω_C` (targets).

mod measure;
mod monotone;
pub mod simplex;

pub use measure::{Atom, DiscreteMeasure, Pairing, DISTINCT_ANGLE, WEIGHT_SUM_TOL};
pub use monotone::{
    check_monotone_bruteforce, check_monotone_cycles, exchange_weights, monotonicity_bruteforce, monotonicity_cycles,
    pair_costs, MonotonicityReport, BRUTE_FORCE_MAX, MONOTONE_TOL,
};
pub use simplex::{solve_transport, SimplexSolution};

use crate::cone_geometry::{log_abs_dot, RegionKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    /// Source (μ) index.
    pub j: usize,
    /// Target (ν) index.
    pub i: usize,
    pub mass: f64,
}

/// Sparse coupling between an `M`-atom source and an `N`-atom target.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    pub sources: usize,
    pub targets: usize,
}

impl TransportPlan {
    pub fn row_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.sources];
        for e in &self.entries {
            out[e.j] += e.mass;
        }
        out
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.targets];
        for e in &self.entries {
            out[e.i] += e.mass;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualPotentials {
    /// One value per μ atom, `phi[0] = 0`.
    pub phi: Vec<f64>,
    /// One value per ν atom.
    pub psi: Vec<f64>,
}

/// `costs[j][i] = log|<u_j, v_i>|` for `μ` on `Ω_{C°}` and `ν` on `Ω_C`.
pub fn cost_matrix(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Vec<Vec<f64>>> {
    if mu.kind() != RegionKind::OmegaCDual || nu.kind() != RegionKind::OmegaC {
        return Err(Error::InvalidInput("expected μ on Ω_{C°} and ν on Ω_C".into()));
    }
    if mu.cone() != nu.cone() {
        return Err(Error::InvalidInput("μ and ν live on different cones".into()));
    }
    mu.points()
        .map(|u| nu.points().map(|v| log_abs_dot(u, v)).collect())
        .collect()
}

/// Optimal plan and dual potentials for the log cost.
pub fn solve_ot(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<(TransportPlan, DualPotentials)> {
    let costs = cost_matrix(mu, nu)?;
    let sol = solve_transport(&mu.weights(), &nu.weights(), &costs)?;
    Ok(plan_from_simplex(sol, mu.len(), nu.len()))
}

pub(crate) fn plan_from_simplex(
    sol: SimplexSolution,
    sources: usize,
    targets: usize,
) -> (TransportPlan, DualPotentials) {
    let plan = TransportPlan {
        entries: sol
            .entries
            .into_iter()
            .map(|(j, i, mass)| PlanEntry { j, i, mass })
            .collect(),
        sources,
        targets,
    };
    (
        plan,
        DualPotentials {
            phi: sol.phi,
            psi: sol.psi,
        },
    )
}

/// `Σ π_ji costs[j][i]`.
pub fn plan_cost(plan: &TransportPlan, costs: &[Vec<f64>]) -> f64 {
    plan.entries.iter().map(|e| e.mass * costs[e.j][e.i]).sum()
}

/// Pairs `(v_i, u_j)` over the plan support, in entry order.
pub fn support_pairing(plan: &TransportPlan, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Pairing> {
    let pairs = plan
        .entries
        .iter()
        .map(|e| (nu.atoms()[e.i].point.clone(), mu.atoms()[e.j].point.clone()))
        .collect();
    Pairing::new(mu.cone(), pairs)
}
