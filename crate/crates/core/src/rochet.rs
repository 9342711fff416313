//! Rochet-type potentials: from a c-cyclically monotone pairing to a
//! pseudo-cone whose pseudo-subdifferential contains it.
//!
//! With a base pair `(v_0, u_0)`, the potential is
//! `φ(v) = min_j (c(v, u_j) + a_j)` where `a_j + c(v_0, u_0)` is the
//! shortest-path distance from the base to `j` in the exchange graph
//! `w(i -> j) = c(v_j, u_i) - c(v_j, u_j)`. Then `φ = -log ρ_K` for
//! `K = ∩_j {x ∈ C : <x, u_j> <= -e^{-a_j}}`.

use crate::cone_geometry::{cost, ConeSpec, UnitVector};
use crate::error::{Error, Result};
use crate::graph;
use crate::pseudo_cone::{PseudoCone, SUBDIFFERENTIAL_TOL};
use crate::transport::{exchange_weights, pair_costs, Pairing, MONOTONE_TOL};

/// Pairs closer than this in both coordinates (radians) are merged.
pub const DEDUP_ANGLE: f64 = 1e-9;
const RELAX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RochetPotential {
    cone: ConeSpec,
    pairs: Pairing,
    /// For each kept pair, its first index in the input pairing.
    origin: Vec<usize>,
    base_index: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RochetPotential {
    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// The pairing after merging duplicates.
    pub fn pairs(&self) -> &Pairing {
        &self.pairs
    }

    /// Index into the input pairing of each kept pair.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    /// Base index in the deduplicated pairing.
    pub fn base_index(&self) -> usize {
        self.base_index
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `φ(v) = min_j (c(v, u_j) + a_j)`.
    pub fn phi(&self, v: &UnitVector) -> Result<f64> {
        let mut best = f64::INFINITY;
        for ((_, u), a) in self.pairs.pairs().iter().zip(&self.a) {
            best = best.min(cost(&self.cone, u, v)? + a);
        }
        Ok(best)
    }

    /// `K = ∩_j {x ∈ C : <x, u_j> <= -b_j}`.
    pub fn build_cone(&self) -> Result<PseudoCone> {
        PseudoCone::new(
            self.cone.clone(),
            self.pairs
                .pairs()
                .iter()
                .zip(&self.b)
                .map(|((_, u), b)| (u.clone(), *b))
                .collect(),
        )
    }
}

fn dedup(s: &Pairing) -> Vec<usize> {
    let p = s.pairs();
    let mut kept: Vec<usize> = Vec::new();
    for k in 0..p.len() {
        let dup = kept
            .iter()
            .any(|&m| p[m].0.angle_to(&p[k].0) <= DEDUP_ANGLE && p[m].1.angle_to(&p[k].1) <= DEDUP_ANGLE);
        if !dup {
            kept.push(k);
        }
    }
    kept
}

/// Shortest-path construction of the offsets `a_j`.
///
/// A negative cycle (beyond the monotonicity tolerance) means the infimum
/// defining `φ` is `-∞` and is reported as [`Error::NotMonotone`] with
/// indices into the input pairing.
pub fn build_potential(s: &Pairing, base_index: usize, cone: &ConeSpec) -> Result<RochetPotential> {
    if base_index >= s.len() {
        return Err(Error::InvalidInput(format!(
            "base index {base_index} out of range for {} pairs",
            s.len()
        )));
    }
    let kept = dedup(s);
    let base_pair = &s.pairs()[base_index];
    let base = kept
        .iter()
        .position(|&k| {
            let p = &s.pairs()[k];
            p.0.angle_to(&base_pair.0) <= DEDUP_ANGLE && p.1.angle_to(&base_pair.1) <= DEDUP_ANGLE
        })
        .expect("base pair survives deduplication");
    let pairs = s.select(&kept);
    let pc = pair_costs(&pairs, cone)?;
    let w = exchange_weights(&pc);
    let n = pairs.len();
    let mut init = vec![f64::INFINITY; n];
    init[base] = 0.0;

    let dist = match graph::bellman_ford(&w, init.clone(), RELAX_TOL) {
        Ok(d) => d,
        Err(c) if c.weight < -MONOTONE_TOL => {
            return Err(Error::NotMonotone {
                cycle: c.nodes.iter().map(|&k| kept[k]).collect(),
                weight: c.weight,
            })
        }
        Err(_) => {
            // only cycles inside the tolerance band: lift them to positive
            // weight, which moves every distance by at most MONOTONE_TOL
            let lift = MONOTONE_TOL / n as f64;
            let lifted: Vec<Vec<f64>> = w.iter().map(|row| row.iter().map(|x| x + lift).collect()).collect();
            graph::bellman_ford(&lifted, init, RELAX_TOL).map_err(|c| Error::NotMonotone {
                weight: graph::cycle_weight(&w, &c.nodes),
                cycle: c.nodes.iter().map(|&k| kept[k]).collect(),
            })?
        }
    };
    let shift = -pc[base][base];
    let a: Vec<f64> = dist.iter().map(|d| d + shift).collect();
    let b: Vec<f64> = a.iter().map(|x| (-x).exp()).collect();
    Ok(RochetPotential {
        cone: cone.clone(),
        pairs,
        origin: kept,
        base_index: base,
        a,
        b,
    })
}

pub fn phi_eval(p: &RochetPotential, v: &UnitVector) -> Result<f64> {
    p.phi(v)
}

pub fn build_cone(p: &RochetPotential) -> Result<PseudoCone> {
    p.build_cone()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    /// `|<v,u>| ρ_K(v) / h̄_K(u) - 1`.
    pub gap: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub ok: bool,
    pub worst_violation: f64,
    pub per_pair: Vec<PairCheck>,
}

/// Checks `(v, u) ∈ ∂•K` for every pair, with relative tolerance `tol`.
pub fn verify_containment(s: &Pairing, k: &PseudoCone, tol: f64) -> Result<ContainmentReport> {
    let oracle = k.oracle();
    let per_pair = s
        .pairs()
        .iter()
        .map(|(v, u)| {
            let gap = oracle.subdifferential_gap(v, u)?;
            Ok(PairCheck {
                gap,
                inside: gap <= tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_violation = per_pair.iter().map(|p| p.gap).fold(f64::NEG_INFINITY, f64::max);
    Ok(ContainmentReport {
        ok: per_pair.iter().all(|p| p.inside),
        worst_violation,
        per_pair,
    })
}

/// [`verify_containment`] at the default tolerance.
pub fn verify_containment_default(s: &Pairing, k: &PseudoCone) -> Result<ContainmentReport> {
    verify_containment(s, k, SUBDIFFERENTIAL_TOL)
}

#[cfg(test)]
mod tests;
