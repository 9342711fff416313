//! c-cyclic monotonicity of finite pairings.
//!
//! For pairs `(v_k, u_k)` let `w(i -> j) = c(v_j, u_i) - c(v_j, u_j)`. A
//! cycle `k_1 -> ... -> k_m -> k_1` has weight
//! `Σ c(v_k, u_prev(k)) - Σ c(v_k, u_k)`, which is exactly the defect of
//! the rearrangement inequality for the cyclic shift on that subset. The
//! pairing is monotone iff no cycle has weight below `-MONOTONE_TOL`.

use itertools::Itertools;

use super::measure::Pairing;
use crate::cone_geometry::{cost, ConeSpec};
use crate::error::{Error, Result};
use crate::graph::{self, Cycle};

/// Additive tolerance on sums of log costs.
pub const MONOTONE_TOL: f64 = 1e-9;
/// Largest pairing accepted by the brute-force checker.
pub const BRUTE_FORCE_MAX: usize = 9;
/// Minimum improvement for a Bellman–Ford relaxation.
const RELAX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub monotone: bool,
    /// Most negative cycle found, as pair indices; empty if none was found.
    pub worst_cycle: Vec<usize>,
    /// Its weight, `0.0` if no cycle was found.
    pub worst_weight: f64,
}

impl MonotonicityReport {
    fn from_cycle(cycle: Option<Cycle>) -> Self {
        match cycle {
            Some(c) => Self {
                monotone: c.weight >= -MONOTONE_TOL,
                worst_cycle: c.nodes,
                worst_weight: c.weight,
            },
            None => Self {
                monotone: true,
                worst_cycle: Vec::new(),
                worst_weight: 0.0,
            },
        }
    }
}

/// `m[i][j] = c(v_i, u_j)`.
pub fn pair_costs(s: &Pairing, cone: &ConeSpec) -> Result<Vec<Vec<f64>>> {
    let p = s.pairs();
    p.iter()
        .map(|(v, _)| p.iter().map(|(_, u)| cost(cone, u, v)).collect())
        .collect()
}

/// `w[i][j] = c(v_j, u_i) - c(v_j, u_j)`.
pub fn exchange_weights(pc: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = pc.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { pc[j][i] - pc[j][j] }).collect())
        .collect()
}

/// Checks every subset of size >= 2 under every cyclic order.
///
/// Any permutation σ splits into disjoint cycles, and the rearrangement
/// defect `Σ c(x_i, y_σ(i)) - Σ c(x_i, y_i)` is the sum of the defects of
/// those cycles (fixed points contribute zero). So a permutation with
/// negative defect has a cycle with negative defect, and that cycle is a
/// cyclic order on a subset. The converse is trivial. A test below also
/// compares against full permutation enumeration.
pub fn monotonicity_bruteforce(s: &Pairing, cone: &ConeSpec) -> Result<MonotonicityReport> {
    let n = s.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge {
            size: n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let w = exchange_weights(&pair_costs(s, cone)?);
    let mut worst: Option<Cycle> = None;
    for k in 2..=n {
        for subset in (0..n).combinations(k) {
            // fix the first element, order the rest: (k-1)! cyclic orders
            for rest in subset[1..].iter().copied().permutations(k - 1) {
                let mut nodes = Vec::with_capacity(k);
                nodes.push(subset[0]);
                nodes.extend(rest);
                let weight = graph::cycle_weight(&w, &nodes);
                if worst.as_ref().is_none_or(|c| weight < c.weight) {
                    worst = Some(Cycle { nodes, weight });
                }
            }
        }
    }
    // a cycle with nonnegative weight is not a witness of anything
    Ok(MonotonicityReport::from_cycle(worst.filter(|c| c.weight < 0.0)))
}

pub fn check_monotone_bruteforce(s: &Pairing, cone: &ConeSpec) -> Result<bool> {
    Ok(monotonicity_bruteforce(s, cone)?.monotone)
}

/// Negative-cycle search on the exchange graph by Bellman–Ford from a
/// virtual source.
///
/// Edges are lifted by `MONOTONE_TOL / N` so that cycles of weight zero up
/// to rounding (which every tight pairing has) cannot trigger detection,
/// while any cycle below `-MONOTONE_TOL` stays negative after the lift.
pub fn monotonicity_cycles(s: &Pairing, cone: &ConeSpec) -> Result<MonotonicityReport> {
    let n = s.len();
    let w = exchange_weights(&pair_costs(s, cone)?);
    let lift = MONOTONE_TOL / n as f64;
    let lifted: Vec<Vec<f64>> = w.iter().map(|row| row.iter().map(|x| x + lift).collect()).collect();
    let found = graph::bellman_ford(&lifted, vec![0.0; n], RELAX_TOL).err();
    Ok(MonotonicityReport::from_cycle(found.map(|c| Cycle {
        weight: graph::cycle_weight(&w, &c.nodes),
        nodes: c.nodes,
    })))
}

pub fn check_monotone_cycles(s: &Pairing, cone: &ConeSpec) -> Result<bool> {
    Ok(monotonicity_cycles(s, cone)?.monotone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_geometry::{sample_in_cone, UnitVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_pairing(rng: &mut ChaCha8Rng, cone: &ConeSpec, n: usize) -> Pairing {
        let dual = cone.dual().unwrap();
        let pairs = (0..n)
            .map(|_| (sample_in_cone(cone, 0.05, rng), sample_in_cone(&dual, 0.05, rng)))
            .collect();
        Pairing::new(cone, pairs).unwrap()
    }

    /// Monotone iff no permutation lowers the total cost.
    fn all_permutations_monotone(s: &Pairing, cone: &ConeSpec) -> bool {
        let pc = pair_costs(s, cone).unwrap();
        let n = s.len();
        let base: f64 = (0..n).map(|i| pc[i][i]).sum();
        (0..n).permutations(n).all(|sigma| {
            let alt: f64 = (0..n).map(|i| pc[i][sigma[i]]).sum();
            base <= alt + MONOTONE_TOL
        })
    }

    #[test]
    fn cyclic_orders_match_full_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cone = ConeSpec::circular(UnitVector::new(vec![0.0, 0.0, 1.0]).unwrap(), 0.7).unwrap();
        let (mut yes, mut no) = (0, 0);
        for trial in 0..300 {
            let n = 1 + trial % 5;
            let s = random_pairing(&mut rng, &cone, n);
            let full = all_permutations_monotone(&s, &cone);
            assert_eq!(check_monotone_bruteforce(&s, &cone).unwrap(), full);
            assert_eq!(check_monotone_cycles(&s, &cone).unwrap(), full);
            if full {
                yes += 1
            } else {
                no += 1
            }
        }
        assert!(yes > 20 && no > 20, "{yes} monotone, {no} not");
    }

    #[test]
    fn singleton_is_monotone() {
        let cone = ConeSpec::circular(UnitVector::new(vec![0.0, 1.0]).unwrap(), 0.7).unwrap();
        let s = Pairing::new(
            &cone,
            vec![(
                UnitVector::new(vec![0.1, 1.0]).unwrap(),
                UnitVector::new(vec![0.0, -1.0]).unwrap(),
            )],
        )
        .unwrap();
        assert!(check_monotone_bruteforce(&s, &cone).unwrap());
        assert!(check_monotone_cycles(&s, &cone).unwrap());
    }

    #[test]
    fn brute_force_refuses_large_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cone = ConeSpec::circular(UnitVector::new(vec![0.0, 1.0]).unwrap(), 0.7).unwrap();
        let s = random_pairing(&mut rng, &cone, 10);
        assert!(matches!(
            check_monotone_bruteforce(&s, &cone),
            Err(Error::TooLarge { size: 10, max: 9 })
        ));
        assert!(check_monotone_cycles(&s, &cone).is_ok());
    }

    #[test]
    fn reported_cycle_weight_matches_its_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cone = ConeSpec::circular(UnitVector::new(vec![0.0, 0.0, 1.0]).unwrap(), 0.7).unwrap();
        for _ in 0..50 {
            let s = random_pairing(&mut rng, &cone, 6);
            let w = exchange_weights(&pair_costs(&s, &cone).unwrap());
            for r in [
                monotonicity_bruteforce(&s, &cone).unwrap(),
                monotonicity_cycles(&s, &cone).unwrap(),
            ] {
                if !r.monotone {
                    let weight = graph::cycle_weight(&w, &r.worst_cycle);
                    assert!((weight - r.worst_weight).abs() < 1e-12);
                    assert!(weight < -MONOTONE_TOL);
                }
            }
        }
    }
}
