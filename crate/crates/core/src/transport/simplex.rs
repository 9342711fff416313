//! Transportation simplex on a dense `M x N` cost matrix.
//!
//! The basis is always a spanning tree of the bipartite graph
//! rows ∪ columns with `M + N - 1` cells (some possibly at zero mass).

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Supply and demand totals may differ by at most this much.
pub const MARGINAL_TOL: f64 = 1e-10;
/// Entering cells need a reduced cost below `-OPTIMALITY_TOL`.
pub const OPTIMALITY_TOL: f64 = 1e-12;
/// Plan entries at or below this mass are dropped from the output.
pub const MASS_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    /// `(row, column, mass)` with mass above [`MASS_FLOOR`].
    pub entries: Vec<(usize, usize, f64)>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub total_cost: f64,
    pub pivots: usize,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    row: usize,
    col: usize,
    mass: f64,
}

/// Basic feasible solution by the north-west corner rule applied in the
/// given row and column orders. Always returns `M + N - 1` cells.
pub fn northwest_corner(
    supply: &[f64],
    demand: &[f64],
    row_order: &[usize],
    col_order: &[usize],
) -> Vec<(usize, usize, f64)> {
    let (m, n) = (supply.len(), demand.len());
    let mut s: Vec<f64> = row_order.iter().map(|&r| supply[r]).collect();
    let mut d: Vec<f64> = col_order.iter().map(|&c| demand[c]).collect();
    let (mut a, mut b) = (0, 0);
    let mut out = Vec::with_capacity(m + n - 1);
    loop {
        let x = s[a].min(d[b]).max(0.0);
        out.push((row_order[a], col_order[b], x));
        s[a] -= x;
        d[b] -= x;
        if a == m - 1 && b == n - 1 {
            break;
        }
        if a == m - 1 {
            b += 1;
        } else if b == n - 1 || s[a] <= d[b] {
            a += 1;
        } else {
            b += 1;
        }
    }
    out
}

/// Minimizes `Σ x_ji c_ji` subject to row sums `supply` and column sums
/// `demand`.
pub fn solve_transport(supply: &[f64], demand: &[f64], costs: &[Vec<f64>]) -> Result<SimplexSolution> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("empty marginals".into()));
    }
    if costs.len() != m || costs.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: m * n,
            found: costs.iter().map(Vec::len).sum(),
        });
    }
    if supply.iter().chain(demand).any(|w| !(w.is_finite() && *w >= 0.0))
        || costs.iter().flatten().any(|c| !c.is_finite())
    {
        return Err(Error::InvalidInput(
            "marginals must be nonnegative and costs finite".into(),
        ));
    }
    let (ts, td): (f64, f64) = (supply.iter().sum(), demand.iter().sum());
    if (ts - td).abs() > MARGINAL_TOL {
        return Err(Error::InfeasibleMarginals { supply: ts, demand: td });
    }

    let rows: Vec<usize> = (0..m).collect();
    let cols: Vec<usize> = (0..n).collect();
    let mut basis: Vec<Cell> = northwest_corner(supply, demand, &rows, &cols)
        .into_iter()
        .map(|(row, col, mass)| Cell { row, col, mass })
        .collect();

    let limit = 10_000 + 20 * (m + n) * (m + n);
    let mut pivots = 0;
    let mut bland = false;
    let (mut phi, mut psi);
    loop {
        (phi, psi) = potentials(&basis, costs, m, n);
        let Some((row, col)) = entering(costs, &phi, &psi, bland) else {
            break;
        };
        if pivots >= limit {
            return Err(Error::IterationLimit(limit));
        }
        let theta = pivot(&mut basis, row, col, m, n);
        // stay with Bland's rule through any run of degenerate pivots
        bland = theta == 0.0;
        pivots += 1;
    }

    let mut entries: Vec<(usize, usize, f64)> = basis
        .iter()
        .filter(|c| c.mass > MASS_FLOOR)
        .map(|c| (c.row, c.col, c.mass))
        .collect();
    entries.sort_by_key(|&(r, c, _)| (r, c));
    let total_cost = entries.iter().map(|&(r, c, x)| x * costs[r][c]).sum();
    Ok(SimplexSolution {
        entries,
        phi,
        psi,
        total_cost,
        pivots,
    })
}

/// Tree adjacency: node `r` for rows, `m + c` for columns; each entry
/// holds `(neighbor, basis index)`.
fn adjacency(basis: &[Cell], m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); m + n];
    for (k, c) in basis.iter().enumerate() {
        adj[c.row].push((m + c.col, k));
        adj[m + c.col].push((c.row, k));
    }
    adj
}

/// Solves `phi_r + psi_c = cost` on the basis tree with `phi_0 = 0`.
fn potentials(basis: &[Cell], costs: &[Vec<f64>], m: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let adj = adjacency(basis, m, n);
    let mut val = vec![f64::NAN; m + n];
    val[0] = 0.0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &(y, k) in &adj[x] {
            if val[y].is_nan() {
                let c = costs[basis[k].row][basis[k].col];
                val[y] = c - val[x];
                queue.push_back(y);
            }
        }
    }
    debug_assert!(val.iter().all(|v| !v.is_nan()), "basis must span");
    let psi = val.split_off(m);
    (val, psi)
}

fn entering(costs: &[Vec<f64>], phi: &[f64], psi: &[f64], bland: bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for (r, row) in costs.iter().enumerate() {
        for (c, &cost) in row.iter().enumerate() {
            let red = cost - phi[r] - psi[c];
            if red < -OPTIMALITY_TOL {
                if bland {
                    return Some((r, c));
                }
                if best.is_none_or(|(_, _, b)| red < b) {
                    best = Some((r, c, red));
                }
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Adds `(row, col)` to the basis, moves mass around the cycle it closes,
/// and drops one blocking cell. Returns the step length.
fn pivot(basis: &mut [Cell], row: usize, col: usize, m: usize, n: usize) -> f64 {
    let adj = adjacency(basis, m, n);
    // path from the row node to the column node in the tree
    let (src, dst) = (row, m + col);
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; m + n];
    let mut seen = vec![false; m + n];
    seen[src] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        if x == dst {
            break;
        }
        for &(y, k) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    // cells from the column end back to the row end; the first one shares
    // the entering column, so it loses mass, and signs alternate from there
    let mut path = Vec::new();
    let mut x = dst;
    while x != src {
        let (p, k) = prev[x].expect("basis tree is connected");
        path.push(k);
        x = p;
    }
    let minus: Vec<usize> = path.iter().copied().step_by(2).collect();
    let plus: Vec<usize> = path.iter().copied().skip(1).step_by(2).collect();
    let theta = minus.iter().map(|&k| basis[k].mass).fold(f64::INFINITY, f64::min);
    let leaving = minus
        .iter()
        .copied()
        .filter(|&k| basis[k].mass == theta)
        .min_by_key(|&k| basis[k].row * n + basis[k].col)
        .expect("cycle has a minus cell");
    for &k in &minus {
        basis[k].mass -= theta;
    }
    for &k in &plus {
        basis[k].mass += theta;
    }
    basis[leaving] = Cell { row, col, mass: theta };
    theta
}
