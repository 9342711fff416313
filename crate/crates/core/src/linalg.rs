//! Small dense vector helpers for low-dimensional geometry.

use nalgebra::{DMatrix, DVector};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n.is_finite() && n > 0.0 {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Angle between two nonzero vectors, from the chord lengths
/// `|â - b̂|` and `|â + b̂|` so that nearly parallel or antiparallel inputs
/// keep full precision.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    let (mut minus, mut plus) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (p, q) = (x / na, y / nb);
        minus += (p - q) * (p - q);
        plus += (p + q) * (p + q);
    }
    2.0 * minus.sqrt().atan2(plus.sqrt())
}

/// Vector orthogonal to `rows.len() == n - 1` vectors in R^n, from signed
/// cofactors. Its length is the (n-1)-volume spanned by the rows, so a tiny
/// result means the rows are dependent.
pub fn orthogonal_complement(rows: &[&[f64]], n: usize) -> Vec<f64> {
    debug_assert_eq!(rows.len() + 1, n);
    if n == 2 {
        return vec![-rows[0][1], rows[0][0]];
    }
    if n == 3 {
        let (a, b) = (rows[0], rows[1]);
        return vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
    }
    (0..n)
        .map(|k| {
            let minor = DMatrix::from_fn(n - 1, n - 1, |r, c| {
                let col = if c < k { c } else { c + 1 };
                rows[r][col]
            });
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor.determinant()
        })
        .collect()
}

/// Solve the square system `rows * x = rhs`. Returns `None` when singular.
pub fn solve(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    let b = DVector::from_column_slice(rhs);
    let x = m.lu().solve(&b)?;
    let out: Vec<f64> = x.iter().copied().collect();
    out.iter().all(|v| v.is_finite()).then_some(out)
}

/// Minimum-norm solution of the underdetermined system `rows * x = rhs`
/// (rows assumed independent).
pub fn min_norm_solution(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let k = rows.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|r| (0..k).map(|c| dot(rows[r], rows[c])).collect())
        .collect();
    let gram_rows: Vec<&[f64]> = gram.iter().map(Vec::as_slice).collect();
    let coeffs = solve(&gram_rows, rhs)?;
    let n = rows[0].len();
    let mut x = vec![0.0; n];
    for (row, c) in rows.iter().zip(&coeffs) {
        for (xi, ri) in x.iter_mut().zip(row.iter()) {
            *xi += c * ri;
        }
    }
    Some(x)
}

/// Numerical rank of a set of row vectors.
pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let m = DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c]);
    m.rank(tol)
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `axis`.
pub fn orthonormal_complement_basis(axis: &[f64]) -> Vec<Vec<f64>> {
    let n = axis.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    let mut seeds: Vec<usize> = (0..n).collect();
    // start from the coordinate directions least aligned with the axis
    seeds.sort_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs()));
    for i in seeds {
        if basis.len() == n - 1 {
            break;
        }
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let mut w = axpy(&e, -dot(&e, axis), axis);
        for b in &basis {
            w = axpy(&w, -dot(&w, b), b);
        }
        if let Some(w) = normalized(&w) {
            if norm(&w) > 0.5 {
                basis.push(w);
            }
        }
    }
    basis
}
