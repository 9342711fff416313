//! Bellman–Ford on small dense digraphs.

/// A cycle `c[0] -> c[1] -> ... -> c[0]` and its total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub weight: f64,
}

pub fn cycle_weight(w: &[Vec<f64>], nodes: &[usize]) -> f64 {
    nodes
        .iter()
        .zip(nodes.iter().cycle().skip(1))
        .map(|(&a, &b)| w[a][b])
        .sum()
}

/// Shortest distances on the complete digraph with weights `w[i][j]`,
/// starting from the initial labels `init` (use `0` everywhere for a
/// virtual source joined to every node, or `0` at one node and `+inf`
/// elsewhere for a single source).
///
/// A relaxation must improve a label by more than `tau`. Runs `n` rounds;
/// if the last round still relaxes, a cycle of the predecessor graph is
/// returned instead of distances.
pub fn bellman_ford(w: &[Vec<f64>], init: Vec<f64>, tau: f64) -> Result<Vec<f64>, Cycle> {
    let n = w.len();
    let mut dist = init;
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last = None;
    for _ in 0..n {
        last = None;
        for i in 0..n {
            if !dist[i].is_finite() {
                continue;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let cand = dist[i] + w[i][j];
                if cand < dist[j] - tau {
                    dist[j] = cand;
                    pred[j] = Some(i);
                    last = Some(j);
                }
            }
        }
        if last.is_none() {
            return Ok(dist);
        }
    }
    let Some(mut x) = last else {
        return Ok(dist);
    };
    // walk back n steps to land on the cycle
    for _ in 0..n {
        x = pred[x].expect("relaxed nodes have predecessors");
    }
    let start = x;
    let mut back = vec![start];
    let mut y = pred[start].expect("cycle node has a predecessor");
    while y != start {
        back.push(y);
        y = pred[y].expect("cycle node has a predecessor");
    }
    back.reverse();
    let weight = cycle_weight(w, &back);
    Err(Cycle { nodes: back, weight })
}
