//! Brute-force reference computations for small graphs.
//!
//! Nothing here touches the `metrics` module: these work from an adjacency
//! matrix built out of the graph's edge list.

use std::collections::VecDeque;

use num_rational::Ratio;

use super::ProbeError;
use crate::graph::LinkGraph;
use crate::metrics::{Metric, Params, ScoreVector};

pub const ALL_PAIRS_LIMIT: usize = 512;
pub const BETWEENNESS_LIMIT: usize = 10;
pub const PAGERANK_LIMIT: usize = 200;

fn guard(g: &LinkGraph, limit: usize) -> Result<(), ProbeError> {
    if g.node_count() > limit {
        return Err(ProbeError::Guardrail {
            n: g.node_count(),
            limit,
        });
    }
    Ok(())
}

fn adjacency(g: &LinkGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
    }
    adj
}

/// `dist(u, v)`, `None` when `v` is unreachable from `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    cells: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.cells[u * self.n + v]
    }
}

/// Exact distances by a matrix-scanning BFS from every node.
pub fn oracle_all_pairs(g: &LinkGraph) -> Result<DistanceMatrix, ProbeError> {
    guard(g, ALL_PAIRS_LIMIT)?;
    let n = g.node_count();
    let adj = adjacency(g);
    let mut cells = vec![None; n * n];
    for s in 0..n {
        let row = &mut cells[s * n..(s + 1) * n];
        row[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = row[u].expect("queued nodes have a distance");
            for v in 0..n {
                if adj[u][v] && row[v].is_none() {
                    row[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(DistanceMatrix { n, cells })
}

/// Counts walks `s -> ... -> t` of exactly `remaining` more steps, adding
/// how many pass through each node to `through`.
fn enumerate_paths(
    adj: &[Vec<bool>],
    path: &mut Vec<usize>,
    target: usize,
    remaining: u32,
    through: &mut [i128],
) -> i128 {
    let here = *path.last().expect("path starts at the source");
    if remaining == 0 {
        if here != target {
            return 0;
        }
        for &v in &path[1..path.len() - 1] {
            through[v] += 1;
        }
        return 1;
    }
    let mut found = 0;
    for next in 0..adj.len() {
        if adj[here][next] {
            path.push(next);
            found += enumerate_paths(adj, path, target, remaining - 1, through);
            path.pop();
        }
    }
    found
}

/// Betweenness by listing every shortest path of every ordered pair, summed
/// in exact rational arithmetic and rounded once at the end.
pub fn oracle_betweenness(g: &LinkGraph) -> Result<ScoreVector, ProbeError> {
    guard(g, BETWEENNESS_LIMIT)?;
    let n = g.node_count();
    let adj = adjacency(g);
    let dist = oracle_all_pairs(g)?;
    let mut totals = vec![Ratio::<i128>::from_integer(0); n];
    for s in 0..n {
        for t in 0..n {
            let Some(d) = dist.get(s, t) else { continue };
            if s == t {
                continue;
            }
            let mut through = vec![0i128; n];
            let count = enumerate_paths(&adj, &mut vec![s], t, d, &mut through);
            for v in 0..n {
                if through[v] > 0 {
                    totals[v] += Ratio::new(through[v], count);
                }
            }
        }
    }
    let values = totals
        .iter()
        .map(|r| *r.numer() as f64 / *r.denom() as f64)
        .collect();
    Ok(ScoreVector::new(Metric::Betweenness, values, Params::None))
}

/// PageRank as the solution of `(I - d * P^T) x = (1 - d) / n`, where `P` is
/// the row-stochastic link matrix with dangling rows set to `1 / n`.
/// Dense Gaussian elimination with partial pivoting.
pub fn oracle_pagerank(g: &LinkGraph, damping: f64) -> Result<ScoreVector, ProbeError> {
    guard(g, PAGERANK_LIMIT)?;
    let n = g.node_count();
    let adj = adjacency(g);
    let nf = n as f64;
    // a[i] holds row i of the augmented system [I - d P^T | b].
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
        row[n] = (1.0 - damping) / nf;
    }
    for u in 0..n {
        let out = adj[u].iter().filter(|&&e| e).count();
        for v in 0..n {
            let p_uv = if out == 0 {
                1.0 / nf
            } else if adj[u][v] {
                1.0 / out as f64
            } else {
                0.0
            };
            a[v][u] -= damping * p_uv;
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty pivot range");
        a.swap(col, pivot);
        let p = a[col][col];
        for row in 0..n {
            if row != col {
                let factor = a[row][col] / p;
                if factor != 0.0 {
                    for k in col..=n {
                        a[row][k] -= factor * a[col][k];
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    Ok(ScoreVector::new(Metric::PageRank, values, Params::None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probegen::{graph_from_edges, random_digraph};

    #[test]
    fn three_cycle_distances() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let d = oracle_all_pairs(&g).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let x = d.get(u, v).unwrap();
                if u == v {
                    assert_eq!(x, 0);
                } else {
                    assert!(x == 1 || x == 2);
                }
            }
        }
    }

    #[test]
    fn path_distances() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        let d = oracle_all_pairs(&g).unwrap();
        assert_eq!(d.get(0, 2), Some(2));
        assert_eq!(d.get(2, 0), None);
    }

    #[test]
    fn symmetric_graph_matches_undirected_floyd_warshall() {
        // Random undirected graph stored as a symmetric digraph.
        let base = random_digraph(50, 0.04, 5);
        let mut edges: Vec<(usize, usize)> = base.edges().collect();
        edges.extend(base.edges().map(|(u, v)| (v, u)));
        let g = graph_from_edges(50, &edges);
        let d = oracle_all_pairs(&g).unwrap();
        let n = 50;
        let inf = u32::MAX / 4;
        let mut fw = vec![vec![inf; n]; n];
        for (i, row) in fw.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(u, v) in &edges {
            fw[u][v] = 1;
            fw[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    fw[i][j] = fw[i][j].min(fw[i][k] + fw[k][j]);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let expected = (fw[i][j] < inf).then_some(fw[i][j]);
                assert_eq!(d.get(i, j), expected);
                assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }

    #[test]
    fn betweenness_small_cases() {
        let path = graph_from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(oracle_betweenness(&path).unwrap().values, vec![0.0, 1.0, 0.0]);
        let cycle = graph_from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let v = oracle_betweenness(&cycle).unwrap().values;
        assert!(v.iter().all(|&x| x == v[0]));
    }

    #[test]
    fn pagerank_small_cases() {
        let one = graph_from_edges(1, &[]);
        assert!((oracle_pagerank(&one, 0.85).unwrap().values[0] - 1.0).abs() < 1e-15);
        let pair = graph_from_edges(2, &[(0, 1), (1, 0)]);
        let v = oracle_pagerank(&pair, 0.85).unwrap().values;
        assert!((v[0] - 0.5).abs() < 1e-15 && (v[1] - 0.5).abs() < 1e-15);
        let g = random_digraph(50, 0.08, 17);
        let v = oracle_pagerank(&g, 0.85).unwrap().values;
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn guardrails() {
        let g = graph_from_edges(11, &[]);
        assert!(matches!(oracle_betweenness(&g), Err(ProbeError::Guardrail { limit: 10, .. })));
        let big = graph_from_edges(201, &[]);
        assert!(oracle_pagerank(&big, 0.85).is_err());
        assert!(oracle_all_pairs(&big).is_ok());
    }
}
