use rayon::prelude::*;

use super::{Metric, Params, ScoreVector};
use crate::graph::LinkGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Stop once the L1 change between iterations drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// PageRank by power iteration; rank held by nodes without out-links is
/// spread uniformly over all nodes.
///
/// Non-convergence is not an error: the last iterate is returned with
/// `converged: false` and its final delta in the params.
///
/// # Panics
///
/// If `damping` is outside `(0, 1)`.
pub fn pagerank(g: &LinkGraph, config: PageRankConfig) -> ScoreVector {
    assert!(
        config.damping > 0.0 && config.damping < 1.0,
        "damping must lie in (0, 1), got {}",
        config.damping
    );
    let n = g.node_count();
    let d = config.damping;
    let mut rank = vec![1.0 / n as f64; n];
    let mut share = vec![0.0f64; n];
    let mut iterations = 0;
    let mut delta = f64::INFINITY;

    if n > 0 {
        let nf = n as f64;
        while iterations < config.max_iter {
            iterations += 1;
            let mut dangling = 0.0f64;
            for v in 0..n {
                let deg = g.out_degree(v);
                if deg == 0 {
                    dangling += rank[v];
                    share[v] = 0.0;
                } else {
                    share[v] = rank[v] / deg as f64;
                }
            }
            let base = (1.0 - d) / nf + d * dangling / nf;
            let next: Vec<f64> = (0..n)
                .into_par_iter()
                .map(|v| {
                    let inflow: f64 = g.in_neighbors(v).iter().map(|&u| share[u as usize]).sum();
                    base + d * inflow
                })
                .collect();
            delta = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
            rank = next;
            if delta < config.tol {
                break;
            }
        }
    } else {
        delta = 0.0;
    }

    let converged = delta < config.tol;
    ScoreVector::new(
        Metric::PageRank,
        rank,
        Params::PageRank {
            damping: d,
            tol: config.tol,
            max_iter: config.max_iter,
            iterations,
            final_delta: delta,
            converged,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probegen::graph_from_edges;

    #[test]
    fn single_node() {
        let g = graph_from_edges(1, &[]);
        let pr = pagerank(&g, PageRankConfig::default());
        assert!((pr.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_pair() {
        let g = graph_from_edges(2, &[(0, 1), (1, 0)]);
        let pr = pagerank(&g, PageRankConfig::default());
        assert_eq!(pr.values, vec![0.5, 0.5]);
    }

    #[test]
    fn dangling_mass_is_redistributed() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        let pr = pagerank(&g, PageRankConfig::default());
        let sum: f64 = pr.values.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(pr.values[2] > pr.values[1] && pr.values[1] > pr.values[0]);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        let pr = pagerank(&g, PageRankConfig { max_iter: 1, ..Default::default() });
        match pr.params {
            Params::PageRank { converged, iterations, final_delta, .. } => {
                assert!(!converged);
                assert_eq!(iterations, 1);
                assert!(final_delta > 0.0);
            }
            ref other => panic!("unexpected params {other:?}"),
        }
    }

    #[test]
    fn empty_graph() {
        let g = graph_from_edges(0, &[]);
        assert!(pagerank(&g, PageRankConfig::default()).values.is_empty());
    }

    #[test]
    #[should_panic(expected = "damping")]
    fn rejects_bad_damping() {
        let g = graph_from_edges(2, &[(0, 1)]);
        pagerank(&g, PageRankConfig { damping: 1.0, ..Default::default() });
    }
}
