//! Graph-level summary statistics and node centralities.
//!
//! Every routine takes an immutable [`LinkGraph`] and parallelizes over BFS
//! sources with rayon. Floating-point reductions are done over fixed-size
//! source chunks merged in chunk order, so results are bit-identical for any
//! worker count.

mod betweenness;
mod bfs;
mod components;
mod pagerank;
mod paths;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::LinkGraph;

pub use betweenness::{betweenness, BetweennessStrategy};
pub use components::{connected_components, ComponentMode, Components};
pub use pagerank::{pagerank, PageRankConfig};
pub use paths::{harmonic_closeness, path_stats, Direction, PairSemantics, PathStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    InDegree,
    OutDegree,
    HarmonicCloseness,
    Betweenness,
    PageRank,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::InDegree,
        Metric::OutDegree,
        Metric::HarmonicCloseness,
        Metric::Betweenness,
        Metric::PageRank,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Metric::InDegree => "in-degree",
            Metric::OutDegree => "out-degree",
            Metric::HarmonicCloseness => "closeness",
            Metric::Betweenness => "betweenness",
            Metric::PageRank => "pagerank",
        }
    }

    /// Column header used in ranking tables.
    pub fn header(self) -> &'static str {
        match self {
            Metric::InDegree => "In-Degree",
            Metric::OutDegree => "Out-Degree",
            Metric::HarmonicCloseness => "Closeness",
            Metric::Betweenness => "Betweenness",
            Metric::PageRank => "PageRank",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.slug() == s)
            .ok_or_else(|| format!("unknown metric '{s}'"))
    }
}

/// Parameters a score vector was computed with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Params {
    None,
    Closeness {
        direction: Direction,
    },
    Betweenness {
        strategy: BetweennessStrategy,
        /// Number of BFS sources actually used.
        sources: usize,
    },
    PageRank {
        damping: f64,
        tol: f64,
        max_iter: usize,
        iterations: usize,
        final_delta: f64,
        converged: bool,
    },
}

/// One value per node, indexed by [`NodeId`](crate::graph::NodeId).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub metric: Metric,
    pub values: Vec<f64>,
    pub params: Params,
}

impl ScoreVector {
    pub fn new(metric: Metric, values: Vec<f64>, params: Params) -> ScoreVector {
        ScoreVector {
            metric,
            values,
            params,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Conditions under which some summary fields are placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricFlag {
    EmptyGraph,
    SingleNode,
    NoReachablePairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SummaryOptions {
    pub pair_semantics: PairSemantics,
    pub component_mode: ComponentMode,
}

/// Whole-graph statistics, one column of the network metrics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub nodes: usize,
    pub edges: usize,
    /// `edges / nodes`.
    pub avg_degree: f64,
    /// `edges / (nodes * (nodes - 1))`.
    pub density: f64,
    pub avg_path_length: f64,
    pub diameter: u32,
    pub connected_components: usize,
    pub reachable_pairs: u64,
    pub pair_semantics: PairSemantics,
    pub component_mode: ComponentMode,
    pub flags: Vec<MetricFlag>,
}

/// Computes node/edge counts, average degree, density, path statistics and
/// the component count.
///
/// Empty and single-node graphs produce zeros with a flag instead of failing.
pub fn graph_summary(g: &LinkGraph, options: SummaryOptions) -> GraphMetrics {
    let n = g.node_count();
    let m = g.edge_count();
    let mut flags = Vec::new();
    let avg_degree = if n > 0 { m as f64 / n as f64 } else { 0.0 };
    let density = if n > 1 {
        m as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let (avg_path_length, diameter, reachable_pairs) = match n {
        0 => {
            flags.push(MetricFlag::EmptyGraph);
            (0.0, 0, 0)
        }
        1 => {
            flags.push(MetricFlag::SingleNode);
            (0.0, 0, 0)
        }
        _ => {
            let stats = path_stats(g, options.pair_semantics);
            if stats.reachable_pairs == 0 {
                flags.push(MetricFlag::NoReachablePairs);
            }
            (stats.avg_path_length, stats.diameter, stats.reachable_pairs)
        }
    };
    GraphMetrics {
        nodes: n,
        edges: m,
        avg_degree,
        density,
        avg_path_length,
        diameter,
        connected_components: connected_components(g, options.component_mode).count,
        reachable_pairs,
        pair_semantics: options.pair_semantics,
        component_mode: options.component_mode,
        flags,
    }
}
