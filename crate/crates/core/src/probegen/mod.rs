//! Offline stand-ins for domain discovery, synthetic fixtures, and
//! brute-force oracles used to check the metrics.

mod candidates;
mod oracle;
mod synth;

use thiserror::Error;

pub use candidates::{check_membership, generate_candidates, CandidateBatch, CandidateSpec, Position};
pub use oracle::{
    oracle_all_pairs, oracle_betweenness, oracle_pagerank, DistanceMatrix, ALL_PAIRS_LIMIT,
    BETWEENNESS_LIMIT, PAGERANK_LIMIT,
};
pub use synth::{
    graph_from_edges, indexed_domain, labeled_graph_from_edges, random_digraph, synth_graph,
    SynthSpec,
};

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("keyword '{0}' has characters outside [a-z2-7]")]
    InvalidKeyword(String),
    #[error("keyword '{keyword}' is longer than the {max}-character address body")]
    KeywordTooLong { keyword: String, max: usize },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("infeasible spec: {0}")]
    Infeasible(String),
    #[error("oracle limited to {limit} nodes, graph has {n}")]
    Guardrail { n: usize, limit: usize },
}
