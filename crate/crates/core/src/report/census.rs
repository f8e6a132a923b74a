//! Cross-network link counts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::LinkGraph;
use crate::ingest::Network;

/// Onion service population used for the Tor coverage estimate.
pub const TOR_ONION_POPULATION: u64 = 75_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CrossCensus {
    pub i2p_to_tor_edges: usize,
    pub tor_to_i2p_edges: usize,
    /// Distinct Tor targets of i2p -> Tor edges.
    pub tor_domains_linked_from_i2p: usize,
    /// Distinct i2p targets of Tor -> i2p edges.
    pub i2p_domains_linked_from_tor: usize,
    /// Distinct i2p sources of i2p -> Tor edges.
    pub i2p_domains_linking_tor: usize,
    /// Distinct Tor sources of Tor -> i2p edges.
    pub tor_domains_linking_i2p: usize,
    pub tor_internal_edges: usize,
    pub i2p_internal_edges: usize,
    pub tor_nodes: usize,
    pub i2p_nodes: usize,
}

impl CrossCensus {
    pub fn cross_edges(&self) -> usize {
        self.i2p_to_tor_edges + self.tor_to_i2p_edges
    }

    pub fn total_edges(&self) -> usize {
        self.cross_edges() + self.tor_internal_edges + self.i2p_internal_edges
    }

    /// Share of an estimated onion population present in the graph.
    pub fn tor_coverage(&self, population: u64) -> f64 {
        if population == 0 {
            0.0
        } else {
            self.tor_nodes as f64 / population as f64
        }
    }
}

pub fn cross_census(g: &LinkGraph) -> CrossCensus {
    let labels = g.labels();
    let mut c = CrossCensus::default();
    let mut tor_targets = BTreeSet::new();
    let mut i2p_targets = BTreeSet::new();
    let mut i2p_sources = BTreeSet::new();
    let mut tor_sources = BTreeSet::new();
    for (u, v) in g.edges() {
        match (labels[u], labels[v]) {
            (Network::I2p, Network::Tor) => {
                c.i2p_to_tor_edges += 1;
                tor_targets.insert(v);
                i2p_sources.insert(u);
            }
            (Network::Tor, Network::I2p) => {
                c.tor_to_i2p_edges += 1;
                i2p_targets.insert(v);
                tor_sources.insert(u);
            }
            (Network::Tor, Network::Tor) => c.tor_internal_edges += 1,
            (Network::I2p, Network::I2p) => c.i2p_internal_edges += 1,
        }
    }
    c.tor_domains_linked_from_i2p = tor_targets.len();
    c.i2p_domains_linked_from_tor = i2p_targets.len();
    c.i2p_domains_linking_tor = i2p_sources.len();
    c.tor_domains_linking_i2p = tor_sources.len();
    c.tor_nodes = labels.iter().filter(|&&l| l == Network::Tor).count();
    c.i2p_nodes = labels.len() - c.tor_nodes;
    c
}
