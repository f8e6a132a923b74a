//! Immutable labeled directed link graph in compressed sparse row form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ingest::{Dataset, Domain, Network};
use crate::metrics::{Metric, Params, ScoreVector};

/// Dense node index, valid only for the graph that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Directed graph over darknet domains.
///
/// Node ids follow the lexicographic order of canonical domains. Both the
/// forward and reverse adjacency are stored, each neighbor list sorted by id.
#[derive(Debug, Clone)]
pub struct LinkGraph {
    domains: Vec<Domain>,
    labels: Vec<Network>,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
}

fn csr(n: usize, pairs: &[(u32, u32)]) -> (Vec<usize>, Vec<u32>) {
    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in pairs {
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut targets = vec![0u32; pairs.len()];
    for &(u, v) in pairs {
        targets[fill[u as usize]] = v;
        fill[u as usize] += 1;
    }
    for i in 0..n {
        targets[offsets[i]..offsets[i + 1]].sort_unstable();
    }
    (offsets, targets)
}

impl LinkGraph {
    /// `domains` must be sorted and distinct; `edges` index into it.
    fn from_parts(domains: Vec<Domain>, edges: &[(u32, u32)]) -> LinkGraph {
        let n = domains.len();
        let labels = domains.iter().map(Domain::network).collect();
        let (out_offsets, out_targets) = csr(n, edges);
        let reversed: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (v, u)).collect();
        let (in_offsets, in_sources) = csr(n, &reversed);
        LinkGraph {
            domains,
            labels,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    pub fn node_count(&self) -> usize {
        self.domains.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn id_of(&self, name: &str) -> Option<NodeId> {
        self.domains
            .binary_search_by(|d| d.canonical().cmp(name))
            .ok()
            .map(|i| NodeId(i as u32))
    }

    pub fn domain(&self, id: NodeId) -> &Domain {
        &self.domains[id.index()]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn label(&self, id: NodeId) -> Network {
        self.labels[id.index()]
    }

    pub fn labels(&self) -> &[Network] {
        &self.labels
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.domains.len() as u32).map(NodeId)
    }

    /// Successors of node `v`, sorted by id.
    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// Predecessors of node `v`, sorted by id.
    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// All edges as `(src, dst)` index pairs in `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v as usize)))
    }

    /// The dataset this graph represents.
    pub fn to_dataset(&self) -> Dataset {
        let mut d = Dataset::new();
        for domain in &self.domains {
            d.insert_node(domain.clone());
        }
        for (u, v) in self.edges() {
            d.insert_edge(self.domains[u].clone(), self.domains[v].clone());
        }
        d
    }
}

/// Builds the graph for a dataset. Ids follow canonical lexicographic order.
pub fn build_graph(dataset: &Dataset) -> LinkGraph {
    let domains: Vec<Domain> = dataset.nodes().iter().cloned().collect();
    let position = |d: &Domain| -> u32 {
        domains
            .binary_search(d)
            .expect("dataset edge endpoints are nodes") as u32
    };
    let edges: Vec<(u32, u32)> = dataset
        .edges()
        .iter()
        .map(|(s, t)| (position(s), position(t)))
        .collect();
    LinkGraph::from_parts(domains, &edges)
}

/// Induced subgraph on the nodes of one network, with ids re-densified in
/// the original order.
pub fn subgraph_by_network(g: &LinkGraph, net: Network) -> LinkGraph {
    let keep: Vec<bool> = g.labels.iter().map(|&l| l == net).collect();
    induced_subgraph(g, &keep)
}

/// Subgraph induced by an arbitrary node subset (`keep[v]`).
pub fn induced_subgraph(g: &LinkGraph, keep: &[bool]) -> LinkGraph {
    assert_eq!(keep.len(), g.node_count());
    let mut remap = vec![u32::MAX; g.node_count()];
    let mut domains = Vec::new();
    for (i, d) in g.domains.iter().enumerate() {
        if keep[i] {
            remap[i] = domains.len() as u32;
            domains.push(d.clone());
        }
    }
    let edges: Vec<(u32, u32)> = g
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (remap[u], remap[v]);
            (a != u32::MAX && b != u32::MAX).then_some((a, b))
        })
        .collect();
    LinkGraph::from_parts(domains, &edges)
}

/// In- and out-degree of every node.
pub fn degrees(g: &LinkGraph) -> (ScoreVector, ScoreVector) {
    let n = g.node_count();
    let in_deg = (0..n).map(|v| g.in_degree(v) as f64).collect();
    let out_deg = (0..n).map(|v| g.out_degree(v) as f64).collect();
    (
        ScoreVector::new(Metric::InDegree, in_deg, Params::None),
        ScoreVector::new(Metric::OutDegree, out_deg, Params::None),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{normalize, RawRecord};

    fn dataset(edges: &[(&str, &str)]) -> Dataset {
        let records: Vec<RawRecord> = edges
            .iter()
            .map(|(s, t)| RawRecord::edge("t", s, t, 1))
            .collect();
        normalize(&records)
    }

    #[test]
    fn empty_dataset() {
        let g = build_graph(&Dataset::new());
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
        let (i, o) = degrees(&g);
        assert!(i.values.is_empty() && o.values.is_empty());
    }

    #[test]
    fn path_degrees() {
        let g = build_graph(&dataset(&[("a.i2p", "b.i2p"), ("b.i2p", "c.i2p")]));
        let (i, o) = degrees(&g);
        assert_eq!(o.values, vec![1.0, 1.0, 0.0]);
        assert_eq!(i.values, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn three_cycle_degrees() {
        let g = build_graph(&dataset(&[("a.i2p", "b.i2p"), ("b.i2p", "c.i2p"), ("c.i2p", "a.i2p")]));
        let (i, o) = degrees(&g);
        assert_eq!(i.values, vec![1.0; 3]);
        assert_eq!(o.values, vec![1.0; 3]);
    }

    #[test]
    fn ids_are_lexicographic() {
        let g = build_graph(&dataset(&[("zz.i2p", "aa.i2p"), ("mm.i2p", "zz.i2p")]));
        let names: Vec<&str> = g.domains().iter().map(|d| d.canonical()).collect();
        assert_eq!(names, vec!["aa.i2p", "mm.i2p", "zz.i2p"]);
        assert_eq!(g.id_of("mm.i2p"), Some(NodeId(1)));
        assert_eq!(g.id_of("nope.i2p"), None);
        for id in g.node_ids() {
            assert_eq!(g.id_of(g.domain(id).canonical()), Some(id));
        }
        assert!(g.has_edge(2, 0));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn cross_edge_only_subgraphs() {
        let tor = "aaaaaaaaaaaaaaaa.onion";
        let g = build_graph(&dataset(&[("x.i2p", tor)]));
        for net in [Network::Tor, Network::I2p] {
            let sub = subgraph_by_network(&g, net);
            assert_eq!(sub.node_count(), 1);
            assert_eq!(sub.edge_count(), 0);
            assert_eq!(sub.labels()[0], net);
        }
    }

    #[test]
    fn rebuild_is_identical() {
        let g = build_graph(&dataset(&[
            ("b.i2p", "a.i2p"),
            ("a.i2p", "cccccccccccccccc.onion"),
            ("cccccccccccccccc.onion", "b.i2p"),
        ]));
        let again = build_graph(&g.to_dataset());
        assert_eq!(again.domains(), g.domains());
        assert_eq!(again.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}
