//! Synthetic two-network link graphs.
//!
//! Each network grows hubs two ways: link targets are drawn with weight
//! `(in_degree + 1)^attachment_exponent`, and half of all link sources are
//! drawn from a small set of hub nodes, which gives directory-style sites with
//! large out-degree. A link crosses to the other network with probability
//! `cross_edge_prob`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProbeError;
use crate::graph::{build_graph, LinkGraph};
use crate::ingest::{classify_domain, Dataset, Domain, EdgeOutcome, Network};

const BASE32: &[u8; 32] = b"abcdefghijklmnopqrstuvwxyz234567";
/// Base32 symbols in ASCII order, so encoded indices sort numerically.
const SORTED_BASE32: &[u8; 32] = b"234567abcdefghijklmnopqrstuvwxyz";
const MAX_DRAWS_PER_EDGE: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_i2p: usize,
    pub n_tor: usize,
    /// Fraction of each network's nodes acting as link hubs.
    pub hub_fraction: f64,
    pub attachment_exponent: f64,
    pub cross_edge_prob: f64,
    /// Edges per node (`m / n`).
    pub target_avg_degree: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// Sized like the published Tor + i2p dataset: 2687 i2p and 46562 Tor
    /// nodes, about 304.7k links of which 8635 cross networks.
    pub fn dataset_sized(seed: u64) -> SynthSpec {
        SynthSpec {
            n_i2p: 2687,
            n_tor: 46562,
            hub_fraction: 0.002,
            attachment_exponent: 1.0,
            cross_edge_prob: (487.0 + 8148.0) / 304673.0,
            target_avg_degree: 304673.0 / 49249.0,
            seed,
        }
    }

    /// Same shape as [`SynthSpec::dataset_sized`] scaled to `n` nodes.
    pub fn scaled(n: usize, seed: u64) -> SynthSpec {
        let full = SynthSpec::dataset_sized(seed);
        let n_i2p = (n as f64 * 2687.0 / 49249.0).round() as usize;
        SynthSpec {
            n_i2p,
            n_tor: n - n_i2p,
            ..full
        }
    }

    pub fn node_count(&self) -> usize {
        self.n_i2p + self.n_tor
    }

    pub fn edge_target(&self) -> usize {
        (self.target_avg_degree * self.node_count() as f64).round() as usize
    }

    fn validate(&self) -> Result<(), ProbeError> {
        for (name, p) in [
            ("hub_fraction", self.hub_fraction),
            ("cross_edge_prob", self.cross_edge_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ProbeError::InvalidSpec(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        if !self.attachment_exponent.is_finite() || self.attachment_exponent < 0.0 {
            return Err(ProbeError::InvalidSpec(format!(
                "attachment_exponent must be a non-negative number, got {}",
                self.attachment_exponent
            )));
        }
        let n = self.node_count();
        if !self.target_avg_degree.is_finite()
            || self.target_avg_degree < 0.0
            || (self.target_avg_degree > 0.0 && self.target_avg_degree > n.saturating_sub(1) as f64)
        {
            return Err(ProbeError::Infeasible(format!(
                "average degree {} is impossible with {n} nodes",
                self.target_avg_degree
            )));
        }
        Ok(())
    }
}

/// Prefix sums over per-node weights with point updates.
struct Fenwick {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl Fenwick {
    fn new(weights: Vec<f64>) -> Fenwick {
        let n = weights.len();
        let mut tree = vec![0.0; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            let mut j = i + 1;
            while j <= n {
                tree[j] += w;
                j += j & j.wrapping_neg();
            }
        }
        Fenwick { tree, weights }
    }

    fn set(&mut self, i: usize, w: f64) {
        let diff = w - self.weights[i];
        self.weights[i] = w;
        let mut j = i + 1;
        while j < self.tree.len() {
            self.tree[j] += diff;
            j += j & j.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut j = self.tree.len() - 1;
        let mut sum = 0.0;
        while j > 0 {
            sum += self.tree[j];
            j -= j & j.wrapping_neg();
        }
        sum
    }

    /// Index whose cumulative weight interval contains `target`.
    fn find(&self, mut target: f64) -> usize {
        let n = self.weights.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}

struct NetworkState {
    nodes: Vec<Domain>,
    hubs: usize,
    in_degree: Vec<u32>,
    attraction: Fenwick,
}

impl NetworkState {
    fn new(nodes: Vec<Domain>, hub_fraction: f64) -> NetworkState {
        let n = nodes.len();
        NetworkState {
            hubs: (hub_fraction * n as f64).ceil() as usize,
            in_degree: vec![0; n],
            attraction: Fenwick::new(vec![1.0; n]),
            nodes,
        }
    }

    fn pick_source(&self, rng: &mut ChaCha8Rng) -> usize {
        if self.hubs > 0 && rng.gen_bool(0.5) {
            rng.gen_range(0..self.hubs)
        } else {
            rng.gen_range(0..self.nodes.len())
        }
    }

    fn pick_target(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = self.attraction.total();
        self.attraction.find(rng.gen::<f64>() * total)
    }

    fn record_in_link(&mut self, i: usize, exponent: f64) {
        self.in_degree[i] += 1;
        self.attraction
            .set(i, (self.in_degree[i] as f64 + 1.0).powf(exponent));
    }
}

fn random_names(
    rng: &mut ChaCha8Rng,
    count: usize,
    taken: &mut HashSet<String>,
    make: impl Fn(&mut ChaCha8Rng) -> String,
) -> Vec<Domain> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let name = make(rng);
        if taken.insert(name.clone()) {
            out.push(classify_domain(&name).expect("generated names classify"));
        }
    }
    out
}

fn random_chars(rng: &mut ChaCha8Rng, len: usize, alphabet: &[u8]) -> String {
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())] as char)
        .collect()
}

/// Generates a dataset with exactly `n_i2p + n_tor` nodes.
pub fn synth_graph(spec: &SynthSpec) -> Result<Dataset, ProbeError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut taken = HashSet::new();
    let tor_nodes = random_names(&mut rng, spec.n_tor, &mut taken, |r| {
        format!("{}.onion", random_chars(r, 16, BASE32))
    });
    let i2p_nodes = random_names(&mut rng, spec.n_i2p, &mut taken, |r| {
        format!("{}.i2p", random_chars(r, 10, &BASE32[..26]))
    });

    let mut dataset = Dataset::new();
    for d in tor_nodes.iter().chain(&i2p_nodes) {
        dataset.insert_node(d.clone());
    }
    let mut tor = NetworkState::new(tor_nodes, spec.hub_fraction);
    let mut i2p = NetworkState::new(i2p_nodes, spec.hub_fraction);
    let n = spec.node_count() as f64;

    for _ in 0..spec.edge_target() {
        let src_net = if rng.gen::<f64>() * n < spec.n_tor as f64 {
            Network::Tor
        } else {
            Network::I2p
        };
        let crosses = rng.gen_bool(spec.cross_edge_prob);
        let dst_net = match (crosses, src_net) {
            (true, Network::Tor) if spec.n_i2p > 0 => Network::I2p,
            (true, Network::I2p) if spec.n_tor > 0 => Network::Tor,
            _ => src_net,
        };

        let mut placed = false;
        for _ in 0..MAX_DRAWS_PER_EDGE {
            let (src_state, dst_state) = match (src_net, dst_net) {
                (Network::Tor, Network::Tor) => (&tor, &tor),
                (Network::I2p, Network::I2p) => (&i2p, &i2p),
                (Network::Tor, Network::I2p) => (&tor, &i2p),
                (Network::I2p, Network::Tor) => (&i2p, &tor),
            };
            let s = src_state.pick_source(&mut rng);
            let t = dst_state.pick_target(&mut rng);
            let (src, dst) = (src_state.nodes[s].clone(), dst_state.nodes[t].clone());
            if dataset.insert_edge(src, dst) == EdgeOutcome::Inserted {
                match dst_net {
                    Network::Tor => tor.record_in_link(t, spec.attachment_exponent),
                    Network::I2p => i2p.record_in_link(t, spec.attachment_exponent),
                }
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(ProbeError::Infeasible(format!(
                "could not place a new {src_net} -> {dst_net} link after {MAX_DRAWS_PER_EDGE} draws"
            )));
        }
    }
    Ok(dataset)
}

fn index_code(i: usize) -> String {
    let mut code = [SORTED_BASE32[0]; 6];
    let mut rest = i;
    for slot in code.iter_mut().rev() {
        *slot = SORTED_BASE32[rest % 32];
        rest /= 32;
    }
    String::from_utf8(code.to_vec()).expect("ascii")
}

/// A domain name whose lexicographic rank equals `i` among names produced
/// here, so graph node ids line up with the indices used to build it.
pub fn indexed_domain(i: usize, net: Network) -> Domain {
    let name = match net {
        Network::Tor => format!("{}aaaaaaaaaa.onion", index_code(i)),
        Network::I2p => format!("{}.i2p", index_code(i)),
    };
    classify_domain(&name).expect("indexed names classify")
}

/// Graph over `labels.len()` nodes with node `i` at id `i`.
pub fn labeled_graph_from_edges(labels: &[Network], edges: &[(usize, usize)]) -> LinkGraph {
    let domains: Vec<Domain> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| indexed_domain(i, l))
        .collect();
    let mut dataset = Dataset::new();
    for d in &domains {
        dataset.insert_node(d.clone());
    }
    for &(u, v) in edges {
        dataset.insert_edge(domains[u].clone(), domains[v].clone());
    }
    build_graph(&dataset)
}

/// All-i2p graph with node `i` at id `i`.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> LinkGraph {
    labeled_graph_from_edges(&vec![Network::I2p; n], edges)
}

/// Each ordered pair `u != v` becomes an edge with probability `p`; labels
/// are drawn uniformly.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> LinkGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Network> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Network::Tor } else { Network::I2p })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    labeled_graph_from_edges(&labels, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::subgraph_by_network;
    use crate::ingest::normalize;

    fn small(seed: u64) -> SynthSpec {
        SynthSpec {
            n_i2p: 40,
            n_tor: 160,
            hub_fraction: 0.05,
            attachment_exponent: 1.0,
            cross_edge_prob: 0.1,
            target_avg_degree: 4.0,
            seed,
        }
    }

    #[test]
    fn counts_are_exact() {
        let spec = small(3);
        let d = synth_graph(&spec).unwrap();
        assert_eq!(d.node_count(), 200);
        assert_eq!(d.edge_count(), 800);
        let g = build_graph(&d);
        assert_eq!(subgraph_by_network(&g, Network::I2p).node_count(), 40);
    }

    #[test]
    fn deterministic_and_canonical() {
        let a = synth_graph(&small(11)).unwrap();
        let b = synth_graph(&small(11)).unwrap();
        assert_eq!(a, b);
        assert_eq!(normalize(&a.to_records()), a);
        assert_ne!(synth_graph(&small(12)).unwrap(), a);
    }

    #[test]
    fn pure_tor() {
        let spec = SynthSpec { n_i2p: 0, cross_edge_prob: 0.5, ..small(1) };
        let d = synth_graph(&spec).unwrap();
        assert!(d.nodes().iter().all(|n| n.network() == Network::Tor));
        assert_eq!(d.node_count(), 160);
    }

    #[test]
    fn infeasible_and_invalid_specs() {
        let dense = SynthSpec { target_avg_degree: 200.0, ..small(1) };
        assert!(matches!(synth_graph(&dense), Err(ProbeError::Infeasible(_))));
        let bad = SynthSpec { cross_edge_prob: 1.5, ..small(1) };
        assert!(matches!(synth_graph(&bad), Err(ProbeError::InvalidSpec(_))));
        let neg = SynthSpec { attachment_exponent: -1.0, ..small(1) };
        assert!(synth_graph(&neg).is_err());
    }

    #[test]
    fn complete_digraph_is_reachable() {
        let spec = SynthSpec {
            n_i2p: 0,
            n_tor: 5,
            hub_fraction: 0.0,
            attachment_exponent: 0.0,
            cross_edge_prob: 0.0,
            target_avg_degree: 4.0,
            seed: 9,
        };
        assert_eq!(synth_graph(&spec).unwrap().edge_count(), 20);
    }

    #[test]
    fn indexed_names_sort_by_index() {
        let names: Vec<Domain> = (0..2000)
            .map(|i| indexed_domain(i, if i % 3 == 0 { Network::Tor } else { Network::I2p }))
            .collect();
        assert!(names.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fenwick_sampling() {
        let mut f = Fenwick::new(vec![1.0, 0.0, 2.0, 1.0]);
        assert_eq!(f.total(), 4.0);
        assert_eq!(f.find(0.5), 0);
        assert_eq!(f.find(1.0), 2);
        assert_eq!(f.find(2.99), 2);
        assert_eq!(f.find(3.5), 3);
        f.set(1, 5.0);
        assert_eq!(f.find(1.5), 1);
        assert_eq!(f.total(), 9.0);
    }
}
