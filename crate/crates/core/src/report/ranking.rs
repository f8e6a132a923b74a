//! Top-k node rankings with deterministic tie-breaking.

use serde::{Deserialize, Serialize};

use crate::graph::LinkGraph;
use crate::ingest::Network;
use crate::metrics::{Metric, ScoreVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    /// 1-based position in the full, unfiltered ordering.
    pub rank: usize,
    pub domain: String,
    pub network: Network,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub metric: Metric,
    pub filter: Option<Network>,
    pub entries: Vec<RankEntry>,
}

impl Ranking {
    /// First entry matching `pattern` under [`domain_matches`].
    pub fn find(&self, pattern: &str) -> Option<&RankEntry> {
        self.entries.iter().find(|e| domain_matches(pattern, &e.domain))
    }
}

/// All node ids ordered by descending value, ties by ascending domain.
pub fn order_nodes(scores: &ScoreVector, g: &LinkGraph) -> Vec<usize> {
    assert_eq!(scores.len(), g.node_count(), "score vector does not match graph");
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    // Ids already follow domain order, so the id is the tie-break key.
    order.sort_by(|&a, &b| {
        scores.values[b].total_cmp(&scores.values[a]).then(a.cmp(&b))
    });
    order
}

/// Highest `k` nodes by score. With a network filter only that network's
/// nodes are listed, each keeping its rank in the combined ordering. `k`
/// larger than the node count yields the full ranking.
pub fn top_k(scores: &ScoreVector, g: &LinkGraph, k: usize, filter: Option<Network>) -> Ranking {
    let entries = order_nodes(scores, g)
        .into_iter()
        .enumerate()
        .filter(|&(_, v)| filter.map_or(true, |net| g.labels()[v] == net))
        .take(k)
        .map(|(pos, v)| RankEntry {
            rank: pos + 1,
            domain: g.domains()[v].canonical().to_string(),
            network: g.labels()[v],
            value: scores.values[v],
        })
        .collect();
    Ranking {
        metric: scores.metric,
        filter,
        entries,
    }
}

/// Matches a full domain against a possibly elided one such as
/// `dhosting4xxoydyaiv...syd.onion`: the text before the ellipsis must be a
/// prefix and the text after it a suffix. Case-insensitive.
pub fn domain_matches(pattern: &str, domain: &str) -> bool {
    let pattern = pattern.to_ascii_lowercase();
    let domain = domain.to_ascii_lowercase();
    let elided = pattern
        .split_once("...")
        .or_else(|| pattern.split_once('\u{2026}'));
    match elided {
        Some((head, tail)) => {
            domain.len() >= head.len() + tail.len() && domain.starts_with(head) && domain.ends_with(tail)
        }
        None => pattern == domain,
    }
}
