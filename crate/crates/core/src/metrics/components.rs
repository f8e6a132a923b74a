//! Weak and strong connected components.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bfs::{Bfs, Orientation};
use crate::graph::LinkGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentMode {
    /// Components of the undirected projection.
    #[default]
    Weak,
    /// Maximal mutually reachable sets.
    Strong,
}

impl fmt::Display for ComponentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentMode::Weak => "weak",
            ComponentMode::Strong => "strong",
        })
    }
}

impl FromStr for ComponentMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weak" => Ok(ComponentMode::Weak),
            "strong" => Ok(ComponentMode::Strong),
            _ => Err(format!("unknown component mode '{s}'")),
        }
    }
}

/// Per-node component labels, dense `0..count` and numbered in order of
/// each component's smallest node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<u32>,
    pub count: usize,
}

impl Components {
    /// Number of nodes in each component.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Label of the largest component; ties go to the lower label.
    pub fn largest(&self) -> Option<u32> {
        let sizes = self.sizes();
        (0..sizes.len())
            .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .map(|l| l as u32)
    }
}

pub fn connected_components(g: &LinkGraph, mode: ComponentMode) -> Components {
    match mode {
        ComponentMode::Weak => weak(g),
        ComponentMode::Strong => strong(g),
    }
}

fn weak(g: &LinkGraph) -> Components {
    let n = g.node_count();
    let mut labels = vec![u32::MAX; n];
    let mut bfs = Bfs::new(n);
    let mut count = 0u32;
    for s in 0..n {
        if labels[s] != u32::MAX {
            continue;
        }
        bfs.run(g, s, Orientation::Both);
        for &v in &bfs.order {
            labels[v as usize] = count;
        }
        count += 1;
    }
    Components {
        labels,
        count: count as usize,
    }
}

/// Iterative Tarjan, then relabeled by smallest member.
fn strong(g: &LinkGraph) -> Components {
    const UNVISITED: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut raw = vec![0u32; n];
    let mut next_index = 0u32;
    let mut raw_count = 0u32;
    // (node, position in its out-neighbor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let neighbors = g.out_neighbors(v);
            if *pos < neighbors.len() {
                let w = neighbors[*pos] as usize;
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component") as usize;
                    on_stack[w] = false;
                    raw[w] = raw_count;
                    if w == v {
                        break;
                    }
                }
                raw_count += 1;
            }
        }
    }

    let mut relabel = vec![u32::MAX; raw_count as usize];
    let mut count = 0u32;
    let labels = raw
        .iter()
        .map(|&r| {
            let slot = &mut relabel[r as usize];
            if *slot == u32::MAX {
                *slot = count;
                count += 1;
            }
            *slot
        })
        .collect();
    Components {
        labels,
        count: count as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probegen::graph_from_edges;

    #[test]
    fn two_disjoint_edges() {
        let g = graph_from_edges(4, &[(0, 1), (2, 3)]);
        let c = connected_components(&g, ComponentMode::Weak);
        assert_eq!(c.count, 2);
        assert_eq!(c.labels, vec![0, 0, 1, 1]);
    }

    #[test]
    fn directed_path_weak_vs_strong() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(connected_components(&g, ComponentMode::Weak).count, 1);
        let s = connected_components(&g, ComponentMode::Strong);
        assert_eq!(s.count, 3);
        assert_eq!(s.labels, vec![0, 1, 2]);
    }

    #[test]
    fn strong_cycles_and_tail() {
        // cycle {1,2,3}, cycle {4,5}, 0 -> 1, 3 -> 4
        let g = graph_from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 4)]);
        let s = connected_components(&g, ComponentMode::Strong);
        assert_eq!(s.count, 3);
        assert_eq!(s.labels, vec![0, 1, 1, 1, 2, 2]);
        assert_eq!(s.sizes(), vec![1, 3, 2]);
        assert_eq!(s.largest(), Some(1));
    }

    #[test]
    fn long_chain_does_not_recurse() {
        let n = 200_000;
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = graph_from_edges(n, &edges);
        assert_eq!(connected_components(&g, ComponentMode::Strong).count, n);
        assert_eq!(connected_components(&g, ComponentMode::Weak).count, 1);
    }
}
