//! Shortest-path statistics and harmonic closeness.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bfs::{Bfs, Orientation};
use super::{Metric, Params, ScoreVector};
use crate::graph::LinkGraph;

/// How node pairs are connected for average path length and diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairSemantics {
    /// Follow links in their direction.
    #[default]
    Directed,
    /// Ignore link direction.
    Undirected,
}

impl fmt::Display for PairSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairSemantics::Directed => "directed",
            PairSemantics::Undirected => "undirected",
        })
    }
}

impl FromStr for PairSemantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "directed" => Ok(PairSemantics::Directed),
            "undirected" => Ok(PairSemantics::Undirected),
            _ => Err(format!("unknown pair semantics '{s}'")),
        }
    }
}

/// Distance direction for closeness: `Out` measures d(u, v), `In` d(v, u).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Out,
    In,
    Undirected,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Out, Direction::In, Direction::Undirected];

    fn orientation(self) -> Orientation {
        match self {
            Direction::Out => Orientation::Forward,
            Direction::In => Orientation::Reverse,
            Direction::Undirected => Orientation::Both,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Out => "out",
            Direction::In => "in",
            Direction::Undirected => "undirected",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "undirected" => Ok(Direction::Undirected),
            _ => Err(format!("unknown direction '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    /// Mean distance over ordered pairs `u != v` with `v` reachable from `u`.
    pub avg_path_length: f64,
    /// Largest finite distance.
    pub diameter: u32,
    pub reachable_pairs: u64,
}

/// BFS from every node; unreachable pairs are left out of the mean.
///
/// With no reachable pair at all the result is all zeros.
pub fn path_stats(g: &LinkGraph, semantics: PairSemantics) -> PathStats {
    let n = g.node_count();
    let both = semantics == PairSemantics::Undirected;
    let blocks: Vec<usize> = (0..n).step_by(64).collect();
    // Integer accumulators: the reduction order cannot change the result.
    let (total, pairs, diameter) = blocks
        .into_par_iter()
        .map_init(
            || LevelSweep::new(n),
            |sweep, start| sweep.run(g, start, both),
        )
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2.max(b.2)));
    PathStats {
        avg_path_length: if pairs > 0 {
            total as f64 / pairs as f64
        } else {
            0.0
        },
        diameter,
        reachable_pairs: pairs,
    }
}

/// Up to 64 simultaneous BFS runs, one bit per source.
struct LevelSweep {
    visited: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
}

impl LevelSweep {
    fn new(n: usize) -> LevelSweep {
        LevelSweep {
            visited: vec![0; n],
            frontier: vec![0; n],
            next: vec![0; n],
        }
    }

    /// Returns (sum of distances, reachable pairs, max distance) for the
    /// sources `start..start + 64`.
    fn run(&mut self, g: &LinkGraph, start: usize, both: bool) -> (u64, u64, u32) {
        let n = g.node_count();
        let width = (n - start).min(64);
        let full = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        self.visited.fill(0);
        self.frontier.fill(0);
        for i in 0..width {
            self.visited[start + i] = 1 << i;
            self.frontier[start + i] = 1 << i;
        }
        let (mut total, mut pairs, mut diameter) = (0u64, 0u64, 0u32);
        for level in 1u32.. {
            let mut found = 0u64;
            for v in 0..n {
                let seen = self.visited[v];
                if seen == full {
                    self.next[v] = 0;
                    continue;
                }
                let mut reach = 0u64;
                for &u in g.in_neighbors(v) {
                    reach |= self.frontier[u as usize];
                }
                if both {
                    for &u in g.out_neighbors(v) {
                        reach |= self.frontier[u as usize];
                    }
                }
                reach &= !seen;
                self.next[v] = reach;
                found += u64::from(reach.count_ones());
            }
            if found == 0 {
                break;
            }
            for (seen, &reach) in self.visited.iter_mut().zip(&self.next) {
                *seen |= reach;
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
            total += u64::from(level) * found;
            pairs += found;
            diameter = level;
        }
        (total, pairs, diameter)
    }
}

/// Harmonic closeness: `(1 / (n - 1)) * sum over v != u of 1 / d(u, v)`,
/// where unreachable nodes contribute zero.
///
/// The inner sum is taken level by level, `count_at(d) / d` for increasing
/// `d`. Graphs with fewer than two nodes score zero everywhere.
pub fn harmonic_closeness(g: &LinkGraph, direction: Direction) -> ScoreVector {
    let n = g.node_count();
    let params = Params::Closeness { direction };
    if n < 2 {
        return ScoreVector::new(Metric::HarmonicCloseness, vec![0.0; n], params);
    }
    let orientation = direction.orientation();
    let scale = (n - 1) as f64;
    let values = (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, s| {
                bfs.run(g, s, orientation);
                let mut sum = 0.0f64;
                let mut level = 1u32;
                let mut count = 0u64;
                for &v in &bfs.order[1..] {
                    let d = bfs.dist[v as usize];
                    if d != level {
                        sum += count as f64 / level as f64;
                        level = d;
                        count = 0;
                    }
                    count += 1;
                }
                if count > 0 {
                    sum += count as f64 / level as f64;
                }
                sum / scale
            },
        )
        .collect();
    ScoreVector::new(Metric::HarmonicCloseness, values, params)
}
