//! Brandes betweenness over directed shortest paths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bfs::UNREACHED;
use super::{Metric, Params, ScoreVector};
use crate::graph::LinkGraph;

/// Sources per accumulator chunk. Fixed so the summation tree never depends
/// on the number of workers.
const CHUNK: usize = 32;
/// Chunks evaluated concurrently before their partial sums are folded in.
const CHUNKS_PER_BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BetweennessStrategy {
    /// Every node is a BFS source.
    Exact,
    /// `k` uniformly chosen sources, scaled by `n / k`.
    Sampled { k: usize, seed: u64 },
}

/// Double-double arithmetic for non-negative values.
///
/// Dependencies are rationals with small denominators. Carrying about 106
/// bits and rounding once at the end gives the correctly rounded sum, so
/// exact betweenness does not depend on summation order.
mod dd {
    #[derive(Debug, Clone, Copy, Default, PartialEq)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn split(a: f64) -> (f64, f64) {
        let t = 134_217_729.0 * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }

    /// Error-free product without relying on hardware FMA.
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        let (ah, al) = split(a);
        let (bh, bl) = split(b);
        (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
    }

    impl Dd {
        pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

        /// Sum of two non-negative values; no cancellation can occur.
        pub fn add(self, b: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, b.hi);
            quick_two_sum(s, e + self.lo + b.lo)
        }

        pub fn mul_f64(self, b: f64) -> Dd {
            let (p, e) = two_prod(self.hi, b);
            quick_two_sum(p, e + self.lo * b)
        }

        pub fn recip(b: f64) -> Dd {
            let q = 1.0 / b;
            let (p, e) = two_prod(q, b);
            quick_two_sum(q, ((1.0 - p) - e) / b)
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }
    }
}

use dd::Dd;

struct Brandes {
    dist: Vec<u32>,
    sigma: Vec<f64>,
    /// `(1 + delta[v]) / sigma[v]`, the share each predecessor of `v` scales
    /// by its own path count.
    coeff: Vec<Dd>,
    order: Vec<u32>,
}

impl Brandes {
    fn new(n: usize) -> Brandes {
        Brandes {
            dist: vec![UNREACHED; n],
            sigma: vec![0.0; n],
            coeff: vec![Dd::ZERO; n],
            order: Vec::with_capacity(n),
        }
    }

    /// Adds the dependencies of `s` on every other node into `acc`.
    fn accumulate(&mut self, g: &LinkGraph, s: usize, acc: &mut [Dd]) {
        for &v in &self.order {
            let v = v as usize;
            self.dist[v] = UNREACHED;
            self.sigma[v] = 0.0;
        }
        self.order.clear();

        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.order.push(s as u32);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head] as usize;
            head += 1;
            let next = self.dist[v] + 1;
            let sigma_v = self.sigma[v];
            for &w in g.out_neighbors(v) {
                let w = w as usize;
                if self.dist[w] == UNREACHED {
                    self.dist[w] = next;
                    self.order.push(w as u32);
                }
                if self.dist[w] == next {
                    self.sigma[w] += sigma_v;
                }
            }
        }

        // With S(v) the sum of coeff over successors of v on shortest paths,
        // delta(v) = sigma(v) * S(v) and coeff(v) = S(v) + 1 / sigma(v).
        for &v in self.order[1..].iter().rev() {
            let v = v as usize;
            let next = self.dist[v] + 1;
            let mut sum = Dd::ZERO;
            for &w in g.out_neighbors(v) {
                let w = w as usize;
                if self.dist[w] == next {
                    sum = sum.add(self.coeff[w]);
                }
            }
            let sigma = self.sigma[v];
            if sigma == 1.0 {
                acc[v] = acc[v].add(sum);
                self.coeff[v] = sum.add(Dd { hi: 1.0, lo: 0.0 });
            } else {
                acc[v] = acc[v].add(sum.mul_f64(sigma));
                self.coeff[v] = sum.add(Dd::recip(sigma));
            }
        }
    }
}

fn accumulate_sources(g: &LinkGraph, sources: &[u32]) -> Vec<f64> {
    let n = g.node_count();
    let mut total = vec![Dd::ZERO; n];
    for batch in sources.chunks(CHUNK * CHUNKS_PER_BATCH) {
        let partials: Vec<Vec<Dd>> = batch
            .par_chunks(CHUNK)
            .map_init(
                || Brandes::new(n),
                |ws, chunk| {
                    let mut acc = vec![Dd::ZERO; n];
                    for &s in chunk {
                        ws.accumulate(g, s as usize, &mut acc);
                    }
                    acc
                },
            )
            .collect();
        for partial in partials {
            for (t, p) in total.iter_mut().zip(partial) {
                *t = t.add(p);
            }
        }
    }
    total.into_iter().map(Dd::to_f64).collect()
}

/// Unnormalized betweenness: for each node, the sum over ordered pairs
/// `(s, t)` of the fraction of shortest `s -> t` paths passing through it.
/// Endpoints are not counted.
///
/// `Sampled` runs the same accumulation from `k` seeded random sources and
/// scales by `n / k`; a `k` of at least `n` falls back to `Exact`.
pub fn betweenness(g: &LinkGraph, strategy: BetweennessStrategy) -> ScoreVector {
    let n = g.node_count();
    let (strategy, sources): (BetweennessStrategy, Vec<u32>) = match strategy {
        BetweennessStrategy::Sampled { k, seed } if k < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<u32> = rand::seq::index::sample(&mut rng, n, k)
                .into_iter()
                .map(|i| i as u32)
                .collect();
            picked.sort_unstable();
            (strategy, picked)
        }
        _ => (BetweennessStrategy::Exact, (0..n as u32).collect()),
    };
    let mut values = accumulate_sources(g, &sources);
    if let BetweennessStrategy::Sampled { k, .. } = strategy {
        if k > 0 {
            let scale = n as f64 / k as f64;
            values.iter_mut().for_each(|v| *v *= scale);
        }
    }
    ScoreVector::new(
        Metric::Betweenness,
        values,
        Params::Betweenness {
            strategy,
            sources: sources.len(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probegen::graph_from_edges;

    #[test]
    fn path_middle_node() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        let b = betweenness(&g, BetweennessStrategy::Exact);
        assert_eq!(b.values, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn three_cycle_is_symmetric() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let b = betweenness(&g, BetweennessStrategy::Exact);
        assert_eq!(b.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn split_paths() {
        // 0 -> {1, 2} -> 3: each middle node carries half of the 0 -> 3 pair.
        let g = graph_from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let b = betweenness(&g, BetweennessStrategy::Exact);
        assert_eq!(b.values, vec![0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn oversized_sample_is_exact() {
        let g = graph_from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = betweenness(&g, BetweennessStrategy::Sampled { k: 10, seed: 1 });
        assert_eq!(b.params, Params::Betweenness { strategy: BetweennessStrategy::Exact, sources: 4 });
        assert_eq!(b.values, vec![0.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn thirds_are_correctly_rounded() {
        // 0 -> {1, 2, 3} -> 4: each middle node carries a third of one pair.
        let g = graph_from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        let b = betweenness(&g, BetweennessStrategy::Exact);
        assert_eq!(b.values, vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]);
    }

    #[test]
    fn double_double_recip_and_sum() {
        let third = Dd::recip(3.0);
        let one = third.add(third).add(third);
        assert_eq!(one.to_f64(), 1.0);
        assert!(one.lo.abs() < 1e-30);
        let tenth = Dd::recip(10.0);
        let mut sum = Dd::ZERO;
        for _ in 0..10 {
            sum = sum.add(tenth);
        }
        assert_eq!(sum.to_f64(), 1.0);
        assert_eq!(Dd::recip(7.0).mul_f64(7.0).to_f64(), 1.0);
    }

    #[test]
    fn sampled_is_seeded() {
        let edges: Vec<(usize, usize)> = (0..30).map(|i| (i, (i * 7 + 1) % 30)).collect();
        let g = graph_from_edges(30, &edges);
        let strategy = BetweennessStrategy::Sampled { k: 10, seed: 42 };
        let a = betweenness(&g, strategy);
        let b = betweenness(&g, strategy);
        assert_eq!(a, b);
        let c = betweenness(&g, BetweennessStrategy::Sampled { k: 10, seed: 43 });
        assert_eq!(c.params, Params::Betweenness { strategy: BetweennessStrategy::Sampled { k: 10, seed: 43 }, sources: 10 });
    }
}
