use crate::graph::LinkGraph;

pub(crate) const UNREACHED: u32 = u32::MAX;

/// Which adjacency a traversal follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Orientation {
    Forward,
    Reverse,
    Both,
}

/// Reusable single-source BFS buffers.
pub(crate) struct Bfs {
    pub dist: Vec<u32>,
    /// Visit order of the last run; distances along it are non-decreasing.
    pub order: Vec<u32>,
}

impl Bfs {
    pub fn new(n: usize) -> Bfs {
        Bfs {
            dist: vec![UNREACHED; n],
            order: Vec::with_capacity(n),
        }
    }

    pub fn run(&mut self, g: &LinkGraph, source: usize, orientation: Orientation) {
        for &v in &self.order {
            self.dist[v as usize] = UNREACHED;
        }
        self.order.clear();
        self.dist[source] = 0;
        self.order.push(source as u32);
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head] as usize;
            head += 1;
            let next = self.dist[u] + 1;
            let mut visit = |w: u32| {
                let slot = &mut self.dist[w as usize];
                if *slot == UNREACHED {
                    *slot = next;
                    self.order.push(w);
                }
            };
            match orientation {
                Orientation::Forward => g.out_neighbors(u).iter().copied().for_each(&mut visit),
                Orientation::Reverse => g.in_neighbors(u).iter().copied().for_each(&mut visit),
                Orientation::Both => {
                    g.out_neighbors(u).iter().copied().for_each(&mut visit);
                    g.in_neighbors(u).iter().copied().for_each(&mut visit);
                }
            }
        }
    }
}
