//! Compressed adjacency storage and bidirectional Dijkstra.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

/// Undirected weighted graph in CSR form.
#[derive(Debug, Clone, Default)]
pub(crate) struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

impl Graph {
    /// `edges` must not contain duplicates; each is stored in both directions.
    pub fn from_edges(n: usize, edges: &[(u32, u32, f64)]) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _) in edges {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; 2 * edges.len()];
        let mut weights = vec![0.0; 2 * edges.len()];
        for &(u, v, w) in edges {
            for (a, b) in [(u, v), (v, u)] {
                let slot = fill[a as usize];
                targets[slot] = b;
                weights[slot] = w;
                fill[a as usize] += 1;
            }
        }
        Graph {
            offsets,
            targets,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, u: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        let (a, b) = (self.offsets[u as usize], self.offsets[u as usize + 1]);
        self.targets[a..b]
            .iter()
            .copied()
            .zip(self.weights[a..b].iter().copied())
    }

    pub fn weight(&self, u: u32, v: u32) -> Option<f64> {
        self.neighbors(u).find(|&(t, _)| t == v).map(|(_, w)| w)
    }

    /// Membership mask of the largest connected component; ties go to the
    /// component containing the smallest node index.
    pub fn largest_component(&self) -> Vec<bool> {
        let n = self.node_count();
        let mut label = vec![u32::MAX; n];
        let mut best = (0usize, u32::MAX);
        let mut next = 0u32;
        for s in 0..n {
            if label[s] != u32::MAX {
                continue;
            }
            let mut size = 0usize;
            let mut queue = VecDeque::from([s as u32]);
            label[s] = next;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for (v, _) in self.neighbors(u) {
                    if label[v as usize] == u32::MAX {
                        label[v as usize] = next;
                        queue.push_back(v);
                    }
                }
            }
            if size > best.0 {
                best = (size, next);
            }
            next += 1;
        }
        label.into_iter().map(|l| l == best.1).collect()
    }
}

/// Virtual edge from a query point to a mesh node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Attach {
    pub node: u32,
    pub weight: f64,
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    node: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on node index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const ROOT: u32 = u32::MAX;

struct Side {
    dist: Vec<f64>,
    parent: Vec<u32>,
    heap: BinaryHeap<Entry>,
}

impl Side {
    fn new(n: usize, seeds: &[Attach]) -> Self {
        let mut side = Side {
            dist: vec![f64::INFINITY; n],
            parent: vec![ROOT; n],
            heap: BinaryHeap::new(),
        };
        for a in seeds {
            let i = a.node as usize;
            if a.weight < side.dist[i] {
                side.dist[i] = a.weight;
                side.heap.push(Entry {
                    dist: a.weight,
                    node: a.node,
                });
            }
        }
        side
    }

    fn top(&mut self) -> f64 {
        while let Some(e) = self.heap.peek() {
            if e.dist > self.dist[e.node as usize] {
                self.heap.pop();
            } else {
                return e.dist;
            }
        }
        f64::INFINITY
    }

    fn trace(&self, mut u: u32) -> Vec<u32> {
        let mut out = vec![u];
        while self.parent[u as usize] != ROOT {
            u = self.parent[u as usize];
            out.push(u);
        }
        out
    }
}

/// Outcome of a search between two virtual endpoints.
pub(crate) enum Route {
    /// The direct virtual edge is optimal.
    Direct,
    /// Mesh nodes visited in order from source to target.
    Nodes(Vec<u32>),
}

/// Shortest route from the source attachments to the target attachments,
/// optionally competing with a direct edge of the given weight.
pub(crate) fn shortest_route(
    graph: &Graph,
    source: &[Attach],
    target: &[Attach],
    direct: Option<f64>,
) -> Option<Route> {
    let n = graph.node_count();
    let mut fwd = Side::new(n, source);
    let mut bwd = Side::new(n, target);
    let mut best = direct.unwrap_or(f64::INFINITY);
    let mut meet: Option<u32> = None;
    for a in source {
        let i = a.node as usize;
        let total = fwd.dist[i] + bwd.dist[i];
        if total < best || (total == best && meet.is_some_and(|m| a.node < m)) {
            best = total;
            meet = Some(a.node);
        }
    }
    loop {
        let (tf, tb) = (fwd.top(), bwd.top());
        if tf + tb >= best || (tf.is_infinite() && tb.is_infinite()) {
            break;
        }
        let forward = tf <= tb;
        let (this, other) = if forward {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        let Entry { dist: d, node: u } = this.heap.pop().expect("nonempty heap");
        for (v, w) in graph.neighbors(u) {
            let vi = v as usize;
            let nd = d + w;
            if nd < this.dist[vi] {
                this.dist[vi] = nd;
                this.parent[vi] = u;
                this.heap.push(Entry { dist: nd, node: v });
            }
            let total = this.dist[vi] + other.dist[vi];
            if total < best {
                best = total;
                meet = Some(v);
            }
        }
    }
    if !best.is_finite() {
        return None;
    }
    match meet {
        None => Some(Route::Direct),
        Some(m) => {
            let mut nodes = fwd.trace(m);
            nodes.reverse();
            nodes.extend(bwd.trace(m).into_iter().skip(1));
            Some(Route::Nodes(nodes))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: u32) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        Graph::from_edges(n as usize, &edges)
    }

    #[test]
    fn path_on_a_line() {
        let g = line(10);
        let r = shortest_route(
            &g,
            &[Attach {
                node: 2,
                weight: 0.5,
            }],
            &[Attach {
                node: 7,
                weight: 0.25,
            }],
            None,
        );
        match r {
            Some(Route::Nodes(p)) => assert_eq!(p, vec![2, 3, 4, 5, 6, 7]),
            _ => panic!("expected a node route"),
        }
    }

    #[test]
    fn direct_edge_wins_when_shorter() {
        let g = line(10);
        let r = shortest_route(
            &g,
            &[Attach {
                node: 0,
                weight: 0.5,
            }],
            &[Attach {
                node: 9,
                weight: 0.5,
            }],
            Some(3.0),
        );
        assert!(matches!(r, Some(Route::Direct)));
    }

    #[test]
    fn disconnected_is_none() {
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let r = shortest_route(
            &g,
            &[Attach {
                node: 0,
                weight: 0.0,
            }],
            &[Attach {
                node: 3,
                weight: 0.0,
            }],
            None,
        );
        assert!(r.is_none());
        let mask = g.largest_component();
        assert_eq!(mask, vec![true, true, false, false]);
    }

    #[test]
    fn shared_attachment() {
        let g = line(3);
        let r = shortest_route(
            &g,
            &[Attach {
                node: 1,
                weight: 0.1,
            }],
            &[Attach {
                node: 1,
                weight: 0.2,
            }],
            None,
        );
        match r {
            Some(Route::Nodes(p)) => assert_eq!(p, vec![1]),
            _ => panic!(),
        }
    }
}
