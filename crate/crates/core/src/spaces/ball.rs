//! Component balls at mesh resolution.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::geometry::{dist, GEOM_TOL};
use crate::Point;

/// Nodes of the `z`-component of `B(z, r) ∩ G` on a local mesh of spacing
/// `resolution`, plus the mesh neighbours just outside it.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentBall {
    pub center: Point,
    pub radius: f64,
    pub resolution: f64,
    pub nodes: Vec<Point>,
    pub frontier: Vec<Point>,
}

impl ComponentBall {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_node(&self, p: Point) -> bool {
        self.nodes.iter().any(|q| dist(*q, p) <= GEOM_TOL)
    }

    /// Every node of `self` is a node of `other`.
    pub fn is_subset_of(&self, other: &ComponentBall) -> bool {
        self.nodes.iter().all(|p| other.contains_node(*p))
    }

    /// Smallest distance from the center to a frontier node.
    pub fn frontier_distance(&self) -> f64 {
        self.frontier
            .iter()
            .map(|p| dist(*p, self.center))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest pairwise distance between nodes.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, p) in self.nodes.iter().enumerate() {
            for q in &self.nodes[i + 1..] {
                best = best.max(dist(*p, *q));
            }
        }
        best
    }
}

/// A finite graph discretizing a neighbourhood of the center in `X`.
/// `edges` lists every mesh edge with a flag telling whether the closed
/// edge lies in `G`.
pub(crate) struct LocalMesh {
    pub points: Vec<Point>,
    pub in_region: Vec<bool>,
    pub edges: Vec<(usize, usize, bool)>,
    pub center: usize,
}

impl LocalMesh {
    pub fn flood(&self, radius: f64, resolution: f64) -> ComponentBall {
        let z = self.points[self.center];
        let n = self.points.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v, inside) in &self.edges {
            adj[u].push((v, inside));
            adj[v].push((u, inside));
        }
        let admissible = |i: usize| self.in_region[i] && dist(self.points[i], z) < radius;
        let mut seen = vec![false; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.center]);
        seen[self.center] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, inside) in &adj[u] {
                if !seen[v] && inside && admissible(v) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        let mut frontier = HashSet::new();
        for &u in &order {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    frontier.insert(v);
                }
            }
        }
        let mut frontier: Vec<usize> = frontier.into_iter().collect();
        frontier.sort_unstable();
        order.sort_unstable();
        ComponentBall {
            center: z,
            radius,
            resolution,
            nodes: order.into_iter().map(|i| self.points[i]).collect(),
            frontier: frontier.into_iter().map(|i| self.points[i]).collect(),
        }
    }

    /// All nodes of `X` within `radius` of the center.
    pub fn ambient_ball(&self, radius: f64) -> Vec<Point> {
        let z = self.points[self.center];
        self.points
            .iter()
            .copied()
            .filter(|p| dist(*p, z) < radius)
            .collect()
    }
}
