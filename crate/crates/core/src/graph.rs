//! Weighted graphs with integer weights.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type Weight = u64;

/// Distance of an unreachable pair. All distance arithmetic saturates here.
pub const INF: Weight = u64::MAX;

/// Saturating distance addition.
#[inline]
pub fn dist_add(a: Weight, b: Weight) -> Weight {
    a.saturating_add(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Weight,
}

impl Edge {
    pub const fn new(u: NodeId, v: NodeId, w: Weight) -> Self {
        Self { u, v, w }
    }
}

/// A simple weighted graph on nodes `0..n`.
///
/// Undirected graphs expose every edge in both directions through
/// [`Graph::neighbors`]. Neighbor lists are sorted by `(weight, id)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    adj: Vec<Vec<(NodeId, Weight)>>,
}

/// Validating constructor for [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    directed: bool,
    weight_exponent: Option<u32>,
    merge_parallel: bool,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            directed: false,
            weight_exponent: Some(3),
            merge_parallel: false,
            edges: Vec::new(),
        }
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    /// Weight bound `w <= n^exponent`; `None` disables the check.
    pub fn weight_exponent(mut self, exponent: Option<u32>) -> Self {
        self.weight_exponent = exponent;
        self
    }

    /// Collapse parallel edges to their minimum weight instead of rejecting them.
    /// Self-loops are dropped in this mode.
    pub fn merge_parallel(mut self, merge: bool) -> Self {
        self.merge_parallel = merge;
        self
    }

    pub fn edge(mut self, u: NodeId, v: NodeId, w: Weight) -> Self {
        self.edges.push(Edge::new(u, v, w));
        self
    }

    pub fn edges(mut self, edges: impl IntoIterator<Item = Edge>) -> Self {
        self.edges.extend(edges);
        self
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.n;
        let bound = self.weight_exponent.map(|c| weight_bound(n, c));
        let mut slot: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
        let mut edges: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has an endpoint outside 0..{n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                if self.merge_parallel {
                    continue;
                }
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.u)));
            }
            if e.w == INF {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has the infinity weight",
                    e.u, e.v
                )));
            }
            if let Some(b) = bound {
                if e.w > b {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({}, {}) weight {} exceeds bound {b}",
                        e.u, e.v, e.w
                    )));
                }
            }
            let key = if self.directed || e.u < e.v {
                (e.u, e.v)
            } else {
                (e.v, e.u)
            };
            match slot.get(&key) {
                Some(&i) if self.merge_parallel => {
                    if e.w < edges[i].w {
                        edges[i].w = e.w;
                    }
                }
                Some(_) => {
                    return Err(Error::InvalidGraph(format!(
                        "parallel edge between {} and {}",
                        e.u, e.v
                    )))
                }
                None => {
                    slot.insert(key, edges.len());
                    edges.push(e);
                }
            }
        }
        Ok(Graph::assemble(n, self.directed, edges))
    }
}

fn weight_bound(n: usize, exponent: u32) -> Weight {
    let mut acc: u128 = 1;
    for _ in 0..exponent {
        acc = acc.saturating_mul(n.max(1) as u128);
    }
    acc.min((INF - 1) as u128) as Weight
}

impl Graph {
    /// Undirected graph with the default weight bound `n^3`.
    pub fn undirected(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        GraphBuilder::new(n).edges(edges).build()
    }

    /// Graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Self {
        Self::assemble(n, false, Vec::new())
    }

    fn assemble(n: usize, directed: bool, edges: Vec<Edge>) -> Self {
        let mut adj: Vec<Vec<(NodeId, Weight)>> = alloc::vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            if !directed {
                adj[e.v].push((e.u, e.w));
            }
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, w)| (w, v));
        }
        Self {
            n,
            directed,
            edges,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges in insertion order, with their original orientation.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Outgoing neighbors of `u`, sorted by `(weight, id)`.
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, Weight)] {
        &self.adj[u]
    }

    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    pub fn has_zero_weight(&self) -> bool {
        self.edges.iter().any(|e| e.w == 0)
    }

    /// Weight of the edge `u -> v`, if present.
    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        self.adj[u].iter().find(|&&(x, _)| x == v).map(|&(_, w)| w)
    }

    /// The union of this graph with extra edges, parallel edges collapsed to
    /// the minimum. The result is directed if this graph or `directed` is.
    pub fn union_with(&self, extra: &[Edge], directed: bool) -> Graph {
        let directed = directed || self.directed;
        let mut edges = self.edges.clone();
        if directed && !self.directed {
            edges.extend(self.edges.iter().map(|e| Edge::new(e.v, e.u, e.w)));
        }
        edges.extend_from_slice(extra);
        GraphBuilder::new(self.n)
            .directed(directed)
            .weight_exponent(None)
            .merge_parallel(true)
            .edges(edges)
            .build()
            .expect("union of valid edge sets is valid")
    }

    /// This graph with every edge duplicated in both directions and flagged directed.
    pub fn as_directed(&self) -> Graph {
        if self.directed {
            return self.clone();
        }
        self.union_with(&[], true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_edges() {
        assert!(Graph::undirected(3, [Edge::new(0, 3, 1)]).is_err());
        assert!(Graph::undirected(3, [Edge::new(1, 1, 1)]).is_err());
        assert!(Graph::undirected(3, [Edge::new(0, 1, 1), Edge::new(1, 0, 2)]).is_err());
        assert!(Graph::undirected(3, [Edge::new(0, 1, 28)]).is_err());
        assert!(Graph::undirected(3, [Edge::new(0, 1, 27)]).is_ok());
        let g = GraphBuilder::new(3)
            .directed(true)
            .edge(0, 1, 1)
            .edge(1, 0, 2)
            .build()
            .unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn merge_keeps_minimum() {
        let g = GraphBuilder::new(3)
            .merge_parallel(true)
            .edge(0, 1, 5)
            .edge(1, 0, 2)
            .edge(2, 2, 0)
            .build()
            .unwrap();
        assert_eq!(g.edges(), &[Edge::new(0, 1, 2)]);
        assert_eq!(g.weight(1, 0), Some(2));
    }

    #[test]
    fn neighbors_sorted_by_weight_then_id() {
        let g = Graph::undirected(
            4,
            [Edge::new(0, 3, 1), Edge::new(0, 1, 2), Edge::new(2, 0, 1)],
        )
        .unwrap();
        assert_eq!(g.neighbors(0), &[(2, 1), (3, 1), (1, 2)]);
    }
}
