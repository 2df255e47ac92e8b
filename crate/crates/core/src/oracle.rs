//! Exact shortest-path oracles. These are the ground truth for every audit.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::estimate::{DistanceEstimate, KNearestResult};
use crate::graph::{dist_add, Graph, NodeId, Weight, INF};
use crate::matrix::TropicalMatrix;

/// Single-source shortest paths over outgoing edges.
pub fn dijkstra(g: &Graph, source: NodeId) -> Vec<Weight> {
    dijkstra_adj(g.n(), source, |u| g.neighbors(u))
}

/// Dijkstra over an arbitrary adjacency function.
pub(crate) fn dijkstra_adj<'a, F>(n: usize, source: NodeId, adj: F) -> Vec<Weight>
where
    F: Fn(NodeId) -> &'a [(NodeId, Weight)],
{
    let mut dist = vec![INF; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in adj(u) {
            let nd = dist_add(d, w);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Exact all-pairs distances (one Dijkstra per source).
pub fn exact_apsp(g: &Graph) -> DistanceEstimate {
    let n = g.n();
    let mut values = Vec::with_capacity(n * n);
    for s in 0..n {
        values.extend(dijkstra(g, s));
    }
    DistanceEstimate::from_values(n, values, 1.0)
}

/// Distances over paths with at most `h` hops, by layered Bellman-Ford.
pub fn hhop_distances(g: &Graph, h: u32) -> TropicalMatrix {
    let n = g.n();
    let rows = (0..n)
        .map(|s| {
            let d = hhop_from(g, s, h);
            d.into_iter()
                .enumerate()
                .filter(|&(_, w)| w != INF)
                .collect()
        })
        .collect();
    TropicalMatrix::from_rows(n, rows)
}

/// `h`-hop distances from one source.
pub fn hhop_from(g: &Graph, source: NodeId, h: u32) -> Vec<Weight> {
    let mut dist = vec![INF; g.n()];
    dist[source] = 0;
    for _ in 0..h {
        let prev = dist.clone();
        let mut changed = false;
        for (u, &du) in prev.iter().enumerate() {
            if du == INF {
                continue;
            }
            for &(v, w) in g.neighbors(u) {
                let nd = dist_add(du, w);
                if nd < dist[v] {
                    dist[v] = nd;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Exact `N_k(v)` (or `N_k^h(v)` when `hops` is set) for every node, ties by ID.
/// Only reachable nodes are listed, so a list is shorter than `k` when fewer
/// than `k` nodes are reachable.
pub fn knearest_oracle(g: &Graph, k: usize, hops: Option<u32>) -> KNearestResult {
    let lists = (0..g.n())
        .map(|u| {
            let d = match hops {
                Some(h) => hhop_from(g, u, h),
                None => dijkstra(g, u),
            };
            top_k(&d, k)
        })
        .collect();
    KNearestResult::new(lists)
}

/// The `k` smallest finite entries of a distance row, sorted by `(dist, id)`.
pub fn top_k(row: &[Weight], k: usize) -> Vec<(NodeId, Weight)> {
    let mut entries: Vec<(Weight, NodeId)> = row
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w != INF)
        .map(|(v, &w)| (w, v))
        .collect();
    if entries.len() > k {
        entries.select_nth_unstable(k);
        entries.truncate(k);
    }
    entries.sort_unstable();
    entries.into_iter().map(|(w, v)| (v, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn path(n: usize) -> Graph {
        Graph::undirected(n, (0..n - 1).map(|i| Edge::new(i, i + 1, 1))).unwrap()
    }

    #[test]
    fn path_distances() {
        let d = exact_apsp(&path(3));
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(exact_apsp(&Graph::empty(1)).get(0, 0), 0);
        let h1 = hhop_distances(&path(3), 1);
        assert_eq!(h1.get(0, 2), INF);
        assert_eq!(hhop_distances(&path(3), 2).get(0, 2), 2);
    }

    #[test]
    fn knearest_tie_break() {
        let r = knearest_oracle(&path(4), 2, None);
        assert_eq!(r.list(0), &[(0, 0), (1, 1)]);
        let star = Graph::undirected(5, (1..5).map(|i| Edge::new(0, i, 1))).unwrap();
        let r = knearest_oracle(&star, 3, None);
        assert_eq!(r.list(3), &[(3, 0), (0, 1), (1, 2)]);
    }

    #[test]
    fn disconnected_is_infinite() {
        let g = Graph::undirected(3, [Edge::new(0, 1, 4)]).unwrap();
        assert_eq!(exact_apsp(&g).get(0, 2), INF);
        assert_eq!(knearest_oracle(&g, 3, None).list(2), &[(2, 0)]);
    }
}
