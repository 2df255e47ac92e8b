//! k-nearest hopsets built from an approximate distance estimate.
//!
//! Every node `v` ranks nodes by the estimate, asks each of its `k` top
//! candidates for their `k` lightest outgoing edges, runs Dijkstra on what
//! it received plus its own edges, and adds a shortcut `(v, u, d'(v, u))`
//! for every node it reached. With `k = floor(sqrt n)` each collector
//! receives at most `k * k <= n` edges.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::estimate::DistanceEstimate;
use crate::graph::{Edge, Graph, NodeId, Weight, INF};
use crate::ledger::{MessageBatch, RoundLedger};
use crate::math;
use crate::oracle::{dijkstra_adj, exact_apsp, hhop_from, knearest_oracle};

/// Quota for the edge-collection step: `k * k <= n` edges per collector.
pub const COLLECT_QUOTA: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hopset {
    /// Directed shortcuts sorted by `(tail, head)`.
    pub edges: Vec<Edge>,
    pub beta_bound: u32,
    /// Candidate-set size used during construction.
    pub k: usize,
}

impl Hopset {
    pub fn empty(beta_bound: u32) -> Self {
        Self {
            edges: Vec::new(),
            beta_bound,
            k: 0,
        }
    }

    /// Weight of the shortcut `v -> u`, i.e. `v`'s local distance `d'(v, u)`.
    pub fn shortcut(&self, v: NodeId, u: NodeId) -> Option<Weight> {
        self.edges
            .binary_search_by_key(&(v, u), |e| (e.u, e.v))
            .ok()
            .map(|i| self.edges[i].w)
    }

    /// `G ∪ H` as a directed graph.
    pub fn union(&self, g: &Graph) -> Graph {
        g.union_with(&self.edges, true)
    }

    /// `G ∪ H` with every shortcut made undirected (parallel edges keep the minimum).
    pub fn union_undirected(&self, g: &Graph) -> Graph {
        g.union_with(&self.edges, false)
    }
}

/// `2 (ceil(a ln d) + 1) + 1`: hop bound for an `a`-approximate input on a
/// graph whose weighted diameter is at most `d`.
pub fn beta_bound(a: f64, d: Weight) -> u32 {
    let ln_d = if d <= 1 { 0.0 } else { libm::log(d as f64) };
    let segments = libm::ceil(a * ln_d - 1e-9).max(0.0) as u32 + 1;
    2 * segments + 1
}

/// For each node, the `min(k, n)` nodes with the smallest estimate, ties by ID.
pub fn approx_knearest_sets(delta: &DistanceEstimate, k: usize) -> Vec<Vec<NodeId>> {
    let n = delta.n();
    let k = k.min(n);
    (0..n)
        .map(|v| {
            let row = delta.row(v);
            let mut order: Vec<(Weight, NodeId)> = row.iter().enumerate().map(|(u, &w)| (w, u)).collect();
            if order.len() > k {
                order.select_nth_unstable(k);
                order.truncate(k);
            }
            order.sort_unstable();
            order.into_iter().map(|(_, u)| u).collect()
        })
        .collect()
}

/// Builds a `floor(sqrt n)`-nearest hopset from a sound estimate whose
/// claimed factor is its approximation ratio.
pub fn build_hopset(g: &Graph, delta: &DistanceEstimate, ledger: &mut RoundLedger) -> Result<Hopset> {
    let k = math::floor_root(g.n(), 2).max(1);
    build_hopset_k(g, delta, k, ledger)
}

/// [`build_hopset`] with an explicit candidate-set size `k` (`k * k <= n`
/// keeps the collection step within its quota).
pub fn build_hopset_k(
    g: &Graph,
    delta: &DistanceEstimate,
    k: usize,
    ledger: &mut RoundLedger,
) -> Result<Hopset> {
    let n = g.n();
    let sets = approx_knearest_sets(delta, k);

    let mut requests: MessageBatch<NodeId> = MessageBatch::new();
    for (v, set) in sets.iter().enumerate() {
        for &u in set.iter().filter(|&&u| u != v) {
            requests.send(v, u, vec![v]);
        }
    }
    let asked = ledger.route_validated("hopset-request", requests, ledger.quota_c())?;

    let mut responses: MessageBatch<(NodeId, Weight)> = MessageBatch::new();
    for (u, inbox) in asked.iter().enumerate() {
        let out = g.neighbors(u);
        let lightest = &out[..out.len().min(k)];
        for m in inbox {
            responses.send(u, m.payload[0], Cow::Borrowed(lightest));
        }
    }
    let collected = ledger.route_validated("hopset-collect", responses, COLLECT_QUOTA)?;

    let mut edges: Vec<Edge> = Vec::new();
    for (v, inbox) in collected.iter().enumerate() {
        let received: BTreeMap<NodeId, &[(NodeId, Weight)]> =
            inbox.iter().map(|m| (m.src, &*m.payload)).collect();
        let own = g.neighbors(v);
        let dist = dijkstra_adj(n, v, |x| {
            if x == v {
                own
            } else {
                received.get(&x).copied().unwrap_or(&[])
            }
        });
        edges.extend(
            dist.iter()
                .enumerate()
                .filter(|&(u, &d)| u != v && d != INF)
                .map(|(u, &d)| Edge::new(v, u, d)),
        );
    }

    let mut reports: MessageBatch<Weight> = MessageBatch::new();
    for e in &edges {
        reports.send(e.u, e.v, vec![e.w]);
    }
    ledger.route_validated("hopset-report", reports, ledger.quota_c())?;

    Ok(Hopset {
        edges,
        beta_bound: beta_bound(delta.claimed_factor(), delta.max_finite()),
        k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopsetViolation {
    /// `d_{G ∪ H}(u, v) != d_G(u, v)`.
    Distance { u: NodeId, v: NodeId, expected: Weight, found: Weight },
    /// `v` is among `u`'s k nearest but no `beta`-hop path has length `d_G(u, v)`.
    Hops { u: NodeId, v: NodeId, expected: Weight, found: Weight },
}

/// Checks the k-nearest `beta`-hopset contract of `h` for `g`.
pub fn verify_hopset(g: &Graph, h: &Hopset, k: usize, beta: u32) -> core::result::Result<(), HopsetViolation> {
    let union = h.union(g);
    let exact = exact_apsp(g);
    let with_h = exact_apsp(&union);
    for u in 0..g.n() {
        for v in 0..g.n() {
            let (expected, found) = (exact.get(u, v), with_h.get(u, v));
            if expected != found {
                return Err(HopsetViolation::Distance { u, v, expected, found });
            }
        }
    }
    let nearest = knearest_oracle(g, k, None);
    for u in 0..g.n() {
        let hop = hhop_from(&union, u, beta);
        for &(v, d) in nearest.list(u) {
            if hop[v] != d {
                return Err(HopsetViolation::Hops { u, v, expected: d, found: hop[v] });
            }
        }
    }
    Ok(())
}

/// `radii[v]`: distance from `v` to the farthest of its `k` nearest nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllRadii {
    pub radii: Vec<Weight>,
}

pub fn ell_radii(g: &Graph, k: usize) -> EllRadii {
    let nearest = knearest_oracle(g, k, None);
    EllRadii {
        radii: (0..g.n())
            .map(|v| nearest.list(v).last().map_or(0, |e| e.1))
            .collect(),
    }
}
