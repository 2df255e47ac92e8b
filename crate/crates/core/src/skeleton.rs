//! Skeleton graphs: reduce APSP on `G` to APSP on a graph over a hitting
//! set `S` of the candidate sets `Ñ_k(u)`.
//!
//! Every node `u` gets a center `c(u)` in `S ∩ Ñ_k(u)`. For each witness
//! triple `(u, t, v)` with `t ∈ Ñ_k(u)` and `{t, v} ∈ E` (or `t = v`) the
//! skeleton has an edge `{c(u), c(v)}` of weight
//! `δ(c(u), u) + δ(u, t) + w_tv + δ(v, c(v))`; parallel edges keep the
//! minimum. Skeleton edges are computed as the product `X ⋆ Y` of
//! `X[s][t] = min over u with c(u) = s of δ(c(u), u) + δ(u, t)` and
//! `Y[t][s] = min over v with c(v) = s of w_tv + δ(v, c(v))`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::{DistanceEstimate, LocalEstimate};
use crate::graph::{dist_add, Edge, Graph, GraphBuilder, NodeId, Weight, INF};
use crate::ledger::{MessageBatch, RoundLedger};
use crate::matrix::TropicalMatrix;
use crate::primitives::hitting_set;
use crate::primitives::sparse::{matmul_rounds, sparse_minplus_mul_named};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonGraph {
    /// The hitting set `S`, increasing; skeleton node `i` is `nodes[i]`.
    pub nodes: Vec<NodeId>,
    /// Skeleton index of each node of `G`, if it is in `S`.
    pub index: Vec<Option<usize>>,
    /// `c(u)` for every node of `G` (an ID of `G`).
    pub center: Vec<NodeId>,
    /// The skeleton graph over indices `0..nodes.len()`.
    pub graph: Graph,
}

impl SkeletonGraph {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Skeleton edges labelled with IDs of `G`.
    pub fn edges_in_g(&self) -> Vec<Edge> {
        self.graph
            .edges()
            .iter()
            .map(|e| Edge::new(self.nodes[e.u], self.nodes[e.v], e.w))
            .collect()
    }
}

/// Builds the skeleton graph of `g` for the candidate sets of `delta`.
///
/// `forced` replaces the random hitting set (it must hit every candidate set).
pub fn build_skeleton(
    g: &Graph,
    delta: &LocalEstimate,
    k: usize,
    seed: u64,
    ledger: &mut RoundLedger,
    forced: Option<&[NodeId]>,
) -> Result<SkeletonGraph> {
    let n = g.n();
    assert_eq!(delta.n(), n, "estimate and graph disagree on n");
    let sets = delta.sets();
    let nodes: Vec<NodeId> = match forced {
        Some(s) => {
            let mut s = s.to_vec();
            s.sort_unstable();
            s.dedup();
            s
        }
        None => hitting_set(&sets, k, seed, ledger),
    };
    let mut index = vec![None; n];
    for (i, &s) in nodes.iter().enumerate() {
        index[s] = Some(i);
    }

    let mut center = Vec::with_capacity(n);
    for u in 0..n {
        match delta.ranked(u).iter().find(|e| index[e.0].is_some()) {
            Some(&(s, _)) => center.push(s),
            None => {
                return Err(Error::PreconditionViolated(format!(
                    "node {u} has no skeleton node among its candidates"
                )))
            }
        }
    }
    let to_center = |u: NodeId| delta.get(u, center[u]).expect("center is a candidate");

    // x: u tells every t in Ñ_k(u) about the path c(u) -> u -> t ...
    let mut x_batch: MessageBatch<(NodeId, Weight)> = MessageBatch::new();
    for u in 0..n {
        let base = to_center(u);
        for &(t, d) in delta.ranked(u) {
            x_batch.send(u, t, vec![(center[u], dist_add(base, d))]);
        }
    }
    let x_in = ledger.route_validated("skeleton-x-aggregate", x_batch, ledger.quota_c())?;
    let x_at_t = minima(&x_in);
    // ... and t returns the minimum per center to that center.
    let mut x_back: MessageBatch<Weight> = MessageBatch::new();
    for (t, per_center) in x_at_t.iter().enumerate() {
        for (&s, &w) in per_center {
            x_back.send(t, s, vec![w]);
        }
    }
    let x_rows = ledger.route_validated("skeleton-x-return", x_back, ledger.quota_c())?;
    let x = TropicalMatrix::from_rows(
        n,
        x_rows
            .iter()
            .map(|inbox| inbox.iter().map(|m| (m.src, m.payload[0])).collect())
            .collect(),
    );

    // y: v tells each neighbor t about the path t -> v -> c(v).
    let mut y_batch: MessageBatch<(NodeId, Weight)> = MessageBatch::new();
    for v in 0..n {
        let base = to_center(v);
        for &(t, w) in g.neighbors(v) {
            y_batch.send(v, t, vec![(center[v], dist_add(w, base))]);
        }
    }
    let y_in = ledger.route_validated("skeleton-y-aggregate", y_batch, ledger.quota_c())?;
    let mut y_at_t = minima(&y_in);
    for (t, per_center) in y_at_t.iter_mut().enumerate() {
        let own = to_center(t);
        let slot = per_center.entry(center[t]).or_insert(own);
        *slot = (*slot).min(own);
    }
    let mut y_out: MessageBatch<Weight> = MessageBatch::new();
    for (t, per_center) in y_at_t.iter().enumerate() {
        for (&s, &w) in per_center {
            y_out.send(t, s, vec![w]);
        }
    }
    ledger.route_validated("skeleton-y-return", y_out, ledger.quota_c())?;
    let y = TropicalMatrix::from_rows(
        n,
        y_at_t
            .iter()
            .map(|m| m.iter().map(|(&s, &w)| (s, w)).collect())
            .collect(),
    );

    let s = nodes.len() as u64;
    check_density("skeleton-x", x.nnz(), n as u64 * k as u64)?;
    check_density("skeleton-y", y.nnz(), n as u64 * s)?;
    let xy = sparse_minplus_mul_named("skeleton-edges", &x, &y, s * s, ledger)?;

    let mut edges: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
    for (a, row) in xy.rows().iter().enumerate() {
        for &(b, w) in row {
            if a == b {
                continue;
            }
            let (ia, ib) = (index[a].expect("row of a center"), index[b].expect("column of a center"));
            let key = (ia.min(ib), ia.max(ib));
            let slot = edges.entry(key).or_insert(w);
            *slot = (*slot).min(w);
        }
    }
    let graph = GraphBuilder::new(nodes.len())
        .weight_exponent(None)
        .edges(edges.into_iter().map(|((a, b), w)| Edge::new(a, b, w)))
        .build()?;
    Ok(SkeletonGraph {
        nodes,
        index,
        center,
        graph,
    })
}

fn check_density(primitive: &str, actual: u64, bound: u64) -> Result<()> {
    if actual > bound {
        return Err(Error::DensityViolation {
            primitive: primitive.to_string(),
            actual,
            bound,
        });
    }
    Ok(())
}

fn minima(inboxes: &[Vec<crate::ledger::Message<'_, (NodeId, Weight)>>]) -> Vec<BTreeMap<NodeId, Weight>> {
    inboxes
        .iter()
        .map(|inbox| {
            let mut m: BTreeMap<NodeId, Weight> = BTreeMap::new();
            for msg in inbox {
                for &(s, w) in msg.payload.iter() {
                    let slot = m.entry(s).or_insert(w);
                    *slot = (*slot).min(w);
                }
            }
            m
        })
        .collect()
}

/// Lifts an estimate on the skeleton to all pairs of `G`:
/// `η(u, v) = δ(u, v)` when one node holds the other as a candidate, else
/// `δ(u, c(u)) + δ_S(c(u), c(v)) + δ(c(v), v)`.
///
/// The claimed factor is `7 l a^2` for an `l`-approximate `delta_gs` and an
/// `a`-approximate `delta`. Charged as the products `B = D A` and `Aᵀ B`
/// with `A[c(u)][u] = δ(c(u), u)`.
pub fn lift_skeleton_apsp(
    delta_gs: &DistanceEstimate,
    sk: &SkeletonGraph,
    delta: &LocalEstimate,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    let n = sk.center.len();
    let s = sk.size() as u64;
    let d = TropicalMatrix::from_rows(
        n,
        (0..n)
            .map(|a| match sk.index[a] {
                Some(ia) => (0..sk.size())
                    .map(|ib| (sk.nodes[ib], delta_gs.get(ia, ib)))
                    .collect(),
                None => Vec::new(),
            })
            .collect(),
    );
    let mut a_rows = vec![Vec::new(); n];
    let to_center: Vec<Weight> = (0..n)
        .map(|u| delta.get(u, sk.center[u]).expect("center is a candidate"))
        .collect();
    for u in 0..n {
        a_rows[sk.center[u]].push((u, to_center[u]));
    }
    let a = TropicalMatrix::from_rows(n, a_rows);
    let b = sparse_minplus_mul_named("skeleton-lift-da", &d, &a, s * n as u64, ledger)?;
    ledger.charge(
        "skeleton-lift-atb",
        matmul_rounds(a.nnz(), b.nnz(), (n * n) as u64, n),
    );

    let mut values = vec![INF; n * n];
    let mut b_dense = vec![INF; n];
    for u in 0..n {
        b_dense.fill(INF);
        for &(v, w) in b.row(sk.center[u]) {
            b_dense[v] = w;
        }
        for v in 0..n {
            values[u * n + v] = match delta.get_either(u, v) {
                Some(w) => w,
                None => dist_add(to_center[u], b_dense[v]),
            };
        }
    }
    let a_factor = delta.claimed_factor();
    Ok(DistanceEstimate::from_values(
        n,
        values,
        7.0 * delta_gs.claimed_factor() * a_factor * a_factor,
    ))
}
