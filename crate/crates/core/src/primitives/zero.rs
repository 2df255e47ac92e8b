//! Collapsing zero-weight components so the rest of the pipeline sees
//! positive weights only.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::estimate::DistanceEstimate;
use crate::graph::{Edge, Graph, GraphBuilder, NodeId, Weight};
use crate::ledger::{MessageBatch, RoundLedger};

/// Zero-weight components of a graph and the quotient over their leaders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCompression {
    /// Graph over leader indices `0..leaders.len()`.
    pub quotient: Graph,
    /// Leaders in increasing ID order; quotient node `i` is `leaders[i]`.
    pub leaders: Vec<NodeId>,
    /// Leader (original ID) of every node.
    pub leader_of: Vec<NodeId>,
    /// Quotient index of every node's leader.
    pub quotient_index: Vec<usize>,
    /// Members of each component, indexed like `leaders`.
    pub components: Vec<Vec<NodeId>>,
}

impl ZeroCompression {
    pub fn is_identity(&self) -> bool {
        self.leaders.len() == self.leader_of.len()
    }
}

fn find(parent: &mut [NodeId], mut x: NodeId) -> NodeId {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups nodes joined by zero-weight paths; each group's leader is its
/// smallest ID. Quotient edges carry the minimum weight between groups.
///
/// Charges one round for the component computation and one routing round
/// in which every node reports its lightest edge into each other component
/// to that component's leader.
pub fn compress_zero(g: &Graph, ledger: &mut RoundLedger) -> Result<ZeroCompression> {
    let n = g.n();
    let mut parent: Vec<NodeId> = (0..n).collect();
    for e in g.edges().iter().filter(|e| e.w == 0) {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            // the smaller root survives, so roots are component minima
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let leader_of: Vec<NodeId> = (0..n).map(|v| find(&mut parent, v)).collect();
    ledger.charge("zero-components", 1);

    let leaders: Vec<NodeId> = (0..n).filter(|&v| leader_of[v] == v).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &s) in leaders.iter().enumerate() {
        index[s] = i;
    }
    let quotient_index: Vec<usize> = leader_of.iter().map(|&s| index[s]).collect();
    let mut components = vec![Vec::new(); leaders.len()];
    for v in 0..n {
        components[quotient_index[v]].push(v);
    }

    // Each node v tells leader t the lightest edge from v into C(t), tagged
    // with v's own leader.
    let mut batch: MessageBatch<(NodeId, Weight)> = MessageBatch::new();
    for v in 0..n {
        let mut lightest: BTreeMap<NodeId, Weight> = BTreeMap::new();
        for &(x, w) in g.neighbors(v) {
            let t = leader_of[x];
            if t != leader_of[v] {
                let slot = lightest.entry(t).or_insert(w);
                *slot = (*slot).min(w);
            }
        }
        for (t, w) in lightest {
            batch.send(v, t, vec![(leader_of[v], w)]);
        }
    }
    let inboxes = ledger.route_validated("zero-quotient-edges", batch, ledger.quota_c())?;
    let mut quotient_edges: Vec<Edge> = Vec::new();
    for (t, inbox) in inboxes.iter().enumerate() {
        for m in inbox {
            for &(s, w) in m.payload.iter() {
                let (a, b) = (index[s], index[t]);
                let (a, b) = if g.is_directed() { (a, b) } else { (a.min(b), a.max(b)) };
                quotient_edges.push(Edge::new(a, b, w));
            }
        }
    }
    quotient_edges.sort_by_key(|e| (e.u, e.v, e.w));
    let quotient = GraphBuilder::new(leaders.len())
        .weight_exponent(None)
        .merge_parallel(true)
        .edges(quotient_edges)
        .build()?;
    Ok(ZeroCompression {
        quotient,
        leaders,
        leader_of,
        quotient_index,
        components,
    })
}

/// Extends an estimate on the quotient to all nodes:
/// `eta(v, u) = delta(leader(v), leader(u))`.
///
/// One routing round: each leader `t` sends `delta(s, t)` to every
/// non-leader member of every component `C(s)`.
pub fn lift_compressed(
    delta_q: &DistanceEstimate,
    zc: &ZeroCompression,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    let n = zc.leader_of.len();
    let mut batch: MessageBatch<Weight> = MessageBatch::new();
    for (si, members) in zc.components.iter().enumerate() {
        for &v in members.iter().filter(|&&v| v != zc.leaders[si]) {
            for (ti, &t) in zc.leaders.iter().enumerate() {
                batch.send(t, v, vec![delta_q.get(si, ti)]);
            }
        }
    }
    ledger.route_validated("zero-lift", batch, ledger.quota_c())?;
    let mut values = Vec::with_capacity(n * n);
    for v in 0..n {
        let row = delta_q.row(zc.quotient_index[v]);
        values.extend((0..n).map(|u| row[zc.quotient_index[u]]));
    }
    Ok(DistanceEstimate::from_values(
        n,
        values,
        delta_q.claimed_factor(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_apsp;

    #[test]
    fn all_zero_triangle() {
        let g = Graph::undirected(3, [Edge::new(0, 1, 0), Edge::new(1, 2, 0), Edge::new(0, 2, 0)]).unwrap();
        let mut l = RoundLedger::standard(3);
        let zc = compress_zero(&g, &mut l).unwrap();
        assert_eq!(zc.leaders, vec![0]);
        assert_eq!(zc.quotient.edge_count(), 0);
        let eta = lift_compressed(&exact_apsp(&zc.quotient), &zc, &mut l).unwrap();
        assert!(eta.values().iter().all(|&w| w == 0));
    }

    #[test]
    fn positive_weights_give_identity() {
        let g = Graph::undirected(3, [Edge::new(0, 1, 2), Edge::new(1, 2, 3)]).unwrap();
        let mut l = RoundLedger::standard(3);
        let zc = compress_zero(&g, &mut l).unwrap();
        assert!(zc.is_identity());
        assert_eq!(zc.quotient.edges(), g.edges());
        let d = exact_apsp(&g);
        assert_eq!(lift_compressed(&d, &zc, &mut l).unwrap(), d);
    }

    #[test]
    fn mixed_path() {
        // 1-(0)-2-(5)-3-(0)-4 in 1-based labels
        let g = Graph::undirected(4, [Edge::new(0, 1, 0), Edge::new(1, 2, 5), Edge::new(2, 3, 0)]).unwrap();
        let mut l = RoundLedger::standard(4);
        let zc = compress_zero(&g, &mut l).unwrap();
        assert_eq!(zc.leaders, vec![0, 2]);
        assert_eq!(zc.quotient.edges(), &[Edge::new(0, 1, 5)]);
        let eta = lift_compressed(&exact_apsp(&zc.quotient), &zc, &mut l).unwrap();
        assert_eq!(eta, exact_apsp(&g));
        assert_eq!(l.total_rounds(), 3);
    }
}
