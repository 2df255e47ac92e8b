//! Spanners (Baswana-Sen clustering) and the APSP approximations built on
//! broadcasting them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimate::DistanceEstimate;
use crate::graph::{Edge, Graph, GraphBuilder, NodeId, Weight};
use crate::ledger::RoundLedger;
use crate::math;
use crate::oracle::exact_apsp;
use crate::rng::{derive_seed, node_rng, tag};

/// Rounds charged for one spanner construction.
pub const SPANNER_ROUNDS: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpannerVariant {
    /// Stretch `2k - 1`.
    Plain,
    /// Stretch `(1 + eps)(2k - 1)`.
    Eps(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannerResult {
    pub edges: Vec<Edge>,
    pub stretch_k: u32,
    pub variant: SpannerVariant,
}

impl SpannerResult {
    /// The declared stretch bound.
    pub fn stretch(&self) -> f64 {
        let base = (2 * self.stretch_k - 1) as f64;
        match self.variant {
            SpannerVariant::Plain => base,
            SpannerVariant::Eps(eps) => (1.0 + eps) * base,
        }
    }

    pub fn as_graph(&self, n: usize) -> Graph {
        GraphBuilder::new(n)
            .weight_exponent(None)
            .edges(self.edges.iter().copied())
            .build()
            .expect("spanner edges form a simple graph")
    }
}

/// Total order on undirected edges used for every tie: weight, then endpoints.
fn edge_key(u: NodeId, v: NodeId, w: Weight) -> (Weight, NodeId, NodeId) {
    (w, u.min(v), u.max(v))
}

/// Baswana-Sen `(2k - 1)`-spanner of an undirected graph.
///
/// Stretch holds for every random outcome; only the size bound
/// `O(k n^(1 + 1/k))` is probabilistic. Charges [`SPANNER_ROUNDS`] rounds.
pub fn spanner(
    g: &Graph,
    k: u32,
    variant: SpannerVariant,
    seed: u64,
    ledger: &mut RoundLedger,
) -> SpannerResult {
    assert!(!g.is_directed(), "spanners are built on undirected graphs");
    assert!(k >= 1, "spanner parameter must be at least 1");
    let n = g.n();
    let p = libm::pow(n.max(1) as f64, -1.0 / k as f64);
    let mut alive: Vec<Vec<(NodeId, Weight)>> = (0..n).map(|u| g.neighbors(u).to_vec()).collect();
    let mut cluster: Vec<Option<NodeId>> = (0..n).map(Some).collect();
    let mut chosen: BTreeMap<(NodeId, NodeId), Weight> = BTreeMap::new();
    let mut add = |u: NodeId, v: NodeId, w: Weight| {
        chosen.insert((u.min(v), u.max(v)), w);
    };

    for round in 1..k {
        let round_seed = derive_seed(seed, round as u64);
        let mut is_center = vec![false; n];
        for c in cluster.iter().flatten() {
            is_center[*c] = true;
        }
        let sampled: Vec<bool> = (0..n)
            .map(|c| is_center[c] && node_rng(round_seed, tag::SPANNER, c).gen_bool(p))
            .collect();
        let mut next: Vec<Option<NodeId>> = cluster
            .iter()
            .map(|&c| c.filter(|&c| sampled[c]))
            .collect();
        let mut dropped: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for v in 0..n {
            let Some(cv) = cluster[v] else { continue };
            if sampled[cv] {
                continue;
            }
            // lightest edge from v into each adjacent cluster
            let mut lightest: BTreeMap<NodeId, (Weight, NodeId, NodeId)> = BTreeMap::new();
            for &(x, w) in &alive[v] {
                if let Some(c) = cluster[x] {
                    let key = edge_key(v, x, w);
                    lightest
                        .entry(c)
                        .and_modify(|k| *k = (*k).min(key))
                        .or_insert(key);
                }
            }
            let join = lightest
                .iter()
                .filter(|(&c, _)| sampled[c])
                .min_by_key(|(_, &key)| key)
                .map(|(&c, &key)| (c, key));
            match join {
                None => {
                    for (&c, &(w, a, b)) in &lightest {
                        add(a, b, w);
                        dropped[v].push(c);
                    }
                }
                Some((c_star, key_star)) => {
                    add(key_star.1, key_star.2, key_star.0);
                    next[v] = Some(c_star);
                    dropped[v].push(c_star);
                    for (&c, &key) in &lightest {
                        if key < key_star {
                            add(key.1, key.2, key.0);
                            dropped[v].push(c);
                        }
                    }
                }
            }
        }
        // remove E(v, c) for dropped clusters, in both directions
        let mut removed: BTreeMap<(NodeId, NodeId), ()> = BTreeMap::new();
        for v in 0..n {
            for &(x, _) in &alive[v] {
                if let Some(c) = cluster[x] {
                    if dropped[v].contains(&c) {
                        removed.insert((v.min(x), v.max(x)), ());
                    }
                }
            }
        }
        for v in 0..n {
            alive[v].retain(|&(x, _)| {
                !removed.contains_key(&(v.min(x), v.max(x)))
                    && !(next[v].is_some() && next[v] == next[x])
                    && next[v].is_some()
                    && next[x].is_some()
            });
        }
        cluster = next;
    }

    for v in 0..n {
        let mut lightest: BTreeMap<NodeId, (Weight, NodeId, NodeId)> = BTreeMap::new();
        for &(x, w) in &alive[v] {
            if let Some(c) = cluster[x] {
                let key = edge_key(v, x, w);
                lightest
                    .entry(c)
                    .and_modify(|k| *k = (*k).min(key))
                    .or_insert(key);
            }
        }
        for (_, (w, a, b)) in lightest {
            add(a, b, w);
        }
    }
    ledger.charge("spanner", SPANNER_ROUNDS);
    SpannerResult {
        edges: chosen.into_iter().map(|((u, v), w)| Edge::new(u, v, w)).collect(),
        stretch_k: k,
        variant,
    }
}

/// Exact APSP by broadcasting every edge.
pub fn brute_force_apsp(g: &Graph, ledger: &mut RoundLedger) -> DistanceEstimate {
    ledger.broadcast("broadcast-graph", g.edge_count() as u64);
    exact_apsp(g)
}

/// Approximate APSP on `gs` by building a `b`-spanner and broadcasting it.
///
/// `gs` may have fewer nodes than the clique; its nodes are simulated by
/// distinct clique nodes. The spanner may have at most
/// `c_sp * b * n` edges, `n` the clique size.
pub fn spanner_apsp(
    gs: &Graph,
    b: u32,
    variant: SpannerVariant,
    c_sp: f64,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    let sp = spanner(gs, b, variant, seed, ledger);
    let budget = libm::floor(c_sp * b as f64 * ledger.n() as f64) as u64;
    let edges = sp.edges.len() as u64;
    if edges > budget {
        return Err(Error::SizeViolation { edges, budget });
    }
    ledger.broadcast("broadcast-spanner", edges);
    Ok(exact_apsp(&sp.as_graph(gs.n())).with_claimed_factor(sp.stretch()))
}

/// `(alpha log n)`-approximate APSP: a spanner with `b = floor(alpha log2 n / 3)`
/// and `eps = 0.1`, broadcast to everyone. Falls back to broadcasting the
/// whole graph when `b < 1` or the spanner exceeds its budget.
pub fn logn_apsp(
    g: &Graph,
    alpha: f64,
    c_sp: f64,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    let b = libm::floor(alpha * math::log2(g.n()) / 3.0) as u32;
    if b < 1 {
        return Ok(brute_force_apsp(g, ledger));
    }
    match spanner_apsp(g, b, SpannerVariant::Eps(0.1), c_sp, seed, ledger) {
        Ok(d) => Ok(d),
        Err(Error::SizeViolation { .. }) => Ok(brute_force_apsp(g, ledger)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_graph;
    use crate::oracle::exact_apsp;

    fn stretch_ok(g: &Graph, sp: &SpannerResult) -> bool {
        let d = exact_apsp(g);
        let ds = exact_apsp(&sp.as_graph(g.n()));
        ds.audit(&d).within((2 * sp.stretch_k - 1) as f64)
    }

    #[test]
    fn k1_keeps_everything() {
        let g = gen_graph(&"er:20:0.3:w=1-9".parse().unwrap(), 1).unwrap();
        let mut l = RoundLedger::standard(20);
        let sp = spanner(&g, 1, SpannerVariant::Plain, 1, &mut l);
        assert_eq!(sp.edges.len(), g.edge_count());
        assert_eq!(l.total_rounds(), 2);
    }

    #[test]
    fn tree_is_kept_whole() {
        let g = gen_graph(&"star:12:w=1-20".parse().unwrap(), 5).unwrap();
        for k in 1..4 {
            let sp = spanner(&g, k, SpannerVariant::Plain, 3, &mut RoundLedger::standard(12));
            assert_eq!(sp.edges.len(), 11);
        }
    }

    #[test]
    fn stretch_holds_on_random_graphs() {
        for seed in 0..10 {
            let g = gen_graph(&"er:48:0.3:w=1-30".parse().unwrap(), seed).unwrap();
            for k in 2..5 {
                let sp = spanner(&g, k, SpannerVariant::Plain, seed, &mut RoundLedger::standard(48));
                assert!(stretch_ok(&g, &sp), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn logn_small_graph_is_exact() {
        let g = gen_graph(&"path:4".parse().unwrap(), 0).unwrap();
        let d = logn_apsp(&g, 1.0, 8.0, 0, &mut RoundLedger::standard(4)).unwrap();
        assert_eq!(d, exact_apsp(&g));
    }
}
