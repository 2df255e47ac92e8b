//! Weight scaling: turning short-hop distances at every scale into
//! distances in small-diameter graphs.
//!
//! For `x = 2^i`, graph `G_i` has weight `min(ceil(w / x), B h^2)` on every
//! edge of `G` and weight `B h^2` between every other pair, where
//! `B = ceil(2 / eps)`. A pair whose estimate lies in
//! `[2^(i-1) B h^2, 2^i B h^2)` is answered by `2^i` times its distance
//! in `G_i`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::DistanceEstimate;
use crate::graph::{Edge, Graph, GraphBuilder, Weight, INF};

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledGraphFamily {
    /// `graphs[i]` is `G_i`.
    pub graphs: Vec<Graph>,
    /// `B = ceil(2 / eps)`.
    pub b_eps: u64,
    pub h: u64,
    pub eps: f64,
}

impl ScaledGraphFamily {
    /// `B h^2`, the weight cap and diameter bound of every `G_i`.
    pub fn cap(&self) -> Weight {
        self.b_eps * self.h * self.h
    }

    /// Largest index in the family.
    pub fn max_index(&self) -> u32 {
        self.graphs.len() as u32 - 1
    }

    /// The scale index for an estimate `d`: 0 when `2 d < B h^2`, otherwise
    /// the `i` with `2^(i-1) B h^2 <= d < 2^i B h^2`. Both rules give 0 on
    /// `[0, B h^2)`.
    pub fn index_for(&self, d: Weight) -> u32 {
        scale_index(d, self.cap())
    }
}

fn scale_index(d: Weight, cap: Weight) -> u32 {
    let d = d as u128;
    let cap = cap as u128;
    let mut i = 0;
    while d >= cap << i {
        i += 1;
    }
    i
}

/// `B = ceil(2 / eps)`.
pub fn b_eps(eps: f64) -> u64 {
    libm::ceil(2.0 / eps - 1e-12) as u64
}

/// `G_i` for scale `x = 2^i` and cap `cap`.
pub fn scaled_graph(g: &Graph, i: u32, cap: Weight) -> Graph {
    let n = g.n();
    let x: u128 = 1u128 << i;
    let mut weight = alloc::vec![cap; n * n];
    for e in g.edges() {
        let w = ((e.w as u128).div_ceil(x)).min(cap as u128) as Weight;
        let (a, b) = (e.u.min(e.v), e.u.max(e.v));
        let slot = &mut weight[a * n + b];
        *slot = (*slot).min(w);
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    GraphBuilder::new(n)
        .weight_exponent(None)
        .edges(edges.map(|(u, v)| Edge::new(u, v, weight[u * n + v])).collect::<Vec<_>>())
        .build()
        .expect("complete graph over valid nodes")
}

/// Builds `G_0, ..., G_m` where `m` is the scale index of `delta_max`, the
/// largest finite estimate. Zero rounds: every node knows its own edges and
/// `delta_max`.
pub fn scale_weights(g: &Graph, h: u64, eps: f64, delta_max: Weight) -> ScaledGraphFamily {
    assert!(!g.is_directed(), "weight scaling works on undirected graphs");
    assert!(g.edges().iter().all(|e| e.w > 0), "weights must be positive");
    let b = b_eps(eps);
    let h = h.max(1);
    let cap = b * h * h;
    let m = scale_index(delta_max, cap);
    ScaledGraphFamily {
        graphs: (0..=m).map(|i| scaled_graph(g, i, cap)).collect(),
        b_eps: b,
        h,
        eps,
    }
}

/// `η(u, v) = 2^i δ_{G_i}(u, v)` with `i` selected by `delta(u, v)`.
///
/// The claimed factor is `(1 + eps) l` for `l` the largest inner factor;
/// it holds for pairs joined by a shortest path of at most `h` hops.
pub fn combine_scaled(
    family: &ScaledGraphFamily,
    inner: &[DistanceEstimate],
    delta: &DistanceEstimate,
) -> Result<DistanceEstimate> {
    assert_eq!(inner.len(), family.graphs.len(), "one inner estimate per scale");
    let n = delta.n();
    let mut values = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let d = delta.get(u, v);
            let eta = if u == v {
                0
            } else if d == INF {
                INF
            } else {
                let i = family.index_for(d);
                if i > family.max_index() {
                    return Err(Error::IndexOutOfFamily {
                        index: i,
                        max: family.max_index(),
                    });
                }
                let w = inner[i as usize].get(u, v);
                if w == INF {
                    INF
                } else {
                    w.saturating_mul(1 << i)
                }
            };
            values.push(eta);
        }
    }
    let l = inner.iter().map(|e| e.claimed_factor()).fold(1.0, f64::max);
    Ok(DistanceEstimate::from_values(n, values, (1.0 + family.eps) * l))
}
