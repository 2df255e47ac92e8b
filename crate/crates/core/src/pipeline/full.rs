//! The standard-bandwidth algorithm: a `2401 (1 + eps)`-approximation in
//! `O(log log log n)` rounds, and its truncated variant.

use crate::error::Result;
use crate::estimate::{DistanceEstimate, LocalEstimate};
use crate::graph::Graph;
use crate::knearest::knearest_iter;
use crate::ledger::RoundLedger;
use crate::math;
use crate::matrix::TropicalMatrix;
use crate::primitives::{brute_force_apsp, compress_zero, lift_compressed};
use crate::rng::derive_seed;
use crate::skeleton::{build_skeleton, lift_skeleton_apsp};

use super::large_bw::large_bw_capped;
use super::PipelineConfig;

/// Parameters of the outer skeleton for `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullParams {
    pub h: usize,
    pub k: usize,
    pub iterations: u32,
}

impl FullParams {
    /// `h = max(2, floor(log2 n / (4 log2 log2 n)))`, so `n^(1/h) >= (log n)^4`
    /// once `n` is large; `k = min((ceil log2 n)^4, floor(c_k n^(1/h)))`; `h^i >= k - 1`.
    pub fn new(n: usize, cfg: &PipelineConfig) -> Self {
        let log_n = math::log2(n);
        let h = (libm::floor(log_n / (4.0 * libm::log2(log_n.max(2.0)))) as usize).max(2);
        let l = math::ceil_log2(n) as usize;
        let k = (l * l * l * l).min(cfg.width_limit(n, h)).min(n).max(1);
        let iterations = math::hop_iterations(h, k.saturating_sub(1).max(1));
        Self { h, k, iterations }
    }
}

/// `2401 (1 + eps)`-approximate APSP for nonnegative weights, `eps = cfg.eps`.
pub fn full_apsp(g: &Graph, cfg: &PipelineConfig, seed: u64, ledger: &mut RoundLedger) -> Result<DistanceEstimate> {
    full_capped(g, cfg, seed, ledger, None)
}

/// Like [`full_apsp`], limiting reduction steps inside the small-diameter
/// runs to `t + 1`. For `t` at or above the saturation point the run is
/// identical to [`full_apsp`].
pub fn truncated_apsp(
    g: &Graph,
    t: u32,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    let cap = (t < cfg.saturation(g.n())).then_some(t);
    full_capped(g, cfg, seed, ledger, cap)
}

fn full_capped(
    g: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
    cap: Option<u32>,
) -> Result<DistanceEstimate> {
    ledger.begin_stage("zero-compression");
    let zc = compress_zero(g, ledger)?;
    // the leaders run the positive-weight algorithm among themselves
    let mut sub = RoundLedger::new(zc.quotient.n(), ledger.bandwidth()).with_quota(ledger.quota_c());
    let inner = positive_apsp(&zc.quotient, cfg, seed, &mut sub, cap)?;
    ledger.embed(&sub);
    ledger.begin_stage("zero-compression");
    lift_compressed(&inner, &zc, ledger)
}

/// The algorithm for positive weights: exact `k`-nearest nodes by filtered
/// exponentiation, a skeleton over them, and the large-bandwidth algorithm
/// on the skeleton simulated on the full clique.
pub fn positive_apsp(
    g: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
    cap: Option<u32>,
) -> Result<DistanceEstimate> {
    let n = g.n();
    if n < cfg.brute_force_below {
        ledger.begin_stage("brute-force");
        return Ok(brute_force_apsp(g, ledger));
    }
    let params = FullParams::new(n, cfg);

    ledger.begin_stage("knearest");
    let a = TropicalMatrix::adjacency(g);
    let nearest = knearest_iter(&a, params.h, params.k, params.iterations, cfg.c_k, ledger)?;
    let local = LocalEstimate::new((0..n).map(|u| nearest.ranked_row(u)).collect(), 1.0);
    drop(nearest);

    ledger.begin_stage("skeleton");
    let sk = build_skeleton(g, &local, params.k, derive_seed(seed, 41), ledger, None)?;

    ledger.begin_stage("large-bandwidth");
    let l = math::ceil_log2(n);
    let mut sub = RoundLedger::new(sk.size(), l * l * l).with_quota(ledger.quota_c());
    let delta_gs = large_bw_capped(&sk.graph, cfg.inner_eps(), cfg, derive_seed(seed, 42), &mut sub, cap)?;
    ledger.simulate("simulate-large-bandwidth", &sub);

    ledger.begin_stage("lift");
    lift_skeleton_apsp(&delta_gs, &sk, &local, ledger)
}
