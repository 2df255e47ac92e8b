//! APSP with `(log n)^3`-word messages: a `7^3 (1 + eps)^2`-approximation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::{DistanceEstimate, LocalEstimate};
use crate::graph::Graph;
use crate::hopset::{approx_knearest_sets, build_hopset};
use crate::ledger::RoundLedger;
use crate::math;
use crate::primitives::{brute_force_apsp, logn_apsp};
use crate::rng::derive_seed;
use crate::skeleton::{build_skeleton, lift_skeleton_apsp};

use super::scaling::{combine_scaled, scale_weights};
use super::small_diameter::{self, BandwidthMode};
use super::PipelineConfig;

/// Integer cube root, rounded down.
fn icbrt(x: u64) -> u64 {
    let mut r = libm::cbrt(x as f64) as u64;
    while r > 0 && r * r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// `large_bw_capped` without truncation.
pub fn large_bw_apsp(
    g: &Graph,
    eps: f64,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    large_bw_capped(g, eps, cfg, seed, ledger, None)
}

/// Bootstrap, hopset, weight scaling over `G ∪ H`, a small-diameter run per
/// scale (side by side, each with `(log n)^2`-word messages), then a
/// skeleton over the `sqrt n` nodes ranked nearest by the combined
/// estimate, broadcast whole.
///
/// The ledger's bandwidth must be `L^3` words with `L >= ceil(log2 n)`;
/// the per-scale runs get `L^2`. `cap` bounds their reduction steps.
pub fn large_bw_capped(
    g: &Graph,
    eps: f64,
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
    let word = icbrt(ledger.bandwidth());
    if word < math::ceil_log2(n) {
        return Err(Error::PreconditionViolated(format!(
            "bandwidth {} is below (log n)^3 for n = {n}",
            ledger.bandwidth()
        )));
    }

    ledger.begin_stage("bootstrap");
    let delta0 = logn_apsp(g, cfg.alpha, cfg.c_sp, derive_seed(seed, 31), ledger)?;

    ledger.begin_stage("hopset");
    let hopset = build_hopset(g, &delta0, ledger)?;
    let h = (hopset.beta_bound as u64).max(libm::ceil(delta0.claimed_factor()) as u64);
    let union = hopset.union_undirected(g);

    ledger.begin_stage("scaled-instances");
    let family = scale_weights(&union, h, eps, delta0.max_finite());
    let mut inner = Vec::with_capacity(family.graphs.len());
    let mut subs = Vec::with_capacity(family.graphs.len());
    for (i, gi) in family.graphs.iter().enumerate() {
        let mut sub = RoundLedger::new(n, word * word).with_quota(ledger.quota_c());
        let est = small_diameter::run(
            gi,
            BandwidthMode::Log3,
            cfg,
            derive_seed(seed, 1000 + i as u64),
            &mut sub,
            cap.map(|t| t + 1),
            false,
        )?;
        inner.push(est);
        subs.push(sub);
    }
    ledger.parallel("scaled-instances", &subs)?;
    let eta = combine_scaled(&family, &inner, &delta0)?;
    drop(inner);

    ledger.begin_stage("skeleton");
    let k = math::floor_root(n, 2).max(1);
    let sets = approx_knearest_sets(&eta, k);
    let local = LocalEstimate::restrict(&eta, &sets);
    drop(eta);
    let sk = build_skeleton(g, &local, k, derive_seed(seed, 32), ledger, None)?;

    ledger.begin_stage("skeleton-apsp");
    let delta_gs = brute_force_apsp(&sk.graph, ledger);

    ledger.begin_stage("lift");
    lift_skeleton_apsp(&delta_gs, &sk, &local, ledger)
}

#[cfg(test)]
mod tests {
    use super::icbrt;

    #[test]
    fn cube_roots() {
        assert_eq!(icbrt(512), 8);
        assert_eq!(icbrt(511), 7);
        assert_eq!(icbrt(1), 1);
        assert_eq!(icbrt(1728), 12);
    }
}
