//! APSP on graphs of polylogarithmic weighted diameter: a 21-approximation
//! with standard bandwidth, a 7-approximation with `(log n)^2`-word messages.

use alloc::format;

use crate::error::{Error, Result};
use crate::estimate::{DistanceEstimate, LocalEstimate};
use crate::graph::Graph;
use crate::hopset::build_hopset;
use crate::knearest::knearest_iter;
use crate::ledger::RoundLedger;
use crate::math;
use crate::matrix::TropicalMatrix;
use crate::primitives::{brute_force_apsp, logn_apsp, spanner_apsp, SpannerVariant};
use crate::rng::derive_seed;
use crate::skeleton::{build_skeleton, lift_skeleton_apsp};

use super::{reduce_approximation, PipelineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BandwidthMode {
    /// One word per message; skeleton APSP through a 3-spanner.
    Standard,
    /// `(log n)^2` words per message; the whole skeleton is broadcast.
    Log3,
}

/// `small_diameter_apsp` with no cap on reduction steps.
pub fn small_diameter_apsp(
    g: &Graph,
    mode: BandwidthMode,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    small_diameter_capped(g, mode, cfg, seed, ledger, None)
}

/// Bootstraps with the `(alpha log n)`-approximation, applies reduction
/// steps while they improve the factor, then finishes with the direct
/// method (hopset, `sqrt n`-nearest nodes, skeleton).
///
/// With `cap = Some(t)` below the saturation point, at most `t` reduction
/// steps run and their result is returned without the direct method.
pub fn small_diameter_capped(
    g: &Graph,
    mode: BandwidthMode,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
    cap: Option<u32>,
) -> Result<DistanceEstimate> {
    run(g, mode, cfg, seed, ledger, cap, true)
}

/// The scaled instances of the large-bandwidth algorithm skip the diameter
/// check: their diameter is at most `B h^2` by construction, which is
/// polylogarithmic in the original `n` but not always below
/// `(log2 |V|)^e` for a small skeleton.
pub(super) fn run(
    g: &Graph,
    mode: BandwidthMode,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
    cap: Option<u32>,
    check_diameter: bool,
) -> Result<DistanceEstimate> {
    let n = g.n();
    if n < cfg.brute_force_below {
        ledger.begin_stage("brute-force");
        return Ok(brute_force_apsp(g, ledger));
    }
    let log_n = math::ceil_log2(n);
    if mode == BandwidthMode::Log3 && ledger.bandwidth() < log_n * log_n {
        return Err(Error::PreconditionViolated(format!(
            "bandwidth {} is below (log n)^2 = {}",
            ledger.bandwidth(),
            log_n * log_n
        )));
    }

    ledger.begin_stage("bootstrap");
    let mut delta = logn_apsp(g, cfg.alpha, cfg.c_sp, derive_seed(seed, 21), ledger)?;
    let diameter_bound = libm::pow(math::log2(n), cfg.diameter_exponent as f64);
    let diameter_lower = delta.max_finite() as f64 / delta.claimed_factor();
    if check_diameter && diameter_lower > diameter_bound {
        return Err(Error::PreconditionViolated(format!(
            "weighted diameter is at least {diameter_lower:.1}, above (log2 n)^{} = {diameter_bound:.1}",
            cfg.diameter_exponent
        )));
    }

    let saturation = cfg.saturation(n);
    let truncated = matches!(cap, Some(t) if t < saturation);
    let max_steps = match cap {
        Some(t) if truncated => t,
        _ => math::log3_ceil(n) + 2,
    };
    let stop_at = libm::ceil(libm::log2(math::log2(n).max(2.0)));
    let mut step = 0;
    while step < max_steps {
        let a = delta.claimed_factor();
        if a <= stop_at || 15.0 * libm::sqrt(a) >= a {
            break;
        }
        delta = reduce_approximation(g, &delta, cfg, derive_seed(seed, 100 + step as u64), ledger)?;
        step += 1;
    }
    if truncated {
        return Ok(delta);
    }

    ledger.begin_stage("direct-hopset");
    let hopset = build_hopset(g, &delta, ledger)?;

    ledger.begin_stage("direct-knearest");
    let k = math::floor_root(n, 2).max(1);
    let target = hopset.beta_bound.min(k.saturating_sub(1) as u32).max(1) as usize;
    let i = math::hop_iterations(2, target);
    let a = TropicalMatrix::adjacency(&hopset.union(g));
    let nearest = knearest_iter(&a, 2, k, i, cfg.c_k, ledger)?;
    let local = LocalEstimate::new((0..n).map(|u| nearest.ranked_row(u)).collect(), 1.0);

    ledger.begin_stage("direct-skeleton");
    let sk = build_skeleton(g, &local, k, derive_seed(seed, 22), ledger, None)?;

    ledger.begin_stage("direct-skeleton-apsp");
    let delta_gs = match mode {
        BandwidthMode::Log3 => brute_force_apsp(&sk.graph, ledger),
        BandwidthMode::Standard => {
            match spanner_apsp(&sk.graph, 2, SpannerVariant::Plain, cfg.c_sp, derive_seed(seed, 23), ledger) {
                Ok(d) => d,
                Err(Error::SizeViolation { .. }) => brute_force_apsp(&sk.graph, ledger),
                Err(e) => return Err(e),
            }
        }
    };

    ledger.begin_stage("direct-lift");
    lift_skeleton_apsp(&delta_gs, &sk, &local, ledger)
}
