//! One step of approximation-factor reduction: from an `a`-approximation
//! to a `15 sqrt(a)`-approximation in a constant number of rounds.

use crate::error::{Error, Result};
use crate::estimate::{DistanceEstimate, LocalEstimate};
use crate::graph::Graph;
use crate::hopset::build_hopset;
use crate::knearest::knearest_iter;
use crate::ledger::RoundLedger;
use crate::math;
use crate::matrix::TropicalMatrix;
use crate::primitives::{brute_force_apsp, spanner_apsp, SpannerVariant};
use crate::rng::derive_seed;
use crate::skeleton::{build_skeleton, lift_skeleton_apsp};

use super::PipelineConfig;

/// Parameters of one reduction step for input factor `a` on `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceParams {
    /// Hop exponent of filtered exponentiation.
    pub h: usize,
    /// Candidate-set size.
    pub k: usize,
    /// Spanner parameter on the skeleton.
    pub b: u32,
    /// Spanner accuracy.
    pub spanner_eps: f64,
}

impl ReduceParams {
    pub fn new(n: usize, a: f64, cfg: &PipelineConfig) -> Self {
        let quarter = libm::pow(a, 0.25);
        let h = (libm::floor(0.5 * quarter) as usize).max(2);
        let k_hops = cfg.width_limit(n, h);
        let k_size = libm::ceil(libm::pow(n as f64, 2.0 / quarter)) as usize;
        // the hopset only serves the floor(sqrt n) nearest nodes
        let k = k_hops.min(k_size).min(math::floor_root(n, 2)).max(1);
        let b = (libm::floor(libm::sqrt(a) + 0.5) as u32).max(1);
        Self {
            h,
            k,
            b,
            spanner_eps: 1.0 / 14.0,
        }
    }

    /// Factor claimed for a skeleton estimate with factor `l`.
    pub fn spanner_factor(&self) -> f64 {
        (1.0 + self.spanner_eps) * (2 * self.b - 1) as f64
    }
}

/// Improves a sound `a`-approximation `delta` (its claimed factor) to a
/// `7 (1 + 1/14)(2b - 1) <= 15 sqrt(a)`-approximation.
///
/// Skeleton APSP uses a `b`-spanner when `|S|^(1 + 1/b) <= n` and the
/// spanner fits its budget; otherwise the skeleton is broadcast whole and
/// solved exactly.
pub fn reduce_approximation(
    g: &Graph,
    delta: &DistanceEstimate,
    cfg: &PipelineConfig,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<DistanceEstimate> {
    let n = g.n();
    if n < cfg.brute_force_below {
        ledger.begin_stage("brute-force");
        return Ok(brute_force_apsp(g, ledger));
    }
    if g.is_directed() {
        return Err(Error::PreconditionViolated("reduction needs an undirected graph".into()));
    }
    let params = ReduceParams::new(n, delta.claimed_factor(), cfg);

    ledger.begin_stage("reduce-hopset");
    let hopset = build_hopset(g, delta, ledger)?;

    ledger.begin_stage("reduce-knearest");
    let target = hopset.beta_bound.min(params.k.saturating_sub(1) as u32).max(1) as usize;
    let i = math::hop_iterations(params.h, target);
    let a = TropicalMatrix::adjacency(&hopset.union(g));
    let nearest = knearest_iter(&a, params.h, params.k, i, cfg.c_k, ledger)?;
    let local = LocalEstimate::new((0..n).map(|u| nearest.ranked_row(u)).collect(), 1.0);

    ledger.begin_stage("reduce-skeleton");
    let sk = build_skeleton(g, &local, params.k, derive_seed(seed, 11), ledger, None)?;

    ledger.begin_stage("reduce-skeleton-apsp");
    let size = sk.size() as f64;
    let fits = libm::pow(size, 1.0 + 1.0 / params.b as f64) <= n as f64;
    let spanner = if fits {
        match spanner_apsp(
            &sk.graph,
            params.b,
            SpannerVariant::Eps(params.spanner_eps),
            cfg.c_sp,
            derive_seed(seed, 12),
            ledger,
        ) {
            Ok(d) => Some(d),
            Err(Error::SizeViolation { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let delta_gs = match spanner {
        Some(d) => d,
        None => brute_force_apsp(&sk.graph, ledger),
    };

    ledger.begin_stage("reduce-lift");
    lift_skeleton_apsp(&delta_gs, &sk, &local, ledger)
}
