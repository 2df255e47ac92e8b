//! The composed approximation algorithms.
//!
//! | function | factor | bandwidth |
//! |---|---|---|
//! | [`reduce_approximation`] | `15 sqrt(a)` from `a` | standard |
//! | [`small_diameter_apsp`] | 21 / 7 | standard / `(log n)^2` words |
//! | [`large_bw_apsp`] | `7^3 (1 + eps)^2` | `(log n)^3` words |
//! | [`full_apsp`] | `7^4 (1 + eps)` | standard |
//! | [`truncated_apsp`] | grows as `t` shrinks | standard |

mod config;
mod full;
mod large_bw;
mod reduce;
pub mod scaling;
mod small_diameter;

use alloc::string::String;
use alloc::vec::Vec;

pub use config::PipelineConfig;
pub use full::{full_apsp, positive_apsp, truncated_apsp, FullParams};
pub use large_bw::{large_bw_apsp, large_bw_capped};
pub use reduce::{reduce_approximation, ReduceParams};
pub use scaling::{combine_scaled, scale_weights, ScaledGraphFamily};
pub use small_diameter::{small_diameter_apsp, small_diameter_capped, BandwidthMode};

use crate::error::{Error, Result};
use crate::estimate::{DistanceEstimate, RatioAudit};
use crate::graph::Graph;
use crate::ledger::RoundLedger;
use crate::math;
use crate::oracle::exact_apsp;
use crate::primitives::logn_apsp;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Mode {
    Full,
    Truncated,
    SmallDiameter,
    LargeBandwidth,
    /// One reduction step applied to the `(alpha log n)` bootstrap.
    Reduce,
}

impl Mode {
    /// Bandwidth exponent `e` (messages of `(log n)^e` bits) used when the
    /// configuration does not set one.
    pub fn default_bandwidth_exponent(self) -> u32 {
        match self {
            Mode::LargeBandwidth => 4,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Truncated => "truncated",
            Mode::SmallDiameter => "small_diameter",
            Mode::LargeBandwidth => "large_bandwidth",
            Mode::Reduce => "reduce",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => Mode::Full,
            "truncated" => Mode::Truncated,
            "small_diameter" | "small-diameter" => Mode::SmallDiameter,
            "large_bandwidth" | "large-bandwidth" | "large_bw" => Mode::LargeBandwidth,
            "reduce" => Mode::Reduce,
            other => return Err(Error::InvalidSpec(alloc::format!("unknown mode {other:?}"))),
        })
    }
}

/// Output of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub mode: Mode,
    pub t: Option<u32>,
    pub seed: u64,
    pub config: PipelineConfig,
    /// Words per message slot the run was charged with.
    pub bandwidth: u64,
    pub estimate: DistanceEstimate,
    pub ledger: RoundLedger,
    /// Rounds per stage; they sum to `ledger.total_rounds()`.
    pub stages: Vec<(String, u64)>,
    pub claimed_factor: f64,
    /// Comparison with exact distances, when requested.
    pub audit: Option<RatioAudit>,
}

/// Runs `mode` on `g` with a fresh ledger.
///
/// `t` is the truncation parameter (truncated mode only). With
/// `audit = true` the estimate is compared against exact distances.
pub fn run_pipeline(
    g: &Graph,
    mode: Mode,
    t: Option<u32>,
    cfg: &PipelineConfig,
    seed: u64,
    audit: bool,
) -> Result<PipelineReport> {
    let n = g.n();
    let exponent = cfg
        .bandwidth_exponent
        .unwrap_or_else(|| mode.default_bandwidth_exponent())
        .max(1);
    let word = math::ceil_log2(n);
    let bandwidth = word.saturating_pow(exponent - 1);
    let mut ledger = RoundLedger::new(n, bandwidth).with_quota(cfg.quota_c);
    let estimate = match mode {
        Mode::Full => full_apsp(g, cfg, seed, &mut ledger)?,
        Mode::Truncated => {
            let t = t.ok_or_else(|| Error::PreconditionViolated("truncated mode needs t".into()))?;
            if t == 0 {
                return Err(Error::PreconditionViolated("t must be at least 1".into()));
            }
            truncated_apsp(g, t, cfg, seed, &mut ledger)?
        }
        Mode::SmallDiameter => {
            let bw = if exponent >= 3 {
                BandwidthMode::Log3
            } else {
                BandwidthMode::Standard
            };
            small_diameter_apsp(g, bw, cfg, seed, &mut ledger)?
        }
        Mode::LargeBandwidth => large_bw_apsp(g, cfg.eps, cfg, seed, &mut ledger)?,
        Mode::Reduce => {
            ledger.begin_stage("bootstrap");
            let delta = logn_apsp(g, cfg.alpha, cfg.c_sp, derive_seed(seed, 51), &mut ledger)?;
            reduce_approximation(g, &delta, cfg, seed, &mut ledger)?
        }
    };
    let audit = audit.then(|| estimate.audit(&exact_apsp(g)));
    Ok(PipelineReport {
        mode,
        t,
        seed,
        config: cfg.clone(),
        bandwidth,
        claimed_factor: estimate.claimed_factor(),
        stages: ledger.stage_totals(),
        estimate,
        ledger,
        audit,
    })
}
