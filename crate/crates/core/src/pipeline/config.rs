//! Pipeline configuration and derived parameters.

use crate::math;

/// Tunable constants of the pipeline. Every field has a default and is
/// echoed in reports.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PipelineConfig {
    /// User accuracy parameter of the final factor `2401 (1 + eps)`.
    pub eps: f64,
    /// Multiplier of the `(alpha log n)`-approximate bootstrap.
    pub alpha: f64,
    /// Receive quota constant of validated routing.
    pub quota_c: u64,
    /// Constant in `k <= c_k n^(1/h)` for filtered exponentiation.
    pub c_k: f64,
    /// Constant in the spanner broadcast budget `c_sp * b * n` edges.
    pub c_sp: f64,
    /// Input weights must satisfy `w <= n^weight_exponent`.
    pub weight_exponent: u32,
    /// Small-diameter runs require diameter at most `(log2 n)^diameter_exponent`.
    pub diameter_exponent: u32,
    /// Graphs with fewer nodes are solved by broadcasting all edges.
    pub brute_force_below: usize,
    /// Iteration budget at which a truncated run coincides with a full run;
    /// defaults to `ceil(log2 log2 log2 max(n, 16))`.
    pub truncation_saturation: Option<u32>,
    /// Bandwidth `(ceil log2 n)^(e - 1)` words per message; mode default when unset.
    pub bandwidth_exponent: Option<u32>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            alpha: 1.0,
            quota_c: crate::ledger::DEFAULT_QUOTA,
            c_k: 1.0,
            c_sp: 8.0,
            weight_exponent: 3,
            diameter_exponent: 8,
            brute_force_below: 8,
            truncation_saturation: None,
            bandwidth_exponent: None,
        }
    }
}

impl PipelineConfig {
    /// `floor(c_k n^(1/h))`, exact for integer `c_k`.
    pub(crate) fn width_limit(&self, n: usize, h: usize) -> usize {
        if self.c_k == 1.0 {
            math::floor_root(n, h as u32)
        } else {
            libm::floor(self.c_k * libm::pow(n as f64, 1.0 / h as f64) + 1e-9) as usize
        }
    }

    /// Smallest `t` at which truncation no longer changes the run,
    /// `ceil(log2 log2 log2 n)` unless configured.
    pub fn saturation(&self, n: usize) -> u32 {
        self.truncation_saturation.unwrap_or_else(|| math::log3_ceil(n))
    }

    /// The part of `eps` spent inside the large-bandwidth stage so that
    /// `7^4 (1 + eps_in)^2 = 2401 (1 + eps)`.
    pub fn inner_eps(&self) -> f64 {
        libm::sqrt(1.0 + self.eps) - 1.0
    }
}
