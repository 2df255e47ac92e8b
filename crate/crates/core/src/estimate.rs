//! Distance estimates and their audits against exact distances.

use alloc::vec::Vec;

use crate::graph::{NodeId, Weight, INF};

/// A full `n x n` estimate `delta(u, v)` with a claimed approximation factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceEstimate {
    n: usize,
    values: Vec<Weight>,
    claimed_factor: f64,
}

impl DistanceEstimate {
    /// Row-major values, `values[u * n + v]`.
    pub fn from_values(n: usize, values: Vec<Weight>, claimed_factor: f64) -> Self {
        assert_eq!(values.len(), n * n, "estimate must have n^2 values");
        Self {
            n,
            values,
            claimed_factor,
        }
    }

    /// Estimate that is infinite off the diagonal.
    pub fn unreachable(n: usize, claimed_factor: f64) -> Self {
        let mut values = alloc::vec![INF; n * n];
        for u in 0..n {
            values[u * n + u] = 0;
        }
        Self::from_values(n, values, claimed_factor)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: NodeId, v: NodeId) -> Weight {
        self.values[u * self.n + v]
    }

    #[inline]
    pub fn set(&mut self, u: NodeId, v: NodeId, w: Weight) {
        self.values[u * self.n + v] = w;
    }

    pub fn row(&self, u: NodeId) -> &[Weight] {
        &self.values[u * self.n..(u + 1) * self.n]
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }

    pub fn claimed_factor(&self) -> f64 {
        self.claimed_factor
    }

    pub fn with_claimed_factor(mut self, factor: f64) -> Self {
        self.claimed_factor = factor;
        self
    }

    /// Largest finite value, 0 if there is none.
    pub fn max_finite(&self) -> Weight {
        self.values
            .iter()
            .copied()
            .filter(|&w| w != INF)
            .max()
            .unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.get(u, v) == self.get(v, u)))
    }

    /// Every finite value multiplied by `factor` (saturating); useful for
    /// building synthetic approximations from exact distances.
    pub fn inflated(&self, factor: u64) -> Self {
        let values = self
            .values
            .iter()
            .map(|&w| if w == INF { INF } else { w.saturating_mul(factor) })
            .collect();
        Self::from_values(self.n, values, self.claimed_factor * factor as f64)
    }

    /// Compares this estimate against exact distances.
    pub fn audit(&self, exact: &DistanceEstimate) -> RatioAudit {
        assert_eq!(self.n, exact.n, "dimension mismatch");
        let mut audit = RatioAudit::default();
        for u in 0..self.n {
            for v in 0..self.n {
                audit.record(u, v, self.get(u, v), exact.get(u, v));
            }
        }
        audit
    }
}

/// Result of comparing an estimate with exact distances.
///
/// A pair is unsound if its estimate is below the true distance. The ratio
/// is taken over pairs with a positive finite distance; a pair with distance
/// 0 and a positive estimate, or a finite distance and infinite estimate,
/// has infinite ratio.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RatioAudit {
    pub pairs: u64,
    pub soundness_violations: u64,
    pub max_ratio: f64,
    pub worst_pair: Option<(NodeId, NodeId)>,
    pub first_violation: Option<(NodeId, NodeId)>,
}

impl RatioAudit {
    pub fn record(&mut self, u: NodeId, v: NodeId, estimate: Weight, exact: Weight) {
        self.pairs += 1;
        if estimate < exact {
            self.soundness_violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some((u, v));
            }
            return;
        }
        let ratio = if exact == INF {
            return;
        } else if estimate == INF {
            f64::INFINITY
        } else if exact == 0 {
            if estimate == 0 {
                return;
            }
            f64::INFINITY
        } else {
            estimate as f64 / exact as f64
        };
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.worst_pair = Some((u, v));
        }
    }

    pub fn merge(&mut self, other: &RatioAudit) {
        self.pairs += other.pairs;
        self.soundness_violations += other.soundness_violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        if other.max_ratio > self.max_ratio {
            self.max_ratio = other.max_ratio;
            self.worst_pair = other.worst_pair;
        }
    }

    pub fn is_sound(&self) -> bool {
        self.soundness_violations == 0
    }

    /// Sound and within `factor` on every pair.
    pub fn within(&self, factor: f64) -> bool {
        self.is_sound() && self.max_ratio <= factor
    }
}

/// Per-node lists of `(node, distance)` sorted by `(distance, id)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KNearestResult {
    lists: Vec<Vec<(NodeId, Weight)>>,
}

impl KNearestResult {
    pub fn new(lists: Vec<Vec<(NodeId, Weight)>>) -> Self {
        debug_assert!(lists
            .iter()
            .all(|l| l.windows(2).all(|p| (p[0].1, p[0].0) < (p[1].1, p[1].0))));
        Self { lists }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, u: NodeId) -> &[(NodeId, Weight)] {
        &self.lists[u]
    }

    pub fn lists(&self) -> &[Vec<(NodeId, Weight)>] {
        &self.lists
    }

    pub fn into_lists(self) -> Vec<Vec<(NodeId, Weight)>> {
        self.lists
    }
}

/// An estimate known only on per-node candidate sets `Ñ_k(u)`.
///
/// Reads outside a node's candidate set return `None`; the type offers no
/// way to observe them.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEstimate {
    /// `Ñ_k(u)` sorted by `(estimate, id)`.
    ranked: Vec<Vec<(NodeId, Weight)>>,
    /// The same entries sorted by id, for lookups.
    by_id: Vec<Vec<(NodeId, Weight)>>,
    claimed_factor: f64,
}

impl LocalEstimate {
    /// Builds from lists sorted by `(estimate, id)`.
    pub fn new(ranked: Vec<Vec<(NodeId, Weight)>>, claimed_factor: f64) -> Self {
        let by_id = ranked
            .iter()
            .map(|l| {
                let mut s = l.clone();
                s.sort_unstable();
                s
            })
            .collect();
        Self {
            ranked,
            by_id,
            claimed_factor,
        }
    }

    /// Restricts a full estimate to the given candidate sets.
    pub fn restrict(full: &DistanceEstimate, sets: &[Vec<NodeId>]) -> Self {
        let ranked = sets
            .iter()
            .enumerate()
            .map(|(u, set)| {
                let mut l: Vec<(NodeId, Weight)> =
                    set.iter().map(|&v| (v, full.get(u, v))).collect();
                l.sort_unstable_by_key(|&(v, w)| (w, v));
                l
            })
            .collect();
        Self::new(ranked, full.claimed_factor())
    }

    pub fn from_knearest(k: &KNearestResult, claimed_factor: f64) -> Self {
        Self::new(k.lists().to_vec(), claimed_factor)
    }

    pub fn n(&self) -> usize {
        self.ranked.len()
    }

    pub fn claimed_factor(&self) -> f64 {
        self.claimed_factor
    }

    /// `Ñ_k(u)` with estimates, sorted by `(estimate, id)`.
    pub fn ranked(&self, u: NodeId) -> &[(NodeId, Weight)] {
        &self.ranked[u]
    }

    pub fn contains(&self, u: NodeId, v: NodeId) -> bool {
        self.get(u, v).is_some()
    }

    /// `delta(u, v)` if `v` is in `Ñ_k(u)`.
    pub fn get(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        let l = &self.by_id[u];
        l.binary_search_by_key(&v, |e| e.0).ok().map(|i| l[i].1)
    }

    /// `delta(u, v)` if either node holds the other in its candidate set.
    pub fn get_either(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        self.get(u, v).or_else(|| self.get(v, u))
    }

    pub fn sets(&self) -> Vec<Vec<NodeId>> {
        self.ranked
            .iter()
            .map(|l| l.iter().map(|e| e.0).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_counts_violations_and_ratio() {
        let exact = DistanceEstimate::from_values(2, alloc::vec![0, 4, 4, 0], 1.0);
        let est = DistanceEstimate::from_values(2, alloc::vec![0, 6, 3, 0], 2.0);
        let a = est.audit(&exact);
        assert_eq!(a.soundness_violations, 1);
        assert_eq!(a.first_violation, Some((1, 0)));
        assert_eq!(a.max_ratio, 1.5);
        assert!(!a.within(2.0));
    }

    #[test]
    fn local_estimate_rejects_outside_reads() {
        let l = LocalEstimate::new(alloc::vec![alloc::vec![(0, 0), (2, 3)], alloc::vec![(1, 0)], alloc::vec![(2, 0)]], 1.0);
        assert_eq!(l.get(0, 2), Some(3));
        assert_eq!(l.get(2, 0), None);
        assert_eq!(l.get_either(2, 0), Some(3));
        assert_eq!(l.get(0, 1), None);
    }
}
