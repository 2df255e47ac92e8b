//! Randomized hitting sets for per-node candidate sets.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::graph::NodeId;
use crate::ledger::RoundLedger;
use crate::math;
use crate::rng::{derive_seed, node_rng, tag};

/// Rounds charged for one hitting-set computation (sampling announcement
/// and fallback announcement).
pub const HITTING_SET_ROUNDS: u64 = 2;

/// A set `S` meeting every candidate set, returned in increasing order.
///
/// Each node joins with probability `ln k / k`; a node whose set is then
/// missed joins as well (or, if it is not in its own set, the first member
/// of its set joins). This is repeated `ceil(2 log2 n)` times and the
/// smallest outcome is kept, ties going to the earliest repetition.
pub fn hitting_set(sets: &[Vec<NodeId>], k: usize, seed: u64, ledger: &mut RoundLedger) -> Vec<NodeId> {
    let n = sets.len();
    let p = if k <= 1 {
        0.0
    } else {
        (libm::log(k as f64) / k as f64).min(1.0)
    };
    let reps = (2 * math::ceil_log2(n)) as usize;
    let mut best: Option<Vec<bool>> = None;
    let mut best_size = usize::MAX;
    for rep in 0..reps {
        let rep_seed = derive_seed(seed, rep as u64);
        let mut member: Vec<bool> = (0..n)
            .map(|v| p > 0.0 && node_rng(rep_seed, tag::HITTING_SET, v).gen_bool(p))
            .collect();
        let missed: Vec<NodeId> = (0..n)
            .filter(|&v| !sets[v].iter().any(|&u| member[u]))
            .collect();
        for v in missed {
            if sets[v].contains(&v) || sets[v].is_empty() {
                member[v] = true;
            } else {
                member[sets[v][0]] = true;
            }
        }
        let size = member.iter().filter(|&&m| m).count();
        if size < best_size {
            best_size = size;
            best = Some(member);
        }
    }
    ledger.charge("hitting-set", HITTING_SET_ROUNDS);
    let member = best.unwrap_or_else(|| vec![true; n]);
    (0..n).filter(|&v| member[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_need_everyone() {
        let sets: Vec<Vec<NodeId>> = (0..10).map(|v| vec![v]).collect();
        let s = hitting_set(&sets, 1, 3, &mut RoundLedger::standard(10));
        assert_eq!(s, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn full_sets_need_few() {
        let n = 64;
        let sets: Vec<Vec<NodeId>> = (0..n).map(|_| (0..n).collect()).collect();
        let s = hitting_set(&sets, n, 3, &mut RoundLedger::standard(n));
        assert!(!s.is_empty() && s.len() <= 8, "{}", s.len());
    }

    #[test]
    fn always_hits() {
        let n = 50;
        let sets: Vec<Vec<NodeId>> = (0..n).map(|v| (0..5).map(|i| (v + 7 * i) % n).collect()).collect();
        for seed in 0..20 {
            let s = hitting_set(&sets, 5, seed, &mut RoundLedger::standard(n));
            assert!(sets.iter().all(|set| set.iter().any(|u| s.contains(u))));
        }
    }
}
