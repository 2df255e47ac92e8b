//! Round accounting for Congested-Clique[B] executions.
//!
//! A word is `ceil(log2 n)` bits; one message slot carries `bandwidth` words.
//! Routing steps deliver materialized messages and are charged one round
//! each, after checking that no node receives more than
//! `quota_c * n * bandwidth` words. Broadcasts are charged
//! `max(1, ceil(words / (n * bandwidth)))` rounds.

use alloc::borrow::Cow;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Default routing quota constant.
pub const DEFAULT_QUOTA: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LedgerEntry {
    pub primitive: String,
    pub stage: String,
    pub rounds: u64,
    pub max_sent: u64,
    pub max_received: u64,
}

/// One message. Payload items each count as one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message<'a, T: Clone> {
    pub src: NodeId,
    pub dst: NodeId,
    pub payload: Cow<'a, [T]>,
}

/// Messages handed to one routing step.
#[derive(Debug, Clone, Default)]
pub struct MessageBatch<'a, T: Clone> {
    messages: Vec<Message<'a, T>>,
}

impl<'a, T: Clone> MessageBatch<'a, T> {
    pub fn new() -> Self {
        Self {
            messages: Vec::new(),
        }
    }

    pub fn send(&mut self, src: NodeId, dst: NodeId, payload: impl Into<Cow<'a, [T]>>) {
        self.messages.push(Message {
            src,
            dst,
            payload: payload.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }
}

/// Per-node inboxes; within a node, messages keep batch order.
pub type Inboxes<'a, T> = Vec<Vec<Message<'a, T>>>;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundLedger {
    n: usize,
    bandwidth: u64,
    quota_c: u64,
    stage: String,
    entries: Vec<LedgerEntry>,
    total_rounds: u64,
}

impl RoundLedger {
    /// Ledger for an `n`-node clique carrying `bandwidth` words per message slot.
    pub fn new(n: usize, bandwidth: u64) -> Self {
        Self {
            n,
            bandwidth: bandwidth.max(1),
            quota_c: DEFAULT_QUOTA,
            stage: String::new(),
            entries: Vec::new(),
            total_rounds: 0,
        }
    }

    /// Standard model: one word per message slot.
    pub fn standard(n: usize) -> Self {
        Self::new(n, 1)
    }

    pub fn with_quota(mut self, quota_c: u64) -> Self {
        self.quota_c = quota_c.max(1);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> u64 {
        self.bandwidth
    }

    pub fn quota_c(&self) -> u64 {
        self.quota_c
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn total_rounds(&self) -> u64 {
        self.total_rounds
    }

    /// Labels subsequent entries with `stage`.
    pub fn begin_stage(&mut self, stage: &str) {
        self.stage = stage.to_string();
    }

    pub fn stage(&self) -> &str {
        &self.stage
    }

    /// Rounds per stage, in first-appearance order.
    pub fn stage_totals(&self) -> Vec<(String, u64)> {
        let mut out: Vec<(String, u64)> = Vec::new();
        for e in &self.entries {
            match out.iter_mut().find(|(s, _)| *s == e.stage) {
                Some((_, r)) => *r += e.rounds,
                None => out.push((e.stage.clone(), e.rounds)),
            }
        }
        out
    }

    fn push(&mut self, primitive: &str, rounds: u64, max_sent: u64, max_received: u64) {
        self.total_rounds += rounds;
        self.entries.push(LedgerEntry {
            primitive: primitive.to_string(),
            stage: self.stage.clone(),
            rounds,
            max_sent,
            max_received,
        });
    }

    /// Largest per-node receive load a routing step with `quota_c` may have.
    pub fn receive_limit(&self, quota_c: u64) -> u64 {
        quota_c * self.n as u64 * self.bandwidth
    }

    /// Delivers `batch` in one charged round.
    ///
    /// Fails with [`Error::QuotaExceeded`] if some node would receive more
    /// than `quota_c * n * bandwidth` words. Nothing is charged on failure.
    pub fn route_validated<'a, T: Clone>(
        &mut self,
        primitive: &str,
        batch: MessageBatch<'a, T>,
        quota_c: u64,
    ) -> Result<Inboxes<'a, T>> {
        let n = self.n;
        let mut sent = vec![0u64; n];
        let mut received = vec![0u64; n];
        for m in &batch.messages {
            assert!(m.src < n && m.dst < n, "message endpoint out of range");
            let len = m.payload.len() as u64;
            sent[m.src] += len;
            received[m.dst] += len;
        }
        let limit = self.receive_limit(quota_c);
        if let Some((node, &load)) = received.iter().enumerate().max_by_key(|&(i, &l)| (l, usize::MAX - i)) {
            if load > limit {
                return Err(Error::QuotaExceeded {
                    primitive: primitive.to_string(),
                    node,
                    load,
                    limit,
                });
            }
        }
        let mut inboxes: Inboxes<'a, T> = (0..n).map(|_| Vec::new()).collect();
        for m in batch.messages {
            inboxes[m.dst].push(m);
        }
        let max_sent = sent.into_iter().max().unwrap_or(0);
        let max_received = received.into_iter().max().unwrap_or(0);
        self.push(primitive, 1, max_sent, max_received);
        Ok(inboxes)
    }

    /// Rounds a broadcast of `words` words costs on this ledger.
    pub fn broadcast_rounds(&self, words: u64) -> u64 {
        let capacity = self.n as u64 * self.bandwidth;
        words.div_ceil(capacity.max(1)).max(1)
    }

    /// Makes `words` words known to every node. Returns the rounds charged.
    pub fn broadcast(&mut self, primitive: &str, words: u64) -> u64 {
        let rounds = self.broadcast_rounds(words);
        let per_node = words.div_ceil(self.n.max(1) as u64);
        self.push(primitive, rounds, per_node * self.n as u64, words);
        rounds
    }

    /// Charges a fixed number of rounds for a primitive modeled as a black box.
    pub fn charge(&mut self, primitive: &str, rounds: u64) {
        self.push(primitive, rounds, 0, 0);
    }

    /// Charges a fixed number of rounds with known per-node loads.
    pub fn charge_with_load(&mut self, primitive: &str, rounds: u64, max_sent: u64, max_received: u64) {
        self.push(primitive, rounds, max_sent, max_received);
    }

    /// Peak words per node per round over all entries of this ledger.
    pub fn peak_load_per_round(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.rounds > 0)
            .map(|e| e.max_sent.max(e.max_received).div_ceil(e.rounds))
            .max()
            .unwrap_or(0)
    }

    /// Composes sub-runs executed side by side on this clique.
    ///
    /// Charges the maximum of their totals, after checking that the sum of
    /// their per-round peak loads fits `quota_c * n * bandwidth` of this
    /// ledger. Returns the rounds charged.
    pub fn parallel(&mut self, primitive: &str, subs: &[RoundLedger]) -> Result<u64> {
        let load: u64 = subs.iter().map(|s| s.peak_load_per_round()).sum();
        let limit = self.receive_limit(self.quota_c);
        if load > limit {
            return Err(Error::BandwidthExceeded {
                primitive: primitive.to_string(),
                load,
                limit,
            });
        }
        let rounds = subs.iter().map(|s| s.total_rounds).max().unwrap_or(0);
        let max_sent = subs.iter().map(|s| max_of(s, |e| e.max_sent)).sum();
        let max_received = subs.iter().map(|s| max_of(s, |e| e.max_received)).sum();
        self.push(primitive, rounds, max_sent, max_received);
        Ok(rounds)
    }

    /// Charges the execution of a sub-run whose nodes are a subset of this
    /// clique's nodes, possibly with a larger bandwidth.
    ///
    /// Each sub-entry costs `max(rounds, ceil(load / (quota_c * n * bandwidth)))`
    /// rounds here, where `load` is its larger per-node send or receive load.
    pub fn simulate(&mut self, primitive: &str, sub: &RoundLedger) -> u64 {
        assert!(sub.n <= self.n, "simulated clique is larger than the host");
        let capacity = self.receive_limit(self.quota_c).max(1);
        let rounds = sub
            .entries
            .iter()
            .map(|e| e.rounds.max(e.max_sent.max(e.max_received).div_ceil(capacity)))
            .sum();
        let max_sent = max_of(sub, |e| e.max_sent);
        let max_received = max_of(sub, |e| e.max_received);
        self.push(primitive, rounds, max_sent, max_received);
        rounds
    }

    /// Appends the entries of a sub-run on a subset of this clique's nodes
    /// with the same bandwidth. Its loads fit here unchanged, so every entry
    /// keeps its rounds and stage.
    pub fn embed(&mut self, sub: &RoundLedger) -> u64 {
        assert!(sub.n <= self.n, "embedded clique is larger than the host");
        assert!(sub.bandwidth <= self.bandwidth, "embedded run uses a wider bandwidth");
        for e in &sub.entries {
            self.entries.push(e.clone());
        }
        self.total_rounds += sub.total_rounds;
        sub.total_rounds
    }
}

fn max_of(l: &RoundLedger, f: impl Fn(&LedgerEntry) -> u64) -> u64 {
    l.entries.iter().map(f).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_keeps_stages() {
        let mut sub = RoundLedger::standard(4);
        sub.begin_stage("inner");
        sub.charge("a", 2);
        let mut host = RoundLedger::standard(8);
        host.begin_stage("outer");
        host.charge("b", 1);
        assert_eq!(host.embed(&sub), 2);
        assert_eq!(host.total_rounds(), 3);
        assert_eq!(host.stage_totals(), vec![("outer".to_string(), 1), ("inner".to_string(), 2)]);
    }

    #[test]
    fn all_to_all_fits() {
        let mut l = RoundLedger::standard(8);
        let mut b = MessageBatch::new();
        for u in 0..8 {
            for v in 0..8 {
                if u != v {
                    b.send(u, v, vec![u as u64]);
                }
            }
        }
        let inbox = l.route_validated("all-to-all", b, 1).unwrap();
        assert_eq!(l.total_rounds(), 1);
        assert_eq!(inbox[3].len(), 7);
        assert!(inbox[3].iter().all(|m| m.payload.len() == 1));
        assert_eq!(inbox[3][0].src, 0);
        assert_eq!(l.entries()[0].max_received, 7);
    }

    #[test]
    fn overload_is_rejected() {
        let mut l = RoundLedger::standard(8);
        let mut b: MessageBatch<u64> = MessageBatch::new();
        let payload = vec![0u64; 2 * 8 * 4];
        b.send(1, 0, &payload[..]);
        let err = l.route_validated("hot-spot", b, 4).unwrap_err();
        assert!(matches!(err, Error::QuotaExceeded { node: 0, load: 64, limit: 32, .. }));
        assert_eq!(l.total_rounds(), 0);
    }

    #[test]
    fn broadcast_charges() {
        let mut l = RoundLedger::standard(256);
        assert_eq!(l.broadcast("x", 256), 1);
        assert_eq!(l.broadcast("x", 256 * 64), 64);
        assert_eq!(l.broadcast("x", 0), 1);
        let mut big = RoundLedger::new(256, 512);
        assert_eq!(big.broadcast("x", 256 * 64), 1);
        assert_eq!(l.total_rounds(), 66);
    }

    #[test]
    fn charges_are_ordered() {
        let mut l = RoundLedger::standard(4);
        l.begin_stage("a");
        l.charge("mst", 1);
        l.begin_stage("b");
        l.charge("spanner", 2);
        assert_eq!(l.total_rounds(), 3);
        assert_eq!(l.entries()[0].primitive, "mst");
        assert_eq!(l.stage_totals(), vec![("a".to_string(), 1), ("b".to_string(), 2)]);
    }

    #[test]
    fn parallel_takes_max_and_checks_bandwidth() {
        let mut a = RoundLedger::standard(4);
        a.charge_with_load("x", 3, 4, 4);
        let mut b = RoundLedger::standard(4);
        b.charge_with_load("y", 5, 5, 5);
        let mut host = RoundLedger::new(4, 1);
        assert_eq!(host.parallel("both", &[a.clone(), b.clone()]).unwrap(), 5);
        let mut heavy = RoundLedger::standard(4);
        heavy.charge_with_load("z", 1, 16, 16);
        assert!(matches!(
            host.parallel("too-much", &[heavy.clone(), heavy]),
            Err(Error::BandwidthExceeded { .. })
        ));
    }

    #[test]
    fn simulation_charges_measured_load() {
        let mut sub = RoundLedger::new(2, 100);
        sub.charge_with_load("x", 1, 10, 10);
        sub.charge_with_load("y", 1, 200, 200);
        let mut host = RoundLedger::standard(10);
        assert_eq!(host.simulate("sim", &sub), 1 + 5);
    }
}
