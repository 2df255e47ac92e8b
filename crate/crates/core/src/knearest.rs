//! Filtered min-plus exponentiation.
//!
//! Each node `u` keeps its row of `A` filtered to the `k` smallest entries,
//! a list `M_(u)`. The concatenation `M = M_(0) M_(1) ... M_(n-1)` is cut
//! into `p` contiguous bins. Every node is assigned one *h-combination*: a
//! first bin followed by `h - 1` further distinct bins, so that any
//! `h`-edge walk from `u` has all its edges inside the bins of some
//! combination whose first bin holds part of `M_(u)`. Combination nodes
//! collect their bins, answer top-`k` queries for the sources of their
//! first bin, and each source merges the answers. The result equals
//! filtering `A^h`, and repeating it `i` times filters `A^(h^i)`.

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{dist_add, NodeId, Weight, INF};
use crate::ledger::{MessageBatch, RoundLedger};
use crate::math;
use crate::matrix::TropicalMatrix;

/// A matrix keeping at most `k` finite entries per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredMatrix {
    pub base: TropicalMatrix,
    pub k: usize,
}

impl FilteredMatrix {
    /// Row `u` sorted by `(value, column)`.
    pub fn ranked_row(&self, u: NodeId) -> Vec<(NodeId, Weight)> {
        ranked(self.base.row(u))
    }
}

fn ranked(row: &[(NodeId, Weight)]) -> Vec<(NodeId, Weight)> {
    let mut r = row.to_vec();
    r.sort_unstable_by_key(|&(c, w)| (w, c));
    r
}

fn keep_smallest(row: &[(NodeId, Weight)], k: usize) -> Vec<(NodeId, Weight)> {
    let mut r = ranked(row);
    r.truncate(k);
    r
}

/// Keeps the `k` smallest finite entries of every row, ties by column.
pub fn filter_rows(a: &TropicalMatrix, k: usize) -> FilteredMatrix {
    let rows = a.rows().iter().map(|row| keep_smallest(row, k)).collect();
    FilteredMatrix {
        base: TropicalMatrix::from_rows(a.n(), rows),
        k,
    }
}

/// Receive quota for the bin-collection and answer steps, `ceil(6 c_k) + 1`.
///
/// With `p = floor(n^(1/h) h / 4) >= h >= 2` we have `p >= 2/3 n^(1/h) h / 4`,
/// so `h` bins of `n k / p` slots hold at most `6 c_k n` entries, and
/// `|S| k <= 2 n k / p` answer entries obey the same bound.
pub fn knearest_quota(c_k: f64) -> u64 {
    libm::ceil(6.0 * c_k) as u64 + 1
}

/// How the global list `M` is cut into bins and which node owns which
/// h-combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinLayout {
    pub n: usize,
    pub k: usize,
    pub h: usize,
    pub p: usize,
    /// `bounds[b]..bounds[b + 1]` are the slots of bin `b`; node `u`'s list
    /// occupies slots `u * k..u * k + len(u)`.
    pub bounds: Vec<usize>,
}

impl BinLayout {
    pub fn new(n: usize, h: usize, k: usize) -> Self {
        let root = libm::pow(n as f64, 1.0 / h as f64);
        let p = libm::floor(root * h as f64 / 4.0 + 1e-9) as usize;
        let total = n * k;
        let bounds = if p == 0 {
            vec![0, total]
        } else {
            (0..=p).map(|b| b * total / p).collect()
        };
        Self { n, k, h, p, bounds }
    }

    /// Too few bins, or bins no larger than one list: every node can
    /// instead learn all lists.
    pub fn is_degenerate(&self) -> bool {
        self.p < self.h || self.n * self.k / self.p.max(1) <= self.k
    }

    pub fn combination_count(&self) -> usize {
        self.p
            .saturating_mul(math::binomial(self.p.saturating_sub(1), self.h - 1))
    }

    /// Bin containing a slot.
    pub fn bin_of(&self, slot: usize) -> usize {
        self.bounds.partition_point(|&b| b <= slot) - 1
    }

    /// Bins intersecting slots `lo..hi` (`lo < hi`).
    pub fn bins_of_range(&self, lo: usize, hi: usize) -> core::ops::RangeInclusive<usize> {
        self.bin_of(lo)..=self.bin_of(hi - 1)
    }

    /// All h-combinations in lexicographic order of `(first, sorted rest)`;
    /// the combination at index `r` belongs to node `r`.
    pub fn combinations(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.combination_count());
        for first in 0..self.p {
            let others: Vec<usize> = (0..self.p).filter(|&b| b != first).collect();
            let mut idx: Vec<usize> = (0..self.h - 1).collect();
            loop {
                let mut c = Vec::with_capacity(self.h);
                c.push(first);
                c.extend(idx.iter().map(|&i| others[i]));
                out.push(c);
                // next (h-1)-subset of `others` in lexicographic order
                let m = others.len();
                let r = idx.len();
                let Some(pos) = (0..r).rev().find(|&j| idx[j] < m - r + j) else {
                    break;
                };
                idx[pos] += 1;
                for j in pos + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        out
    }
}

/// Scratch space for bounded-hop searches over partial adjacency.
struct HopSearch {
    dist: Vec<Weight>,
    touched: Vec<NodeId>,
    frontier: Vec<NodeId>,
    updates: Vec<(NodeId, Weight)>,
}

impl HopSearch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![INF; n],
            touched: Vec::new(),
            frontier: Vec::new(),
            updates: Vec::new(),
        }
    }

    /// Top `k` of the `h`-hop distances from `source`, sorted by `(dist, id)`.
    fn top_k<'e, F, I>(&mut self, source: NodeId, h: usize, k: usize, edges: F) -> Vec<(NodeId, Weight)>
    where
        F: Fn(NodeId) -> I,
        I: Iterator<Item = &'e (NodeId, Weight)>,
    {
        self.dist[source] = 0;
        self.touched.push(source);
        self.frontier.push(source);
        for _ in 0..h {
            for &x in &self.frontier {
                let dx = self.dist[x];
                for &(y, w) in edges(x) {
                    let nd = dist_add(dx, w);
                    if nd < self.dist[y] {
                        self.updates.push((y, nd));
                    }
                }
            }
            self.frontier.clear();
            for &(y, nd) in &self.updates {
                if nd < self.dist[y] {
                    if self.dist[y] == INF {
                        self.touched.push(y);
                    }
                    self.dist[y] = nd;
                    self.frontier.push(y);
                }
            }
            self.updates.clear();
            if self.frontier.is_empty() {
                break;
            }
            self.frontier.sort_unstable();
            self.frontier.dedup();
        }
        let mut found: Vec<(Weight, NodeId)> = self.touched.iter().map(|&v| (self.dist[v], v)).collect();
        if found.len() > k {
            found.select_nth_unstable(k);
            found.truncate(k);
        }
        found.sort_unstable();
        for &v in &self.touched {
            self.dist[v] = INF;
        }
        self.touched.clear();
        self.frontier.clear();
        found.into_iter().map(|(w, v)| (v, w)).collect()
    }
}

fn check_input(a: &TropicalMatrix, h: usize, k: usize, c_k: f64) -> Result<()> {
    if h < 1 || k < 1 {
        return Err(Error::PreconditionViolated(format!(
            "hop parameter {h} and width {k} must be positive"
        )));
    }
    let n = a.n();
    let limit = c_k * libm::pow(n as f64, 1.0 / h as f64);
    if k as f64 > limit + 1e-9 {
        return Err(Error::PreconditionViolated(format!(
            "width {k} exceeds c_k * n^(1/h) = {limit:.3} for n = {n}, h = {h}"
        )));
    }
    for (u, row) in a.rows().iter().enumerate() {
        if let Some(&(v, _)) = row.iter().find(|&&(v, w)| w == 0 && v != u) {
            return Err(Error::PreconditionViolated(format!(
                "zero-weight entry ({u}, {v}) off the diagonal"
            )));
        }
    }
    Ok(())
}

/// One round of filtered exponentiation: returns the filter of `A^h`.
pub fn knearest_one_iter(
    a: &TropicalMatrix,
    h: usize,
    k: usize,
    c_k: f64,
    ledger: &mut RoundLedger,
) -> Result<FilteredMatrix> {
    check_input(a, h, k, c_k)?;
    let n = a.n();
    // Step 1: local filtering
    let lists: Vec<Vec<(NodeId, Weight)>> = a.rows().iter().map(|r| keep_smallest(r, k)).collect();
    if h == 1 {
        return Ok(FilteredMatrix {
            base: TropicalMatrix::from_rows(n, lists),
            k,
        });
    }
    let layout = BinLayout::new(n, h, k);
    let rows = if layout.is_degenerate() {
        let words = lists.iter().map(|l| l.len() as u64).sum();
        ledger.broadcast("knearest-all-lists", words);
        let mut search = HopSearch::new(n);
        (0..n)
            .map(|u| search.top_k(u, h, k, |x| lists[x].iter()))
            .collect()
    } else {
        binned_rows(&lists, &layout, knearest_quota(c_k), ledger)?
    };
    Ok(FilteredMatrix {
        base: TropicalMatrix::from_rows(n, rows),
        k,
    })
}

fn binned_rows(
    lists: &[Vec<(NodeId, Weight)>],
    layout: &BinLayout,
    quota: u64,
    ledger: &mut RoundLedger,
) -> Result<Vec<Vec<(NodeId, Weight)>>> {
    let (n, k, h) = (layout.n, layout.k, layout.h);
    let combos = layout.combinations();
    debug_assert!(combos.len() <= n);
    let slots_of = |u: NodeId| (u * k, u * k + lists[u].len());

    // Step 3a: each combination node asks the owners of its bins for their segments.
    let mut requests: MessageBatch<usize> = MessageBatch::new();
    for (c, bins) in combos.iter().enumerate() {
        for &b in bins {
            let (lo, hi) = (layout.bounds[b], layout.bounds[b + 1]);
            if lo == hi {
                continue;
            }
            for owner in lo / k..=(hi - 1) / k {
                let (s, e) = slots_of(owner);
                let (from, to) = (lo.max(s), hi.min(e));
                if from < to {
                    requests.send(c, owner, vec![from - s, to - s]);
                }
            }
        }
    }
    let asked = ledger.route_validated("knearest-request", requests, ledger.quota_c())?;

    // Step 3b: owners send the requested parts of their lists.
    let mut segments: MessageBatch<(NodeId, Weight)> = MessageBatch::new();
    for (owner, inbox) in asked.iter().enumerate() {
        for m in inbox {
            let (from, to) = (m.payload[0], m.payload[1]);
            segments.send(owner, m.src, Cow::Borrowed(&lists[owner][from..to]));
        }
    }
    let held = ledger.route_validated("knearest-bins", segments, quota)?;

    // Step 4: sources query the combinations whose first bin meets their list.
    let mut first_bin_of: Vec<Vec<usize>> = vec![Vec::new(); layout.p];
    for (c, bins) in combos.iter().enumerate() {
        first_bin_of[bins[0]].push(c);
    }
    let mut queries: MessageBatch<NodeId> = MessageBatch::new();
    for u in 0..n {
        let (s, e) = slots_of(u);
        if s == e {
            continue;
        }
        for b in layout.bins_of_range(s, e) {
            for &c in &first_bin_of[b] {
                queries.send(u, c, vec![u]);
            }
        }
    }
    let queried = ledger.route_validated("knearest-query", queries, ledger.quota_c())?;

    let mut answers: MessageBatch<(NodeId, Weight)> = MessageBatch::new();
    let mut search = HopSearch::new(n);
    let mut known: Vec<[&[(NodeId, Weight)]; 2]> = vec![[&[], &[]]; n];
    for c in 0..combos.len() {
        for m in &held[c] {
            let slot = &mut known[m.src];
            if slot[0].is_empty() {
                slot[0] = &m.payload;
            } else {
                slot[1] = &m.payload;
            }
        }
        for q in &queried[c] {
            let u = q.payload[0];
            let best = search.top_k(u, h, k, |x| known[x][0].iter().chain(known[x][1].iter()));
            answers.send(c, u, best);
        }
        for m in &held[c] {
            known[m.src] = [&[], &[]];
        }
    }
    let replies = ledger.route_validated("knearest-answer", answers, quota)?;

    Ok(replies
        .iter()
        .map(|inbox| {
            let mut best: Vec<(NodeId, Weight)> = inbox.iter().flat_map(|m| m.payload.iter().copied()).collect();
            best.sort_unstable();
            best.dedup_by_key(|e| e.0);
            keep_smallest(&best, k)
        })
        .collect())
}

/// `i` successive rounds: returns the filter of `A^(h^i)`.
pub fn knearest_iter(
    a: &TropicalMatrix,
    h: usize,
    k: usize,
    i: u32,
    c_k: f64,
    ledger: &mut RoundLedger,
) -> Result<FilteredMatrix> {
    let mut current = knearest_one_iter(a, h, k, c_k, ledger)?;
    for _ in 1..i {
        current = knearest_one_iter(&current.base, h, k, c_k, ledger)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_graph;
    use crate::graph::{Edge, Graph};
    use crate::matrix::minplus_power;
    use crate::oracle::hhop_distances;

    #[test]
    fn filter_keeps_lowest_ids_on_ties() {
        let a = TropicalMatrix::from_rows(3, vec![vec![(2, 5), (1, 5), (0, 0)], vec![], vec![]]);
        assert_eq!(filter_rows(&a, 2).base.row(0), &[(0, 0), (1, 5)]);
        assert_eq!(filter_rows(&a, 9).base, a);
    }

    #[test]
    fn combination_layout() {
        let l = BinLayout::new(4096, 2, 64);
        assert_eq!(l.p, 32);
        assert_eq!(l.combination_count(), 32 * 31);
        let c = l.combinations();
        assert_eq!(c.len(), 992);
        assert_eq!(c[0], vec![0, 1]);
        assert_eq!(c[31], vec![1, 0]);
        let l3 = BinLayout::new(4096, 3, 16);
        assert_eq!(l3.p, 12);
        assert!(l3.combination_count() <= 4096);
        let c3 = l3.combinations();
        assert_eq!(c3.len(), l3.combination_count());
        assert!(c3.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn path_two_hops() {
        let g = Graph::undirected(5, (0..4).map(|i| Edge::new(i, i + 1, 1))).unwrap();
        let a = TropicalMatrix::adjacency(&g);
        let mut l = RoundLedger::standard(5);
        let out = knearest_one_iter(&a, 2, 2, 1.0, &mut l).unwrap();
        assert_eq!(out, filter_rows(&hhop_distances(&g, 2), 2));
        assert_eq!(out.base.row(0), &[(0, 0), (1, 1)]);
    }

    #[test]
    fn one_hop_is_filter() {
        let g = gen_graph(&"er:16:0.4:w=1-9".parse().unwrap(), 2).unwrap();
        let a = TropicalMatrix::adjacency(&g);
        let out = knearest_one_iter(&a, 1, 3, 1.0, &mut RoundLedger::standard(16)).unwrap();
        assert_eq!(out, filter_rows(&a, 3));
    }

    #[test]
    fn binned_matches_power() {
        for seed in 0..4 {
            let g = gen_graph(&"er:64:0.15:w=1-40".parse().unwrap(), seed).unwrap();
            let a = TropicalMatrix::adjacency(&g.as_directed());
            let mut l = RoundLedger::standard(64);
            assert!(!BinLayout::new(64, 2, 8).is_degenerate());
            let out = knearest_iter(&a, 2, 8, 2, 1.0, &mut l).unwrap();
            assert_eq!(out, filter_rows(&minplus_power(&a, 4), 8), "seed {seed}");
            assert_eq!(l.total_rounds(), 8);
        }
    }

    #[test]
    fn rejects_wide_filters() {
        let a = TropicalMatrix::identity(16);
        assert!(matches!(
            knearest_one_iter(&a, 2, 5, 1.0, &mut RoundLedger::standard(16)),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
