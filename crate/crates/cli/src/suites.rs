//! Invariant suites run by `clique-apsp audit`.
//!
//! Each suite compares a library routine with an independent brute-force
//! computation and reports the first counterexample it finds.

use anyhow::Result;
use clique_apsp::hopset::{approx_knearest_sets, build_hopset, verify_hopset, HopsetViolation};
use clique_apsp::knearest::filter_rows;
use clique_apsp::matrix::minplus_power;
use clique_apsp::oracle::{exact_apsp, hhop_distances, knearest_oracle};
use clique_apsp::pipeline::{combine_scaled, scale_weights};
use clique_apsp::primitives::logn_apsp;
use clique_apsp::skeleton::{build_skeleton, lift_skeleton_apsp};
use clique_apsp::{
    gen_graph, DistanceEstimate, Edge, Graph, GraphSpec, LocalEstimate, PipelineConfig, RoundLedger,
    TropicalMatrix, Weight, INF,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Filter,
    Hopset,
    Skeleton,
    Scaling,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Filter, Suite::Hopset, Suite::Skeleton, Suite::Scaling];
}

/// Deliberate faults for checking that a suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Adds a hopset edge one unit shorter than the true distance.
    UnderweightHopset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Largest graph or matrix size.
    pub n: usize,
    /// Largest power in the filter suite.
    pub i: u32,
    /// Largest filter width in the filter suite.
    pub k: usize,
    /// Instances per suite.
    pub cases: u32,
    pub fault: Option<Fault>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 32,
            i: 4,
            k: 6,
            cases: 20,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
    pub counterexample: Option<String>,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteResult> {
    let outcome = match suite {
        Suite::Filter => filter_suite(opts),
        Suite::Hopset => hopset_suite(opts),
        Suite::Skeleton => skeleton_suite(opts),
        Suite::Scaling => scaling_suite(opts),
    }?;
    Ok(match outcome {
        Ok((cases, detail)) => SuiteResult {
            suite,
            passed: true,
            cases,
            detail,
            counterexample: None,
        },
        Err((cases, counterexample)) => SuiteResult {
            suite,
            passed: false,
            cases,
            detail: "counterexample found".into(),
            counterexample: Some(counterexample),
        },
    })
}

/// `Ok((cases, summary))` on success, `Err((cases, counterexample))` on failure.
type Outcome = Result<std::result::Result<(u64, String), (u64, String)>>;

fn graph(desc: &str, seed: u64) -> Result<Graph> {
    let spec: GraphSpec = desc.parse()?;
    Ok(gen_graph(&spec, seed)?)
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, max_w: u64, seed: u64) -> Result<Graph> {
    let n = rng.gen_range(16.min(max_n)..=max_n.max(2));
    let desc = if rng.gen_bool(0.5) {
        format!("er:{n}:{:.4}:w=1-{max_w}", (4.0 / n as f64).min(1.0))
    } else {
        format!("rgg:{n}:0.3:w=1-{max_w}")
    };
    graph(&desc, seed)
}

fn dense_power_filtered(a: &[Vec<Weight>], i: u32, k: usize) -> Vec<Vec<(usize, Weight)>> {
    let n = a.len();
    let mut p = a.to_vec();
    for _ in 1..i {
        let mut next = vec![vec![INF; n]; n];
        for r in 0..n {
            for m in 0..n {
                if p[r][m] == INF {
                    continue;
                }
                for c in 0..n {
                    if a[m][c] != INF {
                        next[r][c] = next[r][c].min(p[r][m] + a[m][c]);
                    }
                }
            }
        }
        p = next;
    }
    p.iter()
        .map(|row| {
            let mut v: Vec<(usize, Weight)> =
                row.iter().enumerate().filter(|e| *e.1 != INF).map(|(c, &w)| (c, w)).collect();
            v.sort_by_key(|&(c, w)| (w, c));
            v.truncate(k);
            v.sort_by_key(|&(c, _)| c);
            v
        })
        .collect()
}

/// Filtering before or after exponentiation gives the same matrix.
fn filter_suite(opts: &SuiteOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = 0;
    for m in 0..opts.cases.max(1) * 10 {
        let n = rng.gen_range(2..=opts.n.max(2));
        let density = rng.gen_range(0.05..0.5);
        let dense: Vec<Vec<Weight>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| match (r == c, rng.gen_bool(density)) {
                        (true, _) => 0,
                        (false, true) => rng.gen_range(1..=20),
                        (false, false) => INF,
                    })
                    .collect()
            })
            .collect();
        let rows = dense
            .iter()
            .map(|row| row.iter().enumerate().filter(|e| *e.1 != INF).map(|(c, &w)| (c, w)).collect())
            .collect();
        let a = TropicalMatrix::from_rows(n, rows);
        for i in 1..=opts.i.max(1) {
            for k in 1..=opts.k.max(1) {
                let lhs = filter_rows(&minplus_power(&filter_rows(&a, k).base, i), k);
                let rhs = dense_power_filtered(&dense, i, k);
                cases += 1;
                if let Some(r) = (0..n).find(|&r| lhs.base.row(r) != rhs[r].as_slice()) {
                    return Ok(Err((cases, format!("matrix {m} (n={n}) i={i} k={k}: row {} differs", r + 1))));
                }
            }
        }
    }
    Ok(Ok((cases, format!("filter of A^i equals filter of (filtered A)^i, i <= {}, k <= {}", opts.i, opts.k))))
}

fn inject_underweight(g: &Graph, exact: &DistanceEstimate, edges: &mut Vec<Edge>) -> Option<(usize, usize)> {
    let n = g.n();
    let (mut best, mut pair) = (1, None);
    for u in 0..n {
        for v in 0..n {
            let d = exact.get(u, v);
            if d != INF && d > best {
                best = d;
                pair = Some((u, v));
            }
        }
    }
    let (u, v) = pair?;
    edges.push(Edge::new(u, v, best - 1));
    edges.sort_by_key(|e| (e.u, e.v));
    Some((u, v))
}

/// Hopsets built from exact and bootstrap estimates satisfy the contract.
fn hopset_suite(opts: &SuiteOptions) -> Outcome {
    let cfg = PipelineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = 0;
    for c in 0..opts.cases.max(1) {
        let seed = opts.seed.wrapping_add(c as u64);
        let g = random_graph(&mut rng, opts.n.max(16), 30, seed)?;
        let exact = exact_apsp(&g);
        let approx = logn_apsp(&g, cfg.alpha, cfg.c_sp, seed, &mut RoundLedger::standard(g.n()))?;
        for delta in [&exact, &approx] {
            let mut h = build_hopset(&g, delta, &mut RoundLedger::standard(g.n()))?;
            if opts.fault == Some(Fault::UnderweightHopset) {
                inject_underweight(&g, &exact, &mut h.edges);
            }
            cases += 1;
            if let Err(v) = verify_hopset(&g, &h, h.k, h.beta_bound) {
                let what = match v {
                    HopsetViolation::Distance { u, v, expected, found } => {
                        format!("distance ({}, {}) is {found} in G+H, {expected} in G", u + 1, v + 1)
                    }
                    HopsetViolation::Hops { u, v, expected, found } => format!(
                        "pair ({}, {}) needs more than {} hops: {found} vs {expected}",
                        u + 1,
                        v + 1,
                        h.beta_bound
                    ),
                };
                return Ok(Err((cases, format!("graph {c} (n={}), a={}: {what}", g.n(), delta.claimed_factor()))));
            }
        }
    }
    Ok(Ok((cases, "distances preserved and k-nearest reachable within beta hops".into())))
}

/// Pairwise inflation of exact distances by a factor in `[1, a]`.
fn inflate(exact: &DistanceEstimate, a: f64, rng: &mut ChaCha8Rng) -> DistanceEstimate {
    let n = exact.n();
    let mut out = DistanceEstimate::from_values(n, exact.values().to_vec(), a);
    for u in 0..n {
        for v in u + 1..n {
            let d = exact.get(u, v);
            if d != INF {
                let w = ((d as f64 * rng.gen_range(1.0..=a)) as Weight).max(d);
                out.set(u, v, w);
                out.set(v, u, w);
            }
        }
    }
    out
}

/// Lifting an exact skeleton APSP stays within `7 a^2`.
fn skeleton_suite(opts: &SuiteOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = 0;
    for c in 0..opts.cases.max(1) {
        let seed = opts.seed.wrapping_add(c as u64);
        let g = random_graph(&mut rng, opts.n.max(16), 50, seed)?;
        let n = g.n();
        let exact = exact_apsp(&g);
        let k = (n as f64).sqrt() as usize;
        let exact_local = LocalEstimate::from_knearest(&knearest_oracle(&g, k, None), 1.0);
        let full = inflate(&exact, 2.0, &mut rng);
        let ranked_local = LocalEstimate::restrict(&full, &approx_knearest_sets(&full, k));
        for (delta, bound) in [(exact_local, 7.0), (ranked_local, 28.0)] {
            let mut l = RoundLedger::standard(n);
            let sk = build_skeleton(&g, &delta, k, seed, &mut l, None)?;
            let eta = lift_skeleton_apsp(&exact_apsp(&sk.graph), &sk, &delta, &mut l)?;
            let audit = eta.audit(&exact);
            cases += 1;
            if !audit.within(bound) {
                return Ok(Err((cases, format!("graph {c} (n={n}), bound {bound}: {audit:?}"))));
            }
        }
    }
    Ok(Ok((cases, "ratio within 7 (exact candidates) and 28 (a = 2)".into())))
}

/// Scaled estimates are sound everywhere and within `1 + eps` on pairs
/// with an `h`-hop shortest path.
fn scaling_suite(opts: &SuiteOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = 0;
    for c in 0..opts.cases.max(1) {
        let seed = opts.seed.wrapping_add(c as u64);
        let g = random_graph(&mut rng, opts.n.max(16), 2000, seed)?;
        let n = g.n();
        let exact = exact_apsp(&g);
        for eps in [0.1, 0.5, 1.0] {
            for h in [2u64, 4] {
                let family = scale_weights(&g, h, eps, exact.max_finite());
                let inner: Vec<_> = family.graphs.iter().map(exact_apsp).collect();
                let eta = combine_scaled(&family, &inner, &exact)?;
                let hop = hhop_distances(&g, h as u32);
                cases += 1;
                for u in 0..n {
                    for v in 0..n {
                        let (d, e) = (exact.get(u, v), eta.get(u, v));
                        let short = d != INF && d > 0 && hop.get(u, v) == d;
                        if e < d || (short && e as f64 >= (1.0 + eps) * d as f64) {
                            return Ok(Err((
                                cases,
                                format!("graph {c} eps {eps} h {h}: pair ({}, {}) estimate {e}, distance {d}", u + 1, v + 1),
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(Ok((cases, "sound, and below (1 + eps) d on h-hop pairs".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteOptions {
        SuiteOptions {
            cases: 3,
            n: 24,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn all_suites_pass() {
        for suite in Suite::ALL {
            let r = run_suite(suite, &small()).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn underweight_fault_is_caught() {
        let opts = SuiteOptions {
            fault: Some(Fault::UnderweightHopset),
            ..small()
        };
        let r = run_suite(Suite::Hopset, &opts).unwrap();
        assert!(!r.passed);
        assert!(r.counterexample.unwrap().contains("in G+H"));
    }
}
