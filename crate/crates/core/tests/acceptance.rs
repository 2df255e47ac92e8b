//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p clique-apsp --test acceptance`. The process
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use clique_apsp::hopset::{approx_knearest_sets, build_hopset, verify_hopset};
use clique_apsp::knearest::{filter_rows, knearest_iter};
use clique_apsp::oracle::{exact_apsp, hhop_distances, knearest_oracle};
use clique_apsp::pipeline::{
    combine_scaled, full_apsp, positive_apsp, reduce_approximation, run_pipeline, scale_weights,
};
use clique_apsp::primitives::{compress_zero, lift_compressed, logn_apsp, spanner, SpannerVariant};
use clique_apsp::skeleton::{build_skeleton, lift_skeleton_apsp};
use clique_apsp::{
    gen_graph, matrix::minplus_power, DistanceEstimate, Graph, GraphSpec, LocalEstimate, Mode,
    PipelineConfig, RatioAudit, RoundLedger, TropicalMatrix, Weight, INF,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn graph(desc: &str, seed: u64) -> Graph {
    let spec: GraphSpec = desc.parse().unwrap_or_else(|e| panic!("{desc}: {e}"));
    gen_graph(&spec, seed).unwrap_or_else(|e| panic!("{desc}: {e}"))
}

/// The five topology families at size `n`, weights 1..=50.
fn families(n: usize) -> Vec<String> {
    let p = (4.0 / n as f64).min(1.0);
    let r = (1.5 * ((n as f64).ln() / (std::f64::consts::PI * n as f64)).sqrt()).min(1.0);
    vec![
        format!("path:{n}:w=1-50"),
        format!("star:{n}:w=1-50"),
        format!("grid:{n}:w=1-50"),
        format!("er:{n}:{p:.4}:w=1-50"),
        format!("rgg:{n}:{r:.4}:w=1-50"),
    ]
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Criteria 1 and 2 share the same runs.
struct SoundnessRun {
    all_modes: RatioAudit,
    full: RatioAudit,
    unsound: Vec<String>,
    over_claim: Vec<String>,
    instances: usize,
}

fn soundness_runs() -> SoundnessRun {
    let cfg = PipelineConfig::default();
    let mut run = SoundnessRun {
        all_modes: RatioAudit::default(),
        full: RatioAudit::default(),
        unsound: Vec::new(),
        over_claim: Vec::new(),
        instances: 0,
    };
    let modes = [
        (Mode::Full, None),
        (Mode::Truncated, Some(1)),
        (Mode::SmallDiameter, None),
        (Mode::LargeBandwidth, None),
        (Mode::Reduce, None),
    ];
    for n in [16, 32, 64, 128, 256] {
        for desc in families(n) {
            for seed in 0..20u64 {
                let g = graph(&desc, seed);
                let exact = exact_apsp(&g);
                run.instances += 1;
                for (mode, t) in modes {
                    let report = run_pipeline(&g, mode, t, &cfg, seed, false)
                        .unwrap_or_else(|e| panic!("{desc} seed {seed} {mode:?}: {e}"));
                    let audit = report.estimate.audit(&exact);
                    if !audit.is_sound() {
                        run.unsound.push(format!("{desc} seed {seed} {mode:?} at {:?}", audit.first_violation));
                    }
                    if audit.max_ratio > report.claimed_factor {
                        run.over_claim.push(format!(
                            "{desc} seed {seed} {mode:?}: {} > {}",
                            audit.max_ratio, report.claimed_factor
                        ));
                    }
                    run.all_modes.merge(&audit);
                    if mode == Mode::Full {
                        run.full.merge(&audit);
                    }
                }
            }
        }
    }
    run
}

fn criterion_1(run: &SoundnessRun) -> Outcome {
    check(run.unsound.is_empty(), || format!("unsound: {:?}", &run.unsound[..run.unsound.len().min(5)]))?;
    Ok(format!(
        "{} instances x 5 modes, {} pairs, 0 violations",
        run.instances, run.all_modes.pairs
    ))
}

fn criterion_2(run: &SoundnessRun) -> Outcome {
    let bound = 2401.0 * 1.1;
    check(run.full.is_sound() && run.full.max_ratio <= bound, || {
        format!("full max ratio {} exceeds {bound}", run.full.max_ratio)
    })?;
    check(run.over_claim.is_empty(), || format!("over claimed factor: {:?}", &run.over_claim[..run.over_claim.len().min(5)]))?;
    Ok(format!(
        "full max ratio {:.3} <= {bound:.1}; every mode within its claimed factor (max {:.3})",
        run.full.max_ratio, run.all_modes.max_ratio
    ))
}

fn expected_beta(a: f64, d: Weight) -> u32 {
    let ln_d = if d <= 1 { 0.0 } else { (d as f64).ln() };
    2 * ((a * ln_d).ceil() as u32 + 1) + 1
}

fn random_small(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(8..=64);
    let desc = if seed % 2 == 0 {
        format!("er:{n}:{:.3}:w=1-30", 3.0 / n as f64)
    } else {
        format!("rgg:{n}:0.3:w=1-30")
    };
    graph(&desc, seed)
}

fn criterion_3() -> Outcome {
    let cfg = PipelineConfig::default();
    let mut checked = 0;
    for seed in 0..50u64 {
        let g = random_small(seed);
        let exact = exact_apsp(&g);
        let mut l = RoundLedger::standard(g.n());
        let approx = logn_apsp(&g, cfg.alpha, cfg.c_sp, seed, &mut l).map_err(|e| e.to_string())?;
        for delta in [&exact, &approx] {
            let h = build_hopset(&g, delta, &mut RoundLedger::standard(g.n())).map_err(|e| e.to_string())?;
            let beta = expected_beta(delta.claimed_factor(), delta.max_finite());
            check(h.beta_bound == beta, || format!("seed {seed}: beta {} vs {beta}", h.beta_bound))?;
            verify_hopset(&g, &h, h.k, beta).map_err(|v| format!("seed {seed} a={}: {v:?}", delta.claimed_factor()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} hopsets verified (exact and logn estimates)"))
}

/// Dense min-plus power with every row filtered to `k` entries at the end.
fn dense_filtered_power(a: &[Vec<Weight>], i: u32, k: usize) -> Vec<Vec<(usize, Weight)>> {
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

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(2..=32);
        let density = rng.gen_range(0.05..0.5);
        let max_w = if seed % 3 == 0 { 3 } else { 40 };
        let mut dense = vec![vec![INF; n]; n];
        for (r, row) in dense.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                if r == c {
                    *slot = 0;
                } else if rng.gen_bool(density) {
                    *slot = rng.gen_range(1..=max_w);
                }
            }
        }
        let rows = dense
            .iter()
            .map(|row| row.iter().enumerate().filter(|e| *e.1 != INF).map(|(c, &w)| (c, w)).collect())
            .collect();
        let a = TropicalMatrix::from_rows(n, rows);
        for i in 1..=4u32 {
            for k in 1..=6usize {
                let lhs = filter_rows(&minplus_power(&filter_rows(&a, k).base, i), k);
                let rhs = dense_filtered_power(&dense, i, k);
                for (r, expected) in rhs.iter().enumerate() {
                    check(lhs.base.row(r) == expected.as_slice(), || {
                        format!("matrix {seed} n={n} i={i} k={k} row {r}")
                    })?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (matrix, i, k) cases equal entrywise"))
}

fn criterion_5() -> Outcome {
    let cfg = PipelineConfig::default();
    for seed in 0..50u64 {
        let g = random_small(100 + seed);
        let n = g.n();
        let delta = logn_apsp(&g, cfg.alpha, cfg.c_sp, seed, &mut RoundLedger::standard(n)).map_err(|e| e.to_string())?;
        let mut l = RoundLedger::standard(n);
        let h = build_hopset(&g, &delta, &mut l).map_err(|e| e.to_string())?;
        let k = h.k;
        let mut i = 1;
        while 2u64.pow(i) < h.beta_bound as u64 {
            i += 1;
        }
        let a = TropicalMatrix::adjacency(&h.union(&g));
        let got = knearest_iter(&a, 2, k, i, cfg.c_k, &mut l).map_err(|e| e.to_string())?;
        let oracle = knearest_oracle(&g, k, None);
        for u in 0..n {
            check(got.ranked_row(u) == oracle.list(u), || format!("seed {seed} n={n} node {u}"))?;
        }
    }
    Ok("50 graphs, every k-nearest list exact".into())
}

/// A symmetric estimate with each pair inflated by a factor in `[1, a]`.
fn synthetic(exact: &DistanceEstimate, a: f64, seed: u64) -> DistanceEstimate {
    let n = exact.n();
    let mut out = DistanceEstimate::from_values(n, exact.values().to_vec(), a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for u in 0..n {
        for v in u + 1..n {
            let d = exact.get(u, v);
            if d != INF {
                let f = rng.gen_range(1.0..=a);
                let w = ((d as f64 * f).floor() as Weight).max(d);
                out.set(u, v, w);
                out.set(v, u, w);
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut exact_worst: f64 = 0.0;
    let mut synth_worst: f64 = 0.0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let n = rng.gen_range(16..=128);
        let desc = if seed % 2 == 0 {
            format!("er:{n}:{:.3}:w=1-50", 4.0 / n as f64)
        } else {
            format!("rgg:{n}:0.25:w=1-50")
        };
        let g = graph(&desc, seed);
        let exact = exact_apsp(&g);
        let k = (n as f64).sqrt() as usize;

        let delta = LocalEstimate::from_knearest(&knearest_oracle(&g, k, None), 1.0);
        let mut l = RoundLedger::standard(n);
        let sk = build_skeleton(&g, &delta, k, seed, &mut l, None).map_err(|e| e.to_string())?;
        let eta = lift_skeleton_apsp(&exact_apsp(&sk.graph), &sk, &delta, &mut l).map_err(|e| e.to_string())?;
        let audit = eta.audit(&exact);
        check(audit.within(7.0), || format!("{desc} seed {seed}: exact-delta audit {audit:?}"))?;
        exact_worst = exact_worst.max(audit.max_ratio);

        let full = synthetic(&exact, 2.0, seed);
        let sets = approx_knearest_sets(&full, k);
        let delta = LocalEstimate::restrict(&full, &sets);
        let sk = build_skeleton(&g, &delta, k, seed, &mut l, None).map_err(|e| e.to_string())?;
        let eta = lift_skeleton_apsp(&exact_apsp(&sk.graph), &sk, &delta, &mut l).map_err(|e| e.to_string())?;
        let audit = eta.audit(&exact);
        check(audit.within(28.0), || format!("{desc} seed {seed}: a=2 audit {audit:?}"))?;
        check(eta.claimed_factor() == 28.0, || format!("claimed {} != 28", eta.claimed_factor()))?;
        synth_worst = synth_worst.max(audit.max_ratio);
    }
    Ok(format!("100 seeds; max ratio {exact_worst:.3} <= 7 (exact), {synth_worst:.3} <= 28 (a = 2)"))
}

fn criterion_7() -> Outcome {
    // weights (3, 1, 203, 7) rounded up to multiples of 10
    let weights = [3u64, 1, 203, 7];
    let original: u64 = weights.iter().sum();
    let rounded: u64 = weights.iter().map(|w| w.div_ceil(10) * 10).sum();
    check(original == 214 && rounded == 240, || format!("illustration gave {original} -> {rounded}"))?;

    let cfg = PipelineConfig::default();
    let mut bounded_pairs = 0u64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        let n = rng.gen_range(16..=64);
        let g = graph(&format!("er:{n}:{:.3}:w=1-2000", 4.0 / n as f64), seed);
        let exact = exact_apsp(&g);
        let approx =
            logn_apsp(&g, cfg.alpha, cfg.c_sp, seed, &mut RoundLedger::standard(n)).map_err(|e| e.to_string())?;
        for eps in [0.1, 0.5, 1.0] {
            for (delta, h) in [(&exact, 2u64), (&exact, 4), (&approx, approx.claimed_factor().ceil() as u64)] {
                let family = scale_weights(&g, h, eps, delta.max_finite());
                let inner: Vec<_> = family.graphs.iter().map(exact_apsp).collect();
                let eta = combine_scaled(&family, &inner, delta).map_err(|e| e.to_string())?;
                let hop = hhop_distances(&g, h as u32);
                for u in 0..n {
                    for v in 0..n {
                        let (d, e) = (exact.get(u, v), eta.get(u, v));
                        check(e >= d, || format!("seed {seed} eps {eps} h {h}: eta({u},{v}) = {e} < {d}"))?;
                        if u != v && d != INF && hop.get(u, v) == d {
                            check((e as f64) < (1.0 + eps) * d as f64, || {
                                format!("seed {seed} eps {eps} h {h}: eta({u},{v}) = {e}, d = {d}")
                            })?;
                            bounded_pairs += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("214 -> 240 reproduced; {bounded_pairs} short-hop pairs below (1 + eps) d, all pairs sound"))
}

fn criterion_8() -> Outcome {
    let c_sp = 8.0;
    let mut size_failures = 0;
    let mut runs = 0;
    let mut max_stretch: f64 = 0.0;
    for k in [2u32, 3, 4] {
        for seed in 0..100u64 {
            let n = 32 + (seed as usize * 13) % 97;
            let p = if seed % 2 == 0 { 0.3 } else { 0.08 };
            let g = graph(&format!("er:{n}:{p}:w=1-100"), seed);
            let s = spanner(&g, k, SpannerVariant::Plain, seed, &mut RoundLedger::standard(n));
            let audit = exact_apsp(&s.as_graph(n)).audit(&exact_apsp(&g));
            check(audit.within((2 * k - 1) as f64), || format!("k={k} seed {seed}: {audit:?}"))?;
            max_stretch = max_stretch.max(audit.max_ratio);
            let budget = c_sp * k as f64 * (n as f64).powf(1.0 + 1.0 / k as f64);
            if s.edges.len() as f64 > budget {
                size_failures += 1;
            }
            runs += 1;
        }
    }
    check(size_failures * 100 <= runs, || format!("{size_failures} of {runs} runs over the size budget"))?;
    Ok(format!("{runs} spanners, max stretch {max_stretch:.3}, {size_failures} size failures"))
}

/// Round-scaling constants, fixed from the measured ledgers.
const C0: u64 = 72;
const C1: u64 = 24;

fn log3_ceil(n: usize) -> u64 {
    (n as f64).log2().log2().log2().ceil() as u64
}

fn criterion_9() -> Outcome {
    let cfg = PipelineConfig::default();
    let mut rounds = Vec::new();
    let mut big = None;
    for n in [64usize, 256, 1024, 4096] {
        let g = graph(&format!("er:{n}:{:.5}:w=1-50", 8.0 / n as f64), 1);
        let mut l = RoundLedger::standard(n);
        full_apsp(&g, &cfg, 1, &mut l).map_err(|e| e.to_string())?;
        let bound = C0 + C1 * log3_ceil(n);
        check(l.total_rounds() <= bound, || format!("n={n}: {} rounds > {bound}", l.total_rounds()))?;
        rounds.push((n, l.total_rounds()));
        if n == 4096 {
            big = Some(g);
        }
    }
    let growth = rounds[3].1 - rounds[0].1;
    check(growth <= C1, || format!("rounds(4096) - rounds(64) = {growth} > {C1}"))?;
    let g = big.unwrap();
    let mut truncated = Vec::new();
    for t in 1..=3u32 {
        let report = run_pipeline(&g, Mode::Truncated, Some(t), &cfg, 1, false).map_err(|e| e.to_string())?;
        let r = report.ledger.total_rounds();
        check(r <= C0 + C1 * t as u64, || format!("t={t}: {r} rounds > {}", C0 + C1 * t as u64))?;
        truncated.push(r);
    }
    Ok(format!("C0={C0} C1={C1}; full {rounds:?}; truncated t=1..3 at 4096: {truncated:?}"))
}

fn criterion_10() -> Outcome {
    let cfg = PipelineConfig::default();
    let mut worst: f64 = 0.0;
    let mut max_overhead = 0;
    let mut compressed = 0;
    for seed in 0..20u64 {
        let n = [16usize, 32, 48, 64][seed as usize % 4];
        let desc = if seed % 2 == 0 {
            format!("er:{n}:{:.3}:w=1-40:z=0.3", 5.0 / n as f64)
        } else {
            format!("grid:{n}:w=1-40:z=0.4")
        };
        let g = graph(&desc, seed);
        let exact = exact_apsp(&g);

        let mut l_full = RoundLedger::standard(n);
        let eta = full_apsp(&g, &cfg, seed, &mut l_full).map_err(|e| e.to_string())?;

        let mut l = RoundLedger::standard(n);
        let zc = compress_zero(&g, &mut l).map_err(|e| e.to_string())?;
        if !zc.is_identity() {
            compressed += 1;
        }
        let mut l_q = RoundLedger::standard(zc.quotient.n());
        let on_quotient = full_apsp(&zc.quotient, &cfg, seed, &mut l_q).map_err(|e| e.to_string())?;
        let lifted = lift_compressed(&on_quotient, &zc, &mut l).map_err(|e| e.to_string())?;
        check(eta.values() == lifted.values(), || format!("{desc} seed {seed}: wrapper and quotient route differ"))?;

        let mut l_inner = RoundLedger::standard(zc.quotient.n());
        positive_apsp(&zc.quotient, &cfg, seed, &mut l_inner, None).map_err(|e| e.to_string())?;
        let overhead = l_full.total_rounds() - l_inner.total_rounds();
        check(overhead <= 4, || format!("{desc} seed {seed}: wrapper overhead {overhead}"))?;
        max_overhead = max_overhead.max(overhead);

        let audit = eta.audit(&exact);
        check(audit.within(2401.0 * 1.1), || format!("{desc} seed {seed}: {audit:?}"))?;
        worst = worst.max(audit.max_ratio);
    }
    check(compressed >= 10, || format!("only {compressed} of 20 graphs had zero-weight clusters"))?;
    Ok(format!("20 graphs ({compressed} with zero clusters) equal pairwise; wrapper overhead <= {max_overhead} rounds; max ratio {worst:.3}"))
}

fn criterion_11() -> Outcome {
    let cfg = PipelineConfig::default();
    let mut summary = Vec::new();
    for a in [4u64, 16] {
        let bound = 15.0 * (a as f64).sqrt();
        let mut worst: f64 = 0.0;
        for seed in 0..12u64 {
            let n = [64usize, 128, 256][seed as usize % 3];
            let desc = if seed % 2 == 0 {
                format!("er:{n}:{:.4}:w=1-10", 6.0 / n as f64)
            } else {
                format!("grid:{n}:w=1-10")
            };
            let g = graph(&desc, seed);
            let exact = exact_apsp(&g);
            let delta = exact.inflated(a);
            let mut l = RoundLedger::standard(n);
            let eta = reduce_approximation(&g, &delta, &cfg, seed, &mut l).map_err(|e| e.to_string())?;
            let audit = eta.audit(&exact);
            check(audit.within(bound), || format!("a={a} {desc} seed {seed}: {audit:?}"))?;
            check(eta.claimed_factor() <= bound, || format!("claimed {} > {bound}", eta.claimed_factor()))?;
            worst = worst.max(audit.max_ratio);
        }
        summary.push(format!("a={a}: max {worst:.3} <= {bound:.0}"));
    }
    Ok(summary.join("; "))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({secs:.1}s): {detail}");
            }
        }
    };

    let start = Instant::now();
    let run = soundness_runs();
    report(1, "soundness", start, criterion_1(&run));
    report(2, "full-pipeline factor", start, criterion_2(&run));
    let steps: [(u32, &str, fn() -> Outcome); 9] = [
        (3, "hopset contract", criterion_3),
        (4, "filter commutation", criterion_4),
        (5, "k-nearest exactness", criterion_5),
        (6, "skeleton lifting", criterion_6),
        (7, "weight scaling", criterion_7),
        (8, "spanner contract", criterion_8),
        (9, "round scaling", criterion_9),
        (10, "zero-weight reduction", criterion_10),
        (11, "factor reduction", criterion_11),
    ];
    for (id, name, f) in steps {
        let start = Instant::now();
        report(id, name, start, f());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
