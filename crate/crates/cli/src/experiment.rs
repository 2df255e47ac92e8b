//! Experiment configuration, pipeline runs and their reports.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clique_apsp::pipeline::run_pipeline;
use clique_apsp::{gen_graph, Graph, GraphSpec, LedgerEntry, Mode, PipelineConfig, PipelineReport, RoundLedger};
use serde::{Deserialize, Serialize};

use crate::edgelist;

/// Where a run's graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    /// A generator descriptor such as `er:256:0.05:w=1-50`.
    Gen(String),
    /// An edge-list file.
    Input(PathBuf),
}

impl GraphSource {
    pub fn load(&self, seed: u64, weight_exponent: u32) -> Result<Graph> {
        match self {
            GraphSource::Gen(desc) => {
                let spec: GraphSpec = desc.parse().with_context(|| format!("generator {desc:?}"))?;
                Ok(gen_graph(&spec, seed)?)
            }
            GraphSource::Input(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                edgelist::read_graph(&text, Some(weight_exponent)).with_context(|| format!("parsing {}", path.display()))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            GraphSource::Gen(d) => d.clone(),
            GraphSource::Input(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub graphs: Vec<GraphSource>,
    pub mode: Mode,
    pub t: Option<u32>,
    pub seed: u64,
    pub reps: u32,
    pub audit: bool,
    pub pipeline: PipelineConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            graphs: Vec::new(),
            mode: Mode::Full,
            t: None,
            seed: 1,
            reps: 1,
            audit: false,
            pipeline: PipelineConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub graph: String,
    pub n: usize,
    pub edges: usize,
    pub mode: Mode,
    pub t: Option<u32>,
    pub seed: u64,
    pub bandwidth_words: u64,
    pub config: PipelineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerJson {
    pub entries: Vec<LedgerEntry>,
    pub total_rounds: u64,
    pub stages: BTreeMap<String, u64>,
    pub quota_c: u64,
}

impl From<&RoundLedger> for LedgerJson {
    fn from(l: &RoundLedger) -> Self {
        Self {
            entries: l.entries().to_vec(),
            total_rounds: l.total_rounds(),
            stages: l.stage_totals().into_iter().collect(),
            quota_c: l.quota_c(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub params: Params,
    pub ledger: LedgerJson,
    pub claimed_factor: f64,
    /// `null` unless the run was audited.
    pub max_ratio: Option<f64>,
    pub soundness_violations: Option<u64>,
    pub runtime: Runtime,
}

/// One CSV row; the column order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub mode: String,
    pub t: Option<u32>,
    pub eps: f64,
    pub seed: u64,
    pub rounds_total: u64,
    pub max_ratio: Option<f64>,
    pub claimed_factor: f64,
    pub wall_ms: f64,
}

impl From<&RunReport> for CsvRow {
    fn from(r: &RunReport) -> Self {
        Self {
            n: r.params.n,
            mode: r.params.mode.name().to_string(),
            t: r.params.t,
            eps: r.params.config.eps,
            seed: r.params.seed,
            rounds_total: r.ledger.total_rounds,
            max_ratio: r.max_ratio,
            claimed_factor: r.claimed_factor,
            wall_ms: r.runtime.wall_ms,
        }
    }
}

fn report(source: &GraphSource, g: &Graph, out: PipelineReport, wall_ms: f64) -> RunReport {
    RunReport {
        params: Params {
            graph: source.label(),
            n: g.n(),
            edges: g.edge_count(),
            mode: out.mode,
            t: out.t,
            seed: out.seed,
            bandwidth_words: out.bandwidth,
            config: out.config,
        },
        ledger: LedgerJson::from(&out.ledger),
        claimed_factor: out.claimed_factor,
        max_ratio: out.audit.map(|a| a.max_ratio),
        soundness_violations: out.audit.map(|a| a.soundness_violations),
        runtime: Runtime { wall_ms },
    }
}

/// Runs every graph for `reps` consecutive seeds starting at `seed`.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<RunReport>> {
    let mut reports = Vec::new();
    for source in &cfg.graphs {
        for rep in 0..cfg.reps.max(1) {
            let seed = cfg.seed.wrapping_add(rep as u64);
            let g = source.load(seed, cfg.pipeline.weight_exponent)?;
            let start = Instant::now();
            let out = run_pipeline(&g, cfg.mode, cfg.t, &cfg.pipeline, seed, cfg.audit)
                .with_context(|| format!("{} seed {seed}", source.label()))?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            reports.push(report(source, &g, out, wall_ms));
        }
    }
    Ok(reports)
}

pub fn write_csv<W: std::io::Write>(w: W, reports: &[RunReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        out.serialize(CsvRow::from(r))?;
    }
    out.flush()?;
    Ok(())
}
