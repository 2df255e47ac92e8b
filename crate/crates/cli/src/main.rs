use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use clique_apsp::hopset::build_hopset;
use clique_apsp::knearest::knearest_iter;
use clique_apsp::primitives::logn_apsp;
use clique_apsp::skeleton::build_skeleton;
use clique_apsp::{Graph, LocalEstimate, Mode, PipelineConfig, RoundLedger, TropicalMatrix};
use clique_apsp_cli::edgelist;
use clique_apsp_cli::experiment::{self, ExperimentConfig, GraphSource};
use clique_apsp_cli::suites::{self, Fault, Suite, SuiteOptions};
use serde::Serialize;

const EXIT_UNSOUND: u8 = 2;
const EXIT_SUITE_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "clique-apsp", version, about = "Approximate APSP in a simulated Congested Clique")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pipeline and write JSON and CSV reports.
    Run(RunArgs),
    /// Run invariant suites against brute-force oracles.
    Audit(AuditArgs),
    /// Write a generated graph in edge-list format.
    Gen(GenArgs),
    /// Export an intermediate structure in edge-list format.
    Export(ExportArgs),
    /// Print the default experiment configuration as JSON.
    Config,
}

#[derive(Args)]
struct GraphArgs {
    /// Generator descriptor, e.g. `er:256:0.05:w=1-50`. Repeatable.
    #[arg(long = "gen")]
    gen: Vec<String>,
    /// Edge-list file. Repeatable.
    #[arg(long = "input")]
    input: Vec<PathBuf>,
}

impl GraphArgs {
    fn sources(&self) -> Vec<GraphSource> {
        let gens = self.gen.iter().cloned().map(GraphSource::Gen);
        gens.chain(self.input.iter().cloned().map(GraphSource::Input)).collect()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Truncated,
    SmallDiameter,
    LargeBandwidth,
    Reduce,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Truncated => Mode::Truncated,
            ModeArg::SmallDiameter => Mode::SmallDiameter,
            ModeArg::LargeBandwidth => Mode::LargeBandwidth,
            ModeArg::Reduce => Mode::Reduce,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    graphs: GraphArgs,
    /// Experiment configuration JSON; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Truncation parameter for `--mode truncated`.
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, env = "CLIQUE_APSP_SEED")]
    seed: Option<u64>,
    /// Runs per graph, with seeds `seed, seed + 1, ...`.
    #[arg(long)]
    reps: Option<u32>,
    /// Messages of `(log n)^e` bits.
    #[arg(long = "bandwidth-exp")]
    bandwidth_exp: Option<u32>,
    #[arg(long = "quota-c")]
    quota_c: Option<u64>,
    #[arg(long = "weight-exponent")]
    weight_exponent: Option<u32>,
    /// Compare against exact distances.
    #[arg(long)]
    audit: bool,
    /// Directory for `report.json` and `runs.csv`; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format when `--out` is absent.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct AuditArgs {
    /// Suites to run; all when absent.
    #[arg(long, value_enum)]
    suite: Vec<Suite>,
    #[arg(long, env = "CLIQUE_APSP_SEED", default_value_t = 1)]
    seed: u64,
    /// Largest instance size.
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Largest power (filter suite).
    #[arg(long, default_value_t = 4)]
    i: u32,
    /// Largest filter width (filter suite).
    #[arg(long, default_value_t = 6)]
    k: usize,
    /// Instances per suite.
    #[arg(long, default_value_t = 20)]
    cases: u32,
    #[arg(long, value_enum)]
    fault: Option<Fault>,
    /// JSON file for the suite results.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "gen")]
    gen: String,
    #[arg(long, env = "CLIQUE_APSP_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    /// Shortcuts built from the bootstrap estimate.
    Hopset,
    /// Skeleton over the exact `sqrt n`-nearest nodes in `G ∪ H`.
    Skeleton,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(value_enum)]
    kind: ExportKind,
    #[command(flatten)]
    graphs: GraphArgs,
    #[arg(long, env = "CLIQUE_APSP_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn experiment_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => ExperimentConfig::default(),
    };
    let sources = args.graphs.sources();
    if !sources.is_empty() {
        cfg.graphs = sources;
    }
    anyhow::ensure!(!cfg.graphs.is_empty(), "no graph given (use --gen, --input or --config)");
    if let Some(m) = args.mode {
        cfg.mode = m.into();
    }
    if args.t.is_some() {
        cfg.t = args.t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.reps {
        cfg.reps = r;
    }
    cfg.audit |= args.audit;
    let p = &mut cfg.pipeline;
    if let Some(e) = args.eps {
        p.eps = e;
    }
    if args.bandwidth_exp.is_some() {
        p.bandwidth_exponent = args.bandwidth_exp;
    }
    if let Some(q) = args.quota_c {
        p.quota_c = q;
    }
    if let Some(w) = args.weight_exponent {
        p.weight_exponent = w;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct RunOutput<'a> {
    config: &'a ExperimentConfig,
    runs: &'a [experiment::RunReport],
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let cfg = experiment_config(&args)?;
    let reports = experiment::run(&cfg)?;
    let json = serde_json::to_string_pretty(&RunOutput {
        config: &cfg,
        runs: &reports,
    })? + "\n";
    match (&args.out, args.format) {
        (Some(dir), _) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            fs::write(dir.join("report.json"), &json)?;
            experiment::write_csv(fs::File::create(dir.join("runs.csv"))?, &reports)?;
        }
        (None, Format::Json) => write_out(None, &json)?,
        (None, Format::Csv) => experiment::write_csv(std::io::stdout(), &reports)?,
    }
    let unsound: u64 = reports.iter().filter_map(|r| r.soundness_violations).sum();
    if unsound > 0 {
        eprintln!("soundness violations: {unsound}");
        return Ok(ExitCode::from(EXIT_UNSOUND));
    }
    Ok(ExitCode::SUCCESS)
}

fn audit(args: AuditArgs) -> Result<ExitCode> {
    let opts = SuiteOptions {
        seed: args.seed,
        n: args.n,
        i: args.i,
        k: args.k,
        cases: args.cases,
        fault: args.fault,
    };
    let chosen = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite.clone()
    };
    let mut results = Vec::new();
    for suite in chosen {
        let r = suites::run_suite(suite, &opts)?;
        let status = if r.passed { "PASS" } else { "FAIL" };
        let detail = r.counterexample.as_deref().unwrap_or(&r.detail);
        println!("{status} {suite:?} ({} cases): {detail}", r.cases);
        results.push(r);
    }
    if let Some(p) = &args.out {
        write_out(Some(p), &(serde_json::to_string_pretty(&results)? + "\n"))?;
    }
    Ok(if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_SUITE_FAILED)
    })
}

fn single_graph(graphs: &GraphArgs, seed: u64) -> Result<Graph> {
    let sources = graphs.sources();
    anyhow::ensure!(sources.len() == 1, "give exactly one --gen or --input");
    sources[0].load(seed, PipelineConfig::default().weight_exponent)
}

fn export(args: ExportArgs) -> Result<ExitCode> {
    let g = single_graph(&args.graphs, args.seed)?;
    let cfg = PipelineConfig::default();
    let n = g.n();
    let mut ledger = RoundLedger::standard(n);
    let delta = logn_apsp(&g, cfg.alpha, cfg.c_sp, args.seed, &mut ledger)?;
    let hopset = build_hopset(&g, &delta, &mut ledger)?;
    let text = match args.kind {
        ExportKind::Hopset => edgelist::write_hopset(n, &hopset),
        ExportKind::Skeleton => {
            let k = (n as f64).sqrt() as usize;
            let mut i = 1;
            while 2u64.pow(i) < hopset.beta_bound.min(k.saturating_sub(1) as u32).max(1) as u64 {
                i += 1;
            }
            let a = TropicalMatrix::adjacency(&hopset.union(&g));
            let nearest = knearest_iter(&a, 2, k.max(1), i, cfg.c_k, &mut ledger)?;
            let local = LocalEstimate::new((0..n).map(|u| nearest.ranked_row(u)).collect(), 1.0);
            let sk = build_skeleton(&g, &local, k.max(1), args.seed, &mut ledger, None)?;
            edgelist::write_skeleton(&sk)
        }
    };
    write_out(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Audit(a) => audit(a),
        Command::Gen(a) => (|| {
            let g = GraphSource::Gen(a.gen.clone()).load(a.seed, PipelineConfig::default().weight_exponent)?;
            write_out(a.out.as_deref(), &edgelist::write_graph(&g))?;
            Ok(ExitCode::SUCCESS)
        })(),
        Command::Export(a) => export(a),
        Command::Config => serde_json::to_string_pretty(&ExperimentConfig::default())
            .map_err(Into::into)
            .and_then(|s| write_out(None, &(s + "\n")).map(|_| ExitCode::SUCCESS)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
