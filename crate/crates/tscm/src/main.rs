//! Command line front end: mine communities, run ego analysis, generate
//! benchmarks and score results.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad flags, malformed or
//! mismatched files, unknown ids), 3 for failures during computation or
//! while writing output. Logging goes to stderr, controlled by `TSCM_LOG`
//! (error, info, debug).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tscm::benchgen::{self, BenchmarkConfig, SubspaceSidecar};
use tscm::eval;
use tscm::metrics::Subspace;
use tscm::netio::{load_network, AttributedNetwork, ValueKind};
use tscm::pipeline::{tscm as mine_two, tscm_multi, MiningResult};
use tscm::targeting::ego_analysis;

#[derive(Parser)]
#[command(
    name = "tscm",
    version,
    about = "Targeted subspace community mining for attributed networks"
)]
struct Cli {
    /// Worker threads for parallel stages; 0 picks the machine default.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine target communities from two or more sample nodes.
    Mine(MineArgs),
    /// Expand one community per neighborhood context of a node.
    Ego(EgoArgs),
    /// Generate a synthetic benchmark with planted communities.
    Genbench(Box<GenbenchArgs>),
    /// Score mining results against benchmark ground truth.
    Eval(EvalArgs),
}

#[derive(Args)]
struct MineArgs {
    /// Edge list file.
    #[arg(long)]
    graph: PathBuf,
    /// Attribute table file.
    #[arg(long)]
    attrs: PathBuf,
    /// Comma-separated sample node ids (at least two).
    #[arg(long, value_delimiter = ',', required = true)]
    samples: Vec<String>,
    /// Redundancy threshold in [0, 1].
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Result JSON path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EgoArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    attrs: PathBuf,
    /// Node id to analyze.
    #[arg(long)]
    node: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Result JSON path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Num,
    Bin,
    Cat,
}

impl From<KindArg> for ValueKind {
    fn from(k: KindArg) -> ValueKind {
        match k {
            KindArg::Num => ValueKind::Numerical,
            KindArg::Bin => ValueKind::Binary,
            KindArg::Cat => ValueKind::Categorical,
        }
    }
}

#[derive(Args)]
struct GenbenchArgs {
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    tau1: f64,
    #[arg(long, default_value_t = 1.0)]
    tau2: f64,
    #[arg(long, default_value_t = 30.0)]
    d_avg: f64,
    #[arg(long, default_value_t = 100)]
    d_max: usize,
    #[arg(long, default_value_t = 40)]
    c_min: usize,
    #[arg(long, default_value_t = 80)]
    c_max: usize,
    /// Fraction of edges leaving their community.
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    /// Total attribute count.
    #[arg(long, default_value_t = 20)]
    r: usize,
    /// Focus attributes per community.
    #[arg(long, default_value_t = 6)]
    t: usize,
    /// Number of target communities.
    #[arg(long, default_value_t = 5)]
    b: usize,
    /// Probability of the characteristic value on focus attributes.
    #[arg(long, default_value_t = 0.9)]
    p: f64,
    /// Attribute kind for the whole table.
    #[arg(long, value_enum, default_value_t = KindArg::Num)]
    kind: KindArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output prefix; writes <prefix>.edges, .attrs, .truth and
    /// .subspaces.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Ground-truth communities, one space-separated line each.
    #[arg(long)]
    truth: PathBuf,
    /// Planted subspace sidecar JSON.
    #[arg(long)]
    truth_subspace: PathBuf,
    /// Mining result JSON; repeat for a mean/stddev summary.
    #[arg(long, required = true)]
    result: Vec<PathBuf>,
    /// Report JSON path; stdout lines only when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn validation(e: impl ToString) -> Self {
        CliError::Validation(e.to_string())
    }

    fn runtime(e: impl ToString) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct CommunityOut {
    /// External ids, sorted lexicographically.
    members: Vec<String>,
    fitness: f64,
}

#[derive(Serialize, Deserialize)]
struct MetaOut {
    seed: u64,
    elapsed_ms: u128,
    seed_count: usize,
    expanded_count: usize,
    kept_count: usize,
    notes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MineOut {
    subspace: Vec<f64>,
    exemplars: Vec<String>,
    communities: Vec<CommunityOut>,
    meta: MetaOut,
}

#[derive(Serialize, Deserialize)]
struct EgoPairOut {
    subspace: Vec<f64>,
    community: CommunityOut,
}

#[derive(Serialize)]
struct EvalTrialOut {
    result: String,
    ss: f64,
    qi: Vec<f64>,
    q: f64,
}

#[derive(Serialize)]
struct EvalSummaryOut {
    trials: Vec<EvalTrialOut>,
    mean_ss: f64,
    std_ss: f64,
    mean_q: f64,
    std_q: f64,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("TSCM_LOG", "error"))
        .init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(CliError::runtime)?;
    pool.install(|| match cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::Ego(args) => cmd_ego(args),
        Command::Genbench(args) => cmd_genbench(*args),
        Command::Eval(args) => cmd_eval(args),
    })
}

fn load(graph: &Path, attrs: &Path) -> Result<AttributedNetwork, CliError> {
    load_network(graph, attrs).map_err(CliError::validation)
}

fn resolve(net: &AttributedNetwork, id: &str) -> Result<usize, CliError> {
    net.node_index(id)
        .ok_or_else(|| CliError::Validation(format!("unknown node id {id:?}")))
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(CliError::runtime)?;
    match out {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            w.write_all(text.as_bytes())
                .and_then(|_| w.write_all(b"\n"))
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn community_out(net: &AttributedNetwork, c: &tscm::expansion::Community) -> CommunityOut {
    let mut members: Vec<String> = c.members().iter().map(|&v| net.id(v).to_string()).collect();
    members.sort();
    CommunityOut {
        members,
        fitness: c.fitness(),
    }
}

fn cmd_mine(args: MineArgs) -> Result<(), CliError> {
    if args.samples.len() < 2 {
        return Err(CliError::Validation(format!(
            "need at least two sample nodes, got {}",
            args.samples.len()
        )));
    }
    if !(0.0..=1.0).contains(&args.beta) {
        return Err(CliError::Validation(format!(
            "beta must lie in [0, 1], got {}",
            args.beta
        )));
    }
    let net = load(&args.graph, &args.attrs)?;
    let mut samples = Vec::with_capacity(args.samples.len());
    for id in &args.samples {
        let v = resolve(&net, id)?;
        if samples.contains(&v) {
            return Err(CliError::Validation(format!(
                "duplicate sample node {id:?}"
            )));
        }
        samples.push(v);
    }

    let result: MiningResult = if samples.len() == 2 {
        mine_two(&net, samples[0], samples[1], args.beta, args.seed)
    } else {
        tscm_multi(&net, &samples, args.beta, args.seed)
    }
    .map_err(CliError::runtime)?;

    let mut exemplars: Vec<String> = result
        .exemplars
        .iter()
        .map(|&v| net.id(v).to_string())
        .collect();
    exemplars.sort();
    let out = MineOut {
        subspace: result.subspace.weights().to_vec(),
        exemplars,
        communities: result
            .communities
            .iter()
            .map(|c| community_out(&net, c))
            .collect(),
        meta: MetaOut {
            seed: result.meta.rng_seed,
            elapsed_ms: result.meta.elapsed_ms,
            seed_count: result.meta.seed_count,
            expanded_count: result.meta.expanded_count,
            kept_count: result.meta.kept_count,
            notes: result.meta.notes.clone(),
        },
    };
    write_json(&out, args.out.as_deref())
}

fn cmd_ego(args: EgoArgs) -> Result<(), CliError> {
    let net = load(&args.graph, &args.attrs)?;
    let v = resolve(&net, &args.node)?;
    let pairs = ego_analysis(&net, v, args.seed).map_err(CliError::runtime)?;
    let out: Vec<EgoPairOut> = pairs
        .iter()
        .map(|(l, c)| EgoPairOut {
            subspace: l.weights().to_vec(),
            community: community_out(&net, c),
        })
        .collect();
    write_json(&out, args.out.as_deref())
}

fn cmd_genbench(args: GenbenchArgs) -> Result<(), CliError> {
    let cfg = BenchmarkConfig {
        tau1: args.tau1,
        tau2: args.tau2,
        n: args.n,
        d_avg: args.d_avg,
        d_max: args.d_max,
        c_min: args.c_min,
        c_max: args.c_max,
        mu: args.mu,
        r: args.r,
        t: args.t,
        b: args.b,
        p: args.p,
        attr_kind: args.kind.into(),
        rng_seed: args.seed,
    };
    let instance = benchgen::generate(&cfg).map_err(CliError::validation)?;
    let files = instance.save(&args.out).map_err(CliError::runtime)?;
    println!(
        "wrote {} nodes, {} edges, {} communities ({} targets)",
        instance.network.node_count(),
        instance.network.edge_count(),
        instance.ground_truth.len(),
        instance.target_ids.len()
    );
    for path in [
        &files.edges,
        &files.attributes,
        &files.truth,
        &files.subspaces,
    ] {
        println!("  {}", path.display());
    }
    Ok(())
}

fn load_truth_ids(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let f = File::open(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let ids: Vec<String> = line.split_whitespace().map(|s| s.to_string()).collect();
        if !ids.is_empty() {
            out.push(ids);
        }
    }
    if out.is_empty() {
        return Err(CliError::Validation(format!(
            "{} contains no communities",
            path.display()
        )));
    }
    Ok(out)
}

/// Maps external ids onto dense indices shared by truth and results.
#[derive(Default)]
struct Interner {
    map: HashMap<String, usize>,
}

impl Interner {
    fn get(&mut self, id: &str) -> usize {
        let next = self.map.len();
        *self.map.entry(id.to_string()).or_insert(next)
    }

    fn set(&mut self, ids: &[String]) -> Vec<usize> {
        let mut v: Vec<usize> = ids.iter().map(|s| self.get(s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let truth_ids = load_truth_ids(&args.truth)?;
    let sidecar = SubspaceSidecar::load(&args.truth_subspace).map_err(CliError::validation)?;
    if sidecar.target_ids.is_empty() {
        return Err(CliError::Validation(format!(
            "{} lists no target communities",
            args.truth_subspace.display()
        )));
    }
    for &ti in &sidecar.target_ids {
        if ti >= truth_ids.len() {
            return Err(CliError::Validation(format!(
                "target community {ti} is out of range for {} communities",
                truth_ids.len()
            )));
        }
    }
    let planted_raw = &sidecar.subspaces[sidecar.target_ids[0]];
    let planted = Subspace::from_unnormalized(planted_raw)
        .map_err(|e| CliError::Validation(format!("planted subspace: {e}")))?;

    let mut interner = Interner::default();
    let targets: Vec<Vec<usize>> = sidecar
        .target_ids
        .iter()
        .map(|&ti| interner.set(&truth_ids[ti]))
        .collect();

    let mut trials = Vec::new();
    for path in &args.result {
        let f = File::open(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let parsed: MineOut = serde_json::from_reader(BufReader::new(f))
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        if parsed.subspace.len() != sidecar.attribute_count {
            return Err(CliError::Validation(format!(
                "{}: subspace has {} weights but the benchmark has {} attributes",
                path.display(),
                parsed.subspace.len(),
                sidecar.attribute_count
            )));
        }
        let mined = Subspace::from_unnormalized(&parsed.subspace)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let detected: Vec<Vec<usize>> = parsed
            .communities
            .iter()
            .map(|c| interner.set(&c.members))
            .collect();
        let report = eval::report(&mined, &planted, &targets, &detected)
            .map_err(CliError::runtime)?;
        println!("SS={:.6} Q={:.6}", report.ss, report.q);
        trials.push(EvalTrialOut {
            result: path.display().to_string(),
            ss: report.ss,
            qi: report.qi,
            q: report.q,
        });
    }

    if trials.len() == 1 {
        let single = eval::EvalReport {
            ss: trials[0].ss,
            qi: trials[0].qi.clone(),
            q: trials[0].q,
        };
        return write_json(&single, args.out.as_deref());
    }

    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let std = |xs: &[f64], m: f64| {
        (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
    };
    let sss: Vec<f64> = trials.iter().map(|t| t.ss).collect();
    let qs: Vec<f64> = trials.iter().map(|t| t.q).collect();
    let summary = EvalSummaryOut {
        mean_ss: mean(&sss),
        std_ss: std(&sss, mean(&sss)),
        mean_q: mean(&qs),
        std_q: std(&qs, mean(&qs)),
        trials,
    };
    println!(
        "mean SS={:.6} sd={:.6}  mean Q={:.6} sd={:.6}",
        summary.mean_ss, summary.std_ss, summary.mean_q, summary.std_q
    );
    write_json(&summary, args.out.as_deref())
}
