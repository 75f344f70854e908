use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hyperspan::additive_eft::{build_additive_eft, AdditiveAlgo, SurplusBound};
use hyperspan::baseline::{lifted_additive2, lifted_greedy, peeloff_eft};
use hyperspan::bench::{self, BenchConfig, Grid, Suite};
use hyperspan::eftcluster::{self, Params};
use hyperspan::instances::{high_girth_best, lowerbound_family, random_hypergraph, AdversaryIndex, RandomSpec};
use hyperspan::verify::{verify_add, verify_mult, Mode, VerifyOptions};
use hyperspan::{FaultSet, Hypergraph};

#[derive(Parser)]
#[command(name = "hyperspan", version, about = "Fault-tolerant hypergraph spanners")]
struct Cli {
    /// Worker threads for the verifier.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Build a spanner of an instance.
    Build(BuildArgs),
    /// Check a spanner against its host under faults.
    Verify(VerifyArgs),
    /// Run a scaling benchmark over a parameter grid.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    HighGirth,
    Lowerbound,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    /// Number of hyperedges (random only).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Stretch parameter; high-girth bases get Berge girth >= 2k+2.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Fault budget of the blow-up (lowerbound only).
    #[arg(long)]
    f: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Integer weight range `lo,hi` (random only).
    #[arg(long, default_value = "1,1")]
    weights: String,
    /// Hyperedge sizes drawn from 2..=r instead of exactly r (random only).
    #[arg(long)]
    mixed: bool,
    /// Rejected draws before the high-girth generator stops.
    #[arg(long, default_value_t = 100)]
    budget: usize,
    /// Independent high-girth runs; the densest is kept.
    #[arg(long, default_value_t = 64)]
    restarts: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    AssocGreedy,
    AssocAdditive,
    Peeloff,
    Cluster,
    AdditiveEft,
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    f: usize,
    /// Required for the randomized algorithms (cluster, additive-eft).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample_const: Option<usize>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Where to write build statistics.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Mult,
    Add,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    kind: VerifyKind,
    /// Multiplicative stretch bound.
    #[arg(long, required_if_eq("kind", "mult"))]
    stretch: Option<f64>,
    /// `alpha,mu` of the additive bound f·r·(2α + (μ-1)·W) + α, with W
    /// the heaviest hyperedge on each pair's post-failure shortest path.
    #[arg(long, required_if_eq("kind", "add"))]
    alpha_params: Option<String>,
    #[arg(long)]
    f: usize,
    #[arg(long, default_value = "exhaustive")]
    mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// Required for sampled and adversarial modes.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    spanner: PathBuf,
    /// Adversary sidecar whose rows are checked as extra fault sets.
    #[arg(long)]
    faults: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long)]
    suite: Suite,
    /// `n-list,k-list,f-list,r-list`, list entries separated by `/`.
    #[arg(long)]
    grid: Grid,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out_tsv: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, default_value_t = 3)]
    reps: usize,
}

/// Verification ran and found a violation.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for Failed {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.cmd {
        Command::Gen(a) => gen(a),
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a, cli.threads),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Failed>() => {
            eprintln!("hyperspan: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hyperspan: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load(path: &Path) -> Result<Hypergraph> {
    Hypergraph::load(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("{what}: expected two comma-separated values"))?;
    let parse = |x: &str| x.trim().parse::<T>().map_err(|_| anyhow!("{what}: bad value {x:?}"));
    Ok((parse(a)?, parse(b)?))
}

fn gen(a: &GenArgs) -> Result<()> {
    let girth = 2 * a.k + 2;
    match a.kind {
        GenKind::Random => {
            let m = a.m.ok_or_else(|| anyhow!("--m is required for random instances"))?;
            let (lo, hi) = parse_pair::<u32>(&a.weights, "--weights")?;
            let mut spec = RandomSpec::uniform(a.n, m, a.r).weights(lo, hi);
            if a.mixed {
                spec = spec.mixed();
            }
            let h = random_hypergraph(&spec, a.seed)?;
            write(&a.out, &h.to_text())
        }
        GenKind::HighGirth => {
            let h = high_girth_best(a.n, a.r, girth, a.seed, a.budget, a.restarts)?;
            write(&a.out, &h.to_text())
        }
        GenKind::Lowerbound => {
            let f = a.f.ok_or_else(|| anyhow!("--f is required for lowerbound instances"))?;
            let base = high_girth_best(a.n, a.r, girth, a.seed, a.budget, a.restarts)?;
            let (h, adv) = lowerbound_family(&base, f, a.k)?;
            write(&a.out, &h.to_text())?;
            write(&a.out.with_extension("faults"), &adv.to_sidecar())
        }
    }
}

fn build(a: &BuildArgs) -> Result<()> {
    let h = load(&a.input)?;
    let need_seed = || a.seed.ok_or_else(|| anyhow!("--seed is required for this algorithm"));
    let params = || -> Result<Params> {
        let mut p = Params::new(a.k, a.f, need_seed()?)?;
        if let Some(c) = a.sample_const {
            p = p.with_sample_const(c)?;
        }
        Ok(p)
    };
    let (s, stats) = match a.algo {
        Algo::AssocGreedy => {
            let s = lifted_greedy(&h, a.k)?;
            let stats = format!("algo\tassoc-greedy\nk\t{}\nedges\t{}\n", a.k, s.m());
            (s, stats)
        }
        Algo::AssocAdditive => {
            let s = lifted_additive2(&h)?;
            let stats = format!("algo\tassoc-additive\nedges\t{}\n", s.m());
            (s, stats)
        }
        Algo::Peeloff => {
            let p = peeloff_eft(&h, a.k, a.f)?;
            let mut stats = format!("algo\tpeeloff\nk\t{}\nf\t{}\nedges\t{}\n", a.k, a.f, p.spanner.m());
            for (i, round) in p.rounds.iter().enumerate() {
                stats.push_str(&format!("round_{i}\t{}\n", round.len()));
            }
            (p.spanner, stats)
        }
        Algo::Cluster => {
            let (s, stats) = eftcluster::build(&h, &params()?);
            (s, stats.to_tsv())
        }
        Algo::AdditiveEft => {
            if a.sample_const.is_some() {
                bail!("--sample-const is not supported for additive-eft");
            }
            let out = build_additive_eft(&h, a.k, a.f, need_seed()?, AdditiveAlgo::Plus2)?;
            let b = out.bound;
            let stats = format!(
                "{}# alpha={} mu={} bound={} additive_edges={} multiplicative_edges={}\n",
                out.stats.to_tsv(),
                b.alpha,
                b.mu,
                b.value(),
                out.additive_part.len(),
                out.multiplicative_part.len()
            );
            (out.spanner, stats)
        }
    };
    write(&a.out, &s.to_text())?;
    if let Some(path) = &a.stats {
        write(path, &stats)?;
    }
    eprintln!("{} of {} hyperedges kept", s.m(), h.m());
    Ok(())
}

fn verify(a: &VerifyArgs, threads: usize) -> Result<()> {
    let h = load(&a.graph)?;
    let s = h
        .match_subhypergraph(&load(&a.spanner)?)
        .context("spanner is not a sub-hypergraph of the graph")?;
    let seed = match a.mode {
        Mode::Exhaustive => a.seed.unwrap_or(0),
        _ => a.seed.ok_or_else(|| anyhow!("--seed is required for {} mode", a.mode))?,
    };
    let mut extra: Vec<FaultSet> = Vec::new();
    if let Some(path) = &a.faults {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let adv = AdversaryIndex::parse_sidecar(&text)?;
        extra.extend((0..adv.len()).map(|e| adv.faults(e)));
    }
    let opts = VerifyOptions::new(a.mode, seed).budget(a.budget).threads(threads).extra(extra);
    let report = match a.kind {
        VerifyKind::Mult => verify_mult(&h, &s, a.f, a.stretch.expect("required by clap"), &opts)?,
        VerifyKind::Add => {
            let (alpha, mu) = parse_pair::<f64>(a.alpha_params.as_deref().expect("required by clap"), "--alpha-params")?;
            let bound = SurplusBound { f: a.f, r: h.rank(), alpha, mu, w: h.max_weight() };
            verify_add(&h, &s, a.f, |c| bound.for_pair(c.w_st), &opts)?
        }
    };
    match &a.out {
        Some(path) => write(path, &report.to_tsv())?,
        None => print!("{}", report.to_tsv()),
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failed.into())
    }
}

fn run_bench(a: &BenchArgs) -> Result<()> {
    let cfg = BenchConfig { seeds: a.seeds, reps: a.reps, ..BenchConfig::default() };
    let out = bench::run(a.suite, &a.grid, a.seed, &cfg)?;
    let tsv = out.to_tsv();
    match &a.out_tsv {
        Some(path) => write(path, &tsv),
        None => {
            print!("{tsv}");
            Ok(())
        }
    }
}
