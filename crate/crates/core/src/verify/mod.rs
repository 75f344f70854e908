//! Brute-force fault oracles.
//!
//! For every fault set `F` the oracle computes all-pairs distances in
//! `H ∖ F` and `S ∖ F` and compares each pair against an allowed bound.
//! Fault sets are independent, so they run on a rayon pool; the merge is
//! order-independent, so reports do not depend on the thread count.

mod replay;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::eftcluster::{self, BuildStats, Params};
use crate::hypercore::{EdgeId, FaultSet, Hypergraph, HypergraphError, Vertex, INF};

pub use replay::{replay_invariants, InvariantKind, InvariantViolation, ReplayReport};

/// Largest number of fault sets exhaustive mode will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("exhaustive mode needs {0} fault sets, above the limit of {EXHAUSTIVE_LIMIT}")]
    ExhaustiveTooLarge(u128),
    #[error("spanner is not a sub-hypergraph of the input")]
    NotSubhypergraph,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Sampled,
    Adversarial,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
            Mode::Adversarial => "adversarial",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            "adversarial" => Ok(Mode::Adversarial),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Random fault sets drawn in sampled and adversarial modes.
    pub budget: usize,
    pub threads: usize,
    /// Extra fault sets checked in every mode.
    pub extra: Vec<FaultSet>,
}

impl VerifyOptions {
    pub fn new(mode: Mode, seed: u64) -> Self {
        VerifyOptions { mode, seed, budget: 10_000, threads: 1, extra: Vec::new() }
    }

    pub fn exhaustive() -> Self {
        Self::new(Mode::Exhaustive, 0)
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn extra(mut self, sets: Vec<FaultSet>) -> Self {
        self.extra = sets;
        self
    }
}

/// One `(F, pair)` comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct FaultVerdict {
    pub fault_set: FaultSet,
    pub pair: (Vertex, Vertex),
    pub d_h: f64,
    pub d_s: f64,
    pub bound: f64,
    pub ok: bool,
}

impl FaultVerdict {
    pub fn new(fault_set: FaultSet, pair: (Vertex, Vertex), d_h: f64, d_s: f64, bound: f64) -> Self {
        let ok = d_s <= bound || (d_s == INF && bound == INF);
        FaultVerdict { fault_set, pair, d_h, d_s, bound, ok }
    }

    /// `d_S / d_H`; `INF` when only `S` is disconnected.
    pub fn ratio(&self) -> f64 {
        ratio(self.d_h, self.d_s)
    }

    /// `d_S - d_H`; `INF` when only `S` is disconnected.
    pub fn surplus(&self) -> f64 {
        surplus(self.d_h, self.d_s)
    }
}

fn ratio(d_h: f64, d_s: f64) -> f64 {
    if d_h == INF || d_h == 0.0 {
        1.0
    } else if d_s == INF {
        INF
    } else {
        d_s / d_h
    }
}

fn surplus(d_h: f64, d_s: f64) -> f64 {
    if d_h == INF {
        0.0
    } else {
        d_s - d_h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Mult,
    Add,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub mode: Mode,
    pub fault_sets_checked: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Largest `d_S / d_H` (multiplicative) or `d_S - d_H` (additive).
    pub worst_ratio: f64,
    /// A violating verdict if there is one, else the one attaining
    /// `worst_ratio`.
    pub worst: Option<FaultVerdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub const TSV_HEADER: &'static str =
        "mode\tfault_sets_checked\tpairs_checked\tviolations\tworst_ratio\tworst_pair\tworst_faults";

    /// Header plus one row. `worst_faults` is `-` for the empty set.
    pub fn to_tsv(&self) -> String {
        let (pair, faults) = match &self.worst {
            Some(v) => {
                let f = v.fault_set.to_string();
                (format!("{},{}", v.pair.0, v.pair.1), if f.is_empty() { "-".to_string() } else { f })
            }
            None => ("-".to_string(), "-".to_string()),
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", Self::TSV_HEADER);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.mode,
            self.fault_sets_checked,
            self.pairs_checked,
            self.violations,
            format_ratio(self.worst_ratio),
            pair,
            faults
        );
        out
    }
}

fn format_ratio(x: f64) -> String {
    if x == INF {
        "inf".to_string()
    } else {
        format!("{x:.4}")
    }
}

/// What an additive bound may depend on.
#[derive(Clone, Copy, Debug)]
pub struct PairContext<'a> {
    pub u: Vertex,
    pub v: Vertex,
    pub faults: &'a FaultSet,
    pub d_h: f64,
    /// Largest hyperedge weight on the witness shortest path in `H ∖ F`.
    pub w_st: f64,
}

/// Checks `δ_{S∖F}(u,v) ≤ stretch · δ_{H∖F}(u,v)` for all pairs and all
/// fault sets selected by `opts`.
pub fn verify_mult(
    h: &Hypergraph,
    s: &Hypergraph,
    f: usize,
    stretch: f64,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    run(h, s, f, opts, Kind::Mult, &|c: PairContext| stretch * c.d_h)
}

/// Checks `δ_{S∖F}(u,v) ≤ δ_{H∖F}(u,v) + surplus(ctx)`.
pub fn verify_add<B>(
    h: &Hypergraph,
    s: &Hypergraph,
    f: usize,
    surplus: B,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError>
where
    B: Fn(PairContext) -> f64 + Sync,
{
    run(h, s, f, opts, Kind::Add, &|c: PairContext| c.d_h + surplus(c))
}

/// Number of fault sets of size at most `f` over `m` hyperedges.
pub fn fault_set_count(m: usize, f: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for j in 0..=f.min(m) {
        total = total.saturating_add(c);
        c = c.saturating_mul((m - j) as u128) / (j + 1) as u128;
    }
    total
}

fn combinations(ids: &[EdgeId], size: usize, out: &mut Vec<FaultSet>) {
    let m = ids.len();
    if size > m {
        return;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(FaultSet::from_sorted(cur.iter().map(|&i| ids[i]).collect()));
        let Some(i) = (0..size).rev().find(|&i| cur[i] < m - size + i) else {
            return;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn random_sets(h: &Hypergraph, f: usize, budget: usize, seed: u64) -> Vec<FaultSet> {
    let ids: Vec<EdgeId> = h.edge_ids().collect();
    let size = f.min(ids.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![FaultSet::empty()];
    for _ in 0..budget {
        let picked = index::sample(&mut rng, ids.len(), size).into_iter().map(|i| ids[i]);
        out.push(FaultSet::new(picked).expect("distinct"));
    }
    out
}

/// Fault sets aimed at hyperedges of `h` missing from `s`: greedy blocking
/// of the shortest `S` path between each pair of a missing hyperedge, and
/// the `S` hyperedges parallel to it.
fn adversarial_sets(h: &Hypergraph, s: &Hypergraph, f: usize) -> Vec<FaultSet> {
    let mut out = Vec::new();
    for e in h.edges() {
        if s.contains_edge(e.id) {
            continue;
        }
        let mut parallel: Vec<&crate::hypercore::Hyperedge> = s
            .edges()
            .iter()
            .filter(|x| x.vertices.iter().filter(|v| e.contains(**v)).count() >= 2)
            .collect();
        parallel.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id)));
        if !parallel.is_empty() {
            out.push(FaultSet::new(parallel.iter().take(f).map(|x| x.id)).expect("distinct"));
        }
        for (a, b) in e.pairs() {
            out.push(block_paths(s, a, b, f));
        }
    }
    out
}

fn block_paths(s: &Hypergraph, a: Vertex, b: Vertex, f: usize) -> FaultSet {
    let mut chosen: Vec<EdgeId> = Vec::new();
    for _ in 0..f {
        let current = FaultSet::new(chosen.iter().copied()).expect("distinct");
        let Some(path) = s.shortest_path(&current, a, b).expect("ids in range") else {
            break;
        };
        // remove the path hyperedge whose loss hurts most
        let best = path
            .edges()
            .iter()
            .copied()
            .max_by(|&x, &y| {
                let dx = with_extra(s, &chosen, x, a, b);
                let dy = with_extra(s, &chosen, y, a, b);
                dx.total_cmp(&dy).then(y.cmp(&x))
            })
            .expect("nontrivial path");
        chosen.push(best);
    }
    FaultSet::new(chosen).expect("distinct")
}

fn with_extra(s: &Hypergraph, chosen: &[EdgeId], x: EdgeId, a: Vertex, b: Vertex) -> f64 {
    let set = FaultSet::new(chosen.iter().copied().chain([x])).expect("distinct");
    s.shortest_distance(&set, a, b).expect("ids in range")
}

fn fault_sets(h: &Hypergraph, s: &Hypergraph, f: usize, opts: &VerifyOptions) -> Result<Vec<FaultSet>, VerifyError> {
    let mut sets = match opts.mode {
        Mode::Exhaustive => {
            let count = fault_set_count(h.m(), f);
            if count > EXHAUSTIVE_LIMIT {
                return Err(VerifyError::ExhaustiveTooLarge(count));
            }
            let ids: Vec<EdgeId> = h.edge_ids().collect();
            let mut out = Vec::with_capacity(count as usize);
            for size in 0..=f.min(ids.len()) {
                combinations(&ids, size, &mut out);
            }
            out
        }
        Mode::Sampled => random_sets(h, f, opts.budget, opts.seed),
        Mode::Adversarial => {
            let mut out = adversarial_sets(h, s, f);
            out.extend(random_sets(h, f, opts.budget, opts.seed));
            out
        }
    };
    for extra in &opts.extra {
        extra.validate(h)?;
        sets.push(extra.clone());
    }
    Ok(sets)
}

#[derive(Clone, Debug)]
struct Partial {
    pairs: usize,
    violations: usize,
    worst_ratio: f64,
    /// `(violating, severity, set index, verdict)`
    worst: Option<(bool, f64, usize, FaultVerdict)>,
}

impl Partial {
    fn empty() -> Self {
        Partial { pairs: 0, violations: 0, worst_ratio: 0.0, worst: None }
    }

    fn better(a: &(bool, f64, usize, FaultVerdict), b: &(bool, f64, usize, FaultVerdict)) -> bool {
        (a.0, a.1)
            .partial_cmp(&(b.0, b.1))
            .expect("no NaN")
            .then_with(|| (b.2, b.3.pair).cmp(&(a.2, a.3.pair)))
            .is_gt()
    }

    fn offer(&mut self, cand: (bool, f64, usize, FaultVerdict)) {
        if self.worst.as_ref().is_none_or(|w| Self::better(&cand, w)) {
            self.worst = Some(cand);
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.pairs += other.pairs;
        self.violations += other.violations;
        self.worst_ratio = self.worst_ratio.max(other.worst_ratio);
        if let Some(w) = other.worst {
            self.offer(w);
        }
        self
    }
}

/// Largest hyperedge weight along each witness path from one source.
fn witness_max_weights(h: &Hypergraph, mask: &[bool], source: Vertex) -> (Vec<f64>, Vec<f64>) {
    let run = h.run_dijkstra(source, mask, None);
    let w = (0..h.n())
        .map(|t| {
            run.positions_to(t)
                .map_or(0.0, |ps| ps.iter().map(|&p| h.edges()[p].weight).fold(0.0, f64::max))
        })
        .collect();
    (run.dist, w)
}

fn check_set(
    h: &Hypergraph,
    s: &Hypergraph,
    set_index: usize,
    faults: &FaultSet,
    kind: Kind,
    bound: &(dyn Fn(PairContext) -> f64 + Sync),
) -> Partial {
    let mask_h = h.fault_mask(faults);
    let mask_s = s.fault_mask(faults);
    let mut part = Partial::empty();
    for u in 0..h.n() {
        let (d_h, w_st) = match kind {
            Kind::Add => witness_max_weights(h, &mask_h, u),
            Kind::Mult => (h.distances_masked(u, &mask_h), Vec::new()),
        };
        let d_s = s.distances_masked(u, &mask_s);
        for v in u + 1..h.n() {
            let ctx = PairContext { u, v, faults, d_h: d_h[v], w_st: w_st.get(v).copied().unwrap_or(0.0) };
            let allowed = if d_h[v] == INF { INF } else { bound(ctx) };
            let ok = d_s[v] <= allowed || (d_s[v] == INF && allowed == INF);
            let severity = match kind {
                Kind::Mult => ratio(d_h[v], d_s[v]),
                Kind::Add => surplus(d_h[v], d_s[v]),
            };
            part.pairs += 1;
            part.worst_ratio = part.worst_ratio.max(severity);
            if !ok {
                part.violations += 1;
            }
            if part.worst.as_ref().is_none_or(|w| (!ok, severity) > (w.0, w.1)) {
                let verdict = FaultVerdict::new(faults.clone(), (u, v), d_h[v], d_s[v], allowed);
                part.offer((!ok, severity, set_index, verdict));
            }
        }
    }
    part
}

fn run(
    h: &Hypergraph,
    s: &Hypergraph,
    f: usize,
    opts: &VerifyOptions,
    kind: Kind,
    bound: &(dyn Fn(PairContext) -> f64 + Sync),
) -> Result<Report, VerifyError> {
    if s.n() != h.n() || !s.is_subhypergraph_of(h) {
        return Err(VerifyError::NotSubhypergraph);
    }
    let sets = fault_sets(h, s, f, opts)?;
    let work = || {
        sets.par_iter()
            .enumerate()
            .map(|(i, set)| check_set(h, s, i, set, kind, bound))
            .reduce(Partial::empty, Partial::merge)
    };
    let total = if opts.threads <= 1 {
        sets.iter()
            .enumerate()
            .map(|(i, set)| check_set(h, s, i, set, kind, bound))
            .fold(Partial::empty(), Partial::merge)
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| VerifyError::ThreadPool(e.to_string()))?
            .install(work)
    };
    Ok(Report {
        mode: opts.mode,
        fault_sets_checked: sets.len(),
        pairs_checked: total.pairs,
        violations: total.violations,
        worst_ratio: total.worst_ratio,
        worst: total.worst.map(|w| w.3),
    })
}

/// Result of [`build_and_verify`].
#[derive(Clone, Debug)]
pub struct RetryOutcome {
    pub spanner: Hypergraph,
    pub stats: BuildStats,
    /// Parameters of the build that produced `spanner`.
    pub params: Params,
    pub first: Report,
    /// Present iff the first build failed verification.
    pub retry: Option<Report>,
}

impl RetryOutcome {
    pub fn passed_first(&self) -> bool {
        self.first.passed()
    }

    pub fn passed(&self) -> bool {
        self.retry.as_ref().unwrap_or(&self.first).passed()
    }
}

/// Fresh seed for a rebuild, derived from the original.
pub fn derived_seed(seed: u64) -> u64 {
    ChaCha8Rng::seed_from_u64(seed).gen()
}

/// Builds with [`eftcluster::build`] and verifies stretch `2k - 1`. On
/// failure, rebuilds once with a derived seed and doubled sample constant.
pub fn build_and_verify(h: &Hypergraph, params: &Params, opts: &VerifyOptions) -> Result<RetryOutcome, VerifyError> {
    let stretch = (2 * params.k() - 1) as f64;
    let (spanner, stats) = eftcluster::build(h, params);
    let first = verify_mult(h, &spanner, params.f(), stretch, opts)?;
    if first.passed() {
        return Ok(RetryOutcome { spanner, stats, params: params.clone(), first, retry: None });
    }
    log::info!("verification failed; rebuilding with a fresh seed and doubled sample constant");
    let again = params
        .clone()
        .with_seed(derived_seed(params.seed()))
        .with_sample_const(params.sample_const() * 2)
        .expect("positive");
    let (spanner, stats) = eftcluster::build(h, &again);
    let retry = verify_mult(h, &spanner, again.f(), stretch, opts)?;
    Ok(RetryOutcome { spanner, stats, params: again, first, retry: Some(retry) })
}

/// How a pair's shortest path in `H ∖ F` relates to the spanner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BypassClass {
    /// The path lies in `S` (or the pair is disconnected).
    Phi,
    /// `edge` is the first path hyperedge missing from `S`, entered at
    /// `vertex`.
    Entry { vertex: Vertex, edge: EdgeId },
}

/// Diagnostic label of `(u, v)` under `faults`.
pub fn bypass_class(h: &Hypergraph, s: &Hypergraph, faults: &FaultSet, u: Vertex, v: Vertex) -> Result<BypassClass, VerifyError> {
    let Some(path) = h.shortest_path(faults, u, v)? else {
        return Ok(BypassClass::Phi);
    };
    let mut at = u;
    for (idx, &e) in path.edges().iter().enumerate() {
        if !s.contains_edge(e) {
            return Ok(BypassClass::Entry { vertex: at, edge: e });
        }
        // next entry vertex: a vertex shared with the following hyperedge
        if let Some(&next) = path.edges().get(idx + 1) {
            let cur = h.edge(e).expect("path edge");
            let nxt = h.edge(next).expect("path edge");
            at = *cur.vertices.iter().find(|x| nxt.contains(**x)).expect("consecutive edges meet");
        }
    }
    Ok(BypassClass::Phi)
}
