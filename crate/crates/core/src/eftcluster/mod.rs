//! Randomized fault-tolerant clustering construction of an `f`-EFT
//! `(2k-1)`-hyperspanner.
//!
//! The build runs `k` iterations of [`icompute`]. Each iteration samples
//! cluster centers, grows per-vertex path collections by scanning incident
//! hyperedges lightest first, and decides for every `(u, v, h)` triple
//! whether `h` is kept (`kp`), safely discarded (`sd`) or postponed (`pp`).

mod ledger;
mod pairs;
mod state;
mod trace;

use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::hypercore::Hypergraph;

pub use ledger::{Status, StatusCounts, TripleStatusLedger};
pub use pairs::{count_disjoint_pairs, paths_overlap};
pub use state::{icompute, ClusterState};
pub use trace::{BuildTrace, IterationTrace, ScanEvent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("f must be at least 1, got {0}")]
    InvalidF(usize),
    #[error("sample constant must be positive, got {0}")]
    InvalidSampleConst(usize),
    #[error("path quota must be positive")]
    InvalidQuota,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Build parameters. `k ≥ 2`, `f ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    k: usize,
    f: usize,
    sample_const: usize,
    seed: u64,
    quota_override: Option<usize>,
}

pub const DEFAULT_SAMPLE_CONST: usize = 4;

impl Params {
    pub fn new(k: usize, f: usize, seed: u64) -> Result<Self, ClusterError> {
        if k < 2 {
            return Err(ClusterError::InvalidK(k));
        }
        if f < 1 {
            return Err(ClusterError::InvalidF(f));
        }
        Ok(Params { k, f, sample_const: DEFAULT_SAMPLE_CONST, seed, quota_override: None })
    }

    pub fn with_sample_const(mut self, c: usize) -> Result<Self, ClusterError> {
        if c == 0 {
            return Err(ClusterError::InvalidSampleConst(c));
        }
        self.sample_const = c;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Replaces `K_f` by `quota`. Only useful for exercising later
    /// iterations on small inputs, where `K_f` paths can never be collected;
    /// the stretch guarantee does not cover this setting.
    pub fn with_path_quota(mut self, quota: usize) -> Result<Self, ClusterError> {
        if quota == 0 {
            return Err(ClusterError::InvalidQuota);
        }
        self.quota_override = Some(quota);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn sample_const(&self) -> usize {
        self.sample_const
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `p = min(1, f^{1/(rk)} / n^{1/k})`.
    pub fn sampling_probability(&self, n: usize, r: usize) -> f64 {
        if n == 0 || r == 0 {
            return 1.0;
        }
        let rk = (r * self.k) as f64;
        let p = (self.f as f64).powf(1.0 / rk) / (n as f64).powf(1.0 / self.k as f64);
        p.min(1.0)
    }

    /// `K_f = 12(k + r)f`, unless overridden.
    pub fn path_quota(&self, r: usize) -> usize {
        self.quota_override.unwrap_or(12 * (self.k + r) * self.f)
    }

    /// `c_s·⌈log₂ n⌉`, at least 1.
    pub fn sample_size(&self, n: usize) -> usize {
        (self.sample_const * log2_ceil(n)).max(1)
    }
}

fn log2_ceil(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationStats {
    pub i: usize,
    /// `|Z_i|`
    pub centers: usize,
    /// `|V_i|`
    pub active: usize,
    /// `|R_i|`
    pub remaining: usize,
    /// `|H_i ∖ H_{i-1}|`
    pub added_edges: usize,
    /// `max_v |P_{i-1}(v)|`
    pub max_pv: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildStats {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub k: usize,
    pub f: usize,
    pub probability: f64,
    pub quota: usize,
    pub sample_size: usize,
    pub iterations: Vec<IterationStats>,
    pub status: StatusCounts,
    pub spanner_edges: usize,
    /// `f ≥ m`: the input was returned unchanged.
    pub degenerate: bool,
    pub wall_ms: f64,
    /// `16(k+r) f^{1-1/(rk)} n^{1/k} log₂ n`
    pub pv_threshold: f64,
    /// Iterations whose `max_pv` exceeded `pv_threshold`.
    pub pv_exceeded: Vec<usize>,
    /// `k² f^{1-1/(rk)} n^{1+1/k} log₂ n`
    pub envelope_k2: f64,
    /// `k(k+r) f^{1-1/(rk)} n^{1+1/k} log₂ n`
    pub envelope_kkr: f64,
}

impl BuildStats {
    fn new(h: &Hypergraph, params: &Params) -> Self {
        let (n, r, k, f) = (h.n(), h.rank().max(2), params.k, params.f);
        let nf = n.max(2) as f64;
        let fpow = (f as f64).powf(1.0 - 1.0 / (r * k) as f64);
        let common = fpow * nf.powf(1.0 + 1.0 / k as f64) * nf.log2();
        BuildStats {
            n,
            m: h.m(),
            rank: h.rank(),
            k,
            f,
            probability: params.sampling_probability(n, h.rank()),
            quota: params.path_quota(h.rank()),
            sample_size: params.sample_size(n),
            iterations: Vec::new(),
            status: StatusCounts::default(),
            spanner_edges: 0,
            degenerate: false,
            wall_ms: 0.0,
            pv_threshold: 16.0 * (k + r) as f64 * fpow * nf.powf(1.0 / k as f64) * nf.log2(),
            pv_exceeded: Vec::new(),
            envelope_k2: (k * k) as f64 * common,
            envelope_kkr: (k * (k + r)) as f64 * common,
        }
    }

    /// One row per iteration, then `#`-prefixed summary lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\t|Z_i|\t|V_i|\t|R_i|\tadded_edges\tmax_Pv\twall_ms\n");
        for it in &self.iterations {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
                it.i, it.centers, it.active, it.remaining, it.added_edges, it.max_pv, it.wall_ms
            );
        }
        let s = &self.status;
        let _ = writeln!(out, "# n={} m={} r={} k={} f={}", self.n, self.m, self.rank, self.k, self.f);
        let _ = writeln!(
            out,
            "# p={:.6} K_f={} sample_size={} degenerate={}",
            self.probability, self.quota, self.sample_size, self.degenerate
        );
        let _ = writeln!(
            out,
            "# kp={} sd={} pp={} sd_pairs={} spanner_edges={}",
            s.kept_edges, s.discarded_edges, s.postponed_edges, s.discarded_pairs, self.spanner_edges
        );
        let _ = writeln!(
            out,
            "# pv_threshold={:.1} pv_exceeded={:?} envelope_k2={:.1} envelope_kkr={:.1}",
            self.pv_threshold, self.pv_exceeded, self.envelope_k2, self.envelope_kkr
        );
        out
    }
}

/// Builds the spanner. Deterministic in `(h, params)`.
pub fn build(h: &Hypergraph, params: &Params) -> (Hypergraph, BuildStats) {
    let (s, stats, _) = run(h, params, false);
    (s, stats)
}

/// Like [`build`], also returning the full trace for invariant replay.
pub fn build_traced(h: &Hypergraph, params: &Params) -> (Hypergraph, BuildStats, BuildTrace) {
    let (s, stats, trace) = run(h, params, true);
    (s, stats, trace.expect("tracing enabled"))
}

fn run(h: &Hypergraph, params: &Params, tracing: bool) -> (Hypergraph, BuildStats, Option<BuildTrace>) {
    let start = Instant::now();
    let mut stats = BuildStats::new(h, params);
    let mut trace = tracing.then(|| BuildTrace::new(h, params));
    let mut ledger = TripleStatusLedger::new();

    if params.f >= h.m() {
        for e in h.edges() {
            ledger.set_keep(e.id);
        }
        stats.degenerate = true;
        stats.status = ledger.counts(h);
        stats.spanner_edges = h.m();
        stats.wall_ms = elapsed_ms(start);
        return (h.clone(), stats, trace);
    }

    let mut state = ClusterState::initial(h, params.seed);
    for _ in 1..=params.k {
        let (next, it) = icompute(h, state, &mut ledger, params, trace.as_mut().map(|t| &mut t.iterations));
        if it.max_pv as f64 > stats.pv_threshold {
            log::warn!(
                "iteration {}: max |P| = {} exceeds {:.1}",
                it.i,
                it.max_pv,
                stats.pv_threshold
            );
            stats.pv_exceeded.push(it.i);
        }
        stats.iterations.push(it);
        state = next;
    }

    let kept = ledger.kept_edges();
    assert_eq!(kept, state.spanner().iter().copied().collect::<Vec<_>>(), "kp set equals H_k");
    let spanner = h.restrict(kept);
    stats.status = ledger.counts(h);
    stats.spanner_edges = spanner.m();
    stats.wall_ms = elapsed_ms(start);
    (spanner, stats, trace)
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert_eq!(Params::new(1, 1, 0), Err(ClusterError::InvalidK(1)));
        assert_eq!(Params::new(2, 0, 0), Err(ClusterError::InvalidF(0)));
        let p = Params::new(2, 1, 0).unwrap();
        assert!(p.clone().with_sample_const(0).is_err());
        assert!(p.clone().with_path_quota(0).is_err());
        assert_eq!(p.sample_const(), 4);
    }

    #[test]
    fn derived_quantities() {
        let p = Params::new(2, 1, 0).unwrap();
        assert_eq!(p.path_quota(3), 60);
        assert_eq!(Params::new(3, 2, 0).unwrap().path_quota(2), 120);
        assert_eq!(p.sample_size(16), 16);
        assert_eq!(p.sample_size(17), 20);
        assert_eq!(p.sample_size(1), 1);
        assert!((p.sampling_probability(16, 3) - 0.25).abs() < 1e-12);
        // f^{1/(rk)} / n^{1/k} > 1 is clamped
        let big = Params::new(2, 1 << 20, 0).unwrap();
        assert_eq!(big.sampling_probability(4, 2), 1.0);
    }

    #[test]
    fn log2_ceil_values() {
        let got: Vec<usize> = [1, 2, 3, 4, 5, 8, 9, 64].iter().map(|&n| log2_ceil(n)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 6]);
    }
}
