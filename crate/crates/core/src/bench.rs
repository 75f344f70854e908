//! Size and running-time scaling runs of the clustering build, with the
//! peel-off baseline for comparison.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::baseline::peeloff_eft;
use crate::eftcluster::{self, Params};
use crate::instances::{random_hypergraph, RandomSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("bad grid: {0}")]
    Grid(String),
    #[error("grid point n={n} r={r}: {reason}")]
    Point { n: usize, r: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    SizeScaling,
    TimeScaling,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::SizeScaling => "size-scaling",
            Suite::TimeScaling => "time-scaling",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "size-scaling" => Ok(Suite::SizeScaling),
            "time-scaling" => Ok(Suite::TimeScaling),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

/// Cartesian grid; parsed from `n-list,k-list,f-list,r-list` with `/`
/// separating list entries, e.g. `64,2,1/4,3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub fs: Vec<usize>,
    pub rs: Vec<usize>,
}

impl FromStr for Grid {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split(',').collect();
        if fields.len() != 4 {
            return Err(BenchError::Grid(format!("expected 4 comma-separated lists, got {}", fields.len())));
        }
        let list = |x: &str| -> Result<Vec<usize>, BenchError> {
            x.split('/')
                .map(|v| v.trim().parse::<usize>().map_err(|_| BenchError::Grid(format!("bad number {v:?}"))))
                .collect()
        };
        Ok(Grid { ns: list(fields[0])?, ks: list(fields[1])?, fs: list(fields[2])?, rs: list(fields[3])? })
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Instances per grid point.
    pub seeds: usize,
    /// Timed repetitions per build; the minimum is reported.
    pub reps: usize,
    /// `m = density · n^{1.5}`.
    pub density: f64,
    pub weights: (u32, u32),
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { seeds: 5, reps: 3, density: 4.0, weights: (1, 10) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub suite: Suite,
    pub algo: &'static str,
    pub n: usize,
    pub k: usize,
    pub f: usize,
    pub r: usize,
    pub m: usize,
    pub seed: u64,
    pub edges: usize,
    pub wall_ms: f64,
}

/// Mean output sizes at the smallest and largest `f` of a grid line.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeSummary {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub f_lo: usize,
    pub f_hi: usize,
    pub cluster_ratio: f64,
    pub peeloff_ratio: f64,
}

/// Median over seeds of `time(2m) / time(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSummary {
    pub n: usize,
    pub k: usize,
    pub f: usize,
    pub r: usize,
    pub m: usize,
    pub median_ratio: f64,
}

#[derive(Clone, Debug, Default)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub size: Vec<SizeSummary>,
    pub time: Vec<TimeSummary>,
}

impl BenchOutcome {
    /// Data rows, then `#` summary lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("suite\talgo\tn\tk\tf\tr\tm\tseed\tedges\twall_ms\n");
        for x in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
                x.suite, x.algo, x.n, x.k, x.f, x.r, x.m, x.seed, x.edges, x.wall_ms
            );
        }
        for s in &self.size {
            let _ = writeln!(
                out,
                "# size n={} k={} r={} f={}->{} cluster_ratio={:.3} peeloff_ratio={:.3}",
                s.n, s.k, s.r, s.f_lo, s.f_hi, s.cluster_ratio, s.peeloff_ratio
            );
        }
        for t in &self.time {
            let _ = writeln!(
                out,
                "# time n={} k={} f={} r={} m={}->{} median_ratio={:.3}",
                t.n,
                t.k,
                t.f,
                t.r,
                t.m,
                2 * t.m,
                t.median_ratio
            );
        }
        out
    }
}

fn edge_count(n: usize, density: f64) -> usize {
    (density * (n as f64).powf(1.5)).round() as usize
}

/// Seed for instance `idx` of a grid line; independent of `k` and `f` so
/// every `f` sees the same corpus.
fn instance_seed(seed: u64, n: usize, r: usize, m: usize, idx: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((n as u64) << 40 | (r as u64) << 32 | (m as u64) << 8 | idx as u64);
    rng.gen()
}

fn timed<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, f64) {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let x = f();
        best = best.min(start.elapsed().as_secs_f64() * 1000.0);
        out = Some(x);
    }
    (out.expect("at least one rep"), best)
}

fn params(k: usize, f: usize, seed: u64) -> Result<Params, BenchError> {
    Params::new(k, f, seed).map_err(|e| BenchError::Grid(e.to_string()))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len().max(1) as f64
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    match xs.len() {
        0 => f64::NAN,
        l if l % 2 == 1 => xs[l / 2],
        l => (xs[l / 2 - 1] + xs[l / 2]) / 2.0,
    }
}

fn instance(n: usize, m: usize, r: usize, cfg: &BenchConfig, seed: u64) -> Result<crate::Hypergraph, BenchError> {
    let spec = RandomSpec::uniform(n, m, r).weights(cfg.weights.0, cfg.weights.1);
    random_hypergraph(&spec, seed).map_err(|e| BenchError::Point { n, r, reason: e.to_string() })
}

/// Runs a suite over the grid.
///
/// - size-scaling: per `(n, k, r)`, builds cluster and peel-off spanners
///   for every `f` on the same `cfg.seeds` instances with `m = 4·n^{1.5}`,
///   and reports mean-size ratios between the largest and smallest `f`.
/// - time-scaling: per grid point, times the cluster build at `m` and
///   `2m` and reports the median ratio.
pub fn run(suite: Suite, grid: &Grid, seed: u64, cfg: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    let mut out = BenchOutcome::default();
    for &n in &grid.ns {
        for &r in &grid.rs {
            for &k in &grid.ks {
                match suite {
                    Suite::SizeScaling => size_line(&mut out, n, k, r, &grid.fs, seed, cfg)?,
                    Suite::TimeScaling => {
                        for &f in &grid.fs {
                            time_point(&mut out, n, k, f, r, seed, cfg)?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn size_line(
    out: &mut BenchOutcome,
    n: usize,
    k: usize,
    r: usize,
    fs: &[usize],
    seed: u64,
    cfg: &BenchConfig,
) -> Result<(), BenchError> {
    let m = edge_count(n, cfg.density);
    let corpus: Vec<(u64, crate::Hypergraph)> = (0..cfg.seeds)
        .map(|idx| {
            let s = instance_seed(seed, n, r, m, idx);
            instance(n, m, r, cfg, s).map(|h| (s, h))
        })
        .collect::<Result<_, _>>()?;
    let mut cluster_means = Vec::new();
    let mut peel_means = Vec::new();
    for &f in fs {
        let mut cs = Vec::new();
        let mut ps = Vec::new();
        for (s, h) in &corpus {
            let p = params(k, f, *s)?;
            let ((spanner, _), ms) = timed(1, || eftcluster::build(h, &p));
            out.rows.push(BenchRow { suite: Suite::SizeScaling, algo: "cluster", n, k, f, r, m, seed: *s, edges: spanner.m(), wall_ms: ms });
            cs.push(spanner.m() as f64);
            let (peel, ms) = timed(1, || peeloff_eft(h, k, f).expect("k >= 2"));
            out.rows.push(BenchRow { suite: Suite::SizeScaling, algo: "peeloff", n, k, f, r, m, seed: *s, edges: peel.spanner.m(), wall_ms: ms });
            ps.push(peel.spanner.m() as f64);
        }
        cluster_means.push(mean(&cs));
        peel_means.push(mean(&ps));
    }
    let lo = (0..fs.len()).min_by_key(|&i| fs[i]);
    let hi = (0..fs.len()).max_by_key(|&i| fs[i]);
    if let (Some(lo), Some(hi)) = (lo, hi) {
        if fs[lo] != fs[hi] {
            out.size.push(SizeSummary {
                n,
                k,
                r,
                f_lo: fs[lo],
                f_hi: fs[hi],
                cluster_ratio: cluster_means[hi] / cluster_means[lo],
                peeloff_ratio: peel_means[hi] / peel_means[lo],
            });
        }
    }
    Ok(())
}

fn time_point(out: &mut BenchOutcome, n: usize, k: usize, f: usize, r: usize, seed: u64, cfg: &BenchConfig) -> Result<(), BenchError> {
    let m = edge_count(n, cfg.density);
    let mut ratios = Vec::new();
    for idx in 0..cfg.seeds {
        let mut times = [0.0; 2];
        for (slot, mm) in [m, 2 * m].into_iter().enumerate() {
            let s = instance_seed(seed, n, r, mm, idx);
            let h = instance(n, mm, r, cfg, s)?;
            let p = params(k, f, s)?;
            let ((spanner, _), ms) = timed(cfg.reps, || eftcluster::build(&h, &p));
            out.rows.push(BenchRow { suite: Suite::TimeScaling, algo: "cluster", n, k, f, r, m: mm, seed: s, edges: spanner.m(), wall_ms: ms });
            times[slot] = ms;
        }
        ratios.push(times[1] / times[0]);
    }
    out.time.push(TimeSummary { n, k, f, r, m, median_ratio: median(ratios) });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "64/128,2,1/4,3".parse().unwrap();
        assert_eq!(g, Grid { ns: vec![64, 128], ks: vec![2], fs: vec![1, 4], rs: vec![3] });
        assert!("64,2,1".parse::<Grid>().is_err());
        assert!("64,x,1,3".parse::<Grid>().is_err());
    }

    #[test]
    fn median_and_counts() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(edge_count(64, 4.0), 2048);
    }

    #[test]
    fn tiny_size_run() {
        let grid: Grid = "12,2,1/2,3".parse().unwrap();
        let cfg = BenchConfig { seeds: 2, reps: 1, density: 1.0, weights: (1, 3) };
        let out = run(Suite::SizeScaling, &grid, 5, &cfg).unwrap();
        assert_eq!(out.rows.len(), 2 * 2 * 2);
        assert_eq!(out.size.len(), 1);
        let tsv = out.to_tsv();
        assert!(tsv.lines().last().unwrap().starts_with("# size n=12"));
    }
}
