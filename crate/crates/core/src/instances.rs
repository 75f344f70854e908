//! Instance generators: random hypergraphs, high-girth uniform bases, and
//! the blow-up family on which no proper sub-hypergraph is an `f`-EFT
//! `(2k-1)`-spanner.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypercore::{EdgeId, FaultSet, Hypergraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("cannot place {m} distinct hyperedges, only {available} vertex sets exist")]
    Infeasible { m: usize, available: u128 },
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(usize),
    #[error("invalid weight range {lo}..={hi}")]
    InvalidWeights { lo: u32, hi: u32 },
    #[error("{0} incidences is too large for exact girth")]
    TooLarge(usize),
    #[error("base hypergraph is not uniform")]
    NotUniform,
    #[error("base hypergraph is not unweighted")]
    NotUnweighted,
    #[error("base girth {girth} is below the required {required}")]
    GirthTooSmall { girth: usize, required: usize },
    #[error("fault budget must be at least 1")]
    InvalidF,
    #[error("line {line}: {reason}")]
    Sidecar { line: usize, reason: String },
}

/// Largest `Σ|h|` accepted by [`berge_girth`].
pub const GIRTH_LIMIT: usize = 10_000;

/// Parameters of [`random_hypergraph`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    /// Inclusive integer weight range.
    pub weights: (u32, u32),
    /// Sizes uniform in `2..=r` instead of exactly `r`.
    pub mixed_sizes: bool,
}

impl RandomSpec {
    pub fn uniform(n: usize, m: usize, r: usize) -> Self {
        RandomSpec { n, m, r, weights: (1, 1), mixed_sizes: false }
    }

    pub fn weights(mut self, lo: u32, hi: u32) -> Self {
        self.weights = (lo, hi);
        self
    }

    pub fn mixed(mut self) -> Self {
        self.mixed_sizes = true;
        self
    }

    fn sizes(&self) -> std::ops::RangeInclusive<usize> {
        if self.mixed_sizes {
            2..=self.r
        } else {
            self.r..=self.r
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Appends every `k`-subset of `0..n` to `out`, lexicographically.
fn all_subsets(n: usize, k: usize, out: &mut Vec<Vec<Vertex>>) {
    let mut cur: Vec<Vertex> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `m` distinct hyperedges on `n` vertices with uniform random vertex sets
/// and integer weights. Deterministic in `seed`.
pub fn random_hypergraph(spec: &RandomSpec, seed: u64) -> Result<Hypergraph, InstanceError> {
    let (lo, hi) = spec.weights;
    if lo == 0 || lo > hi {
        return Err(InstanceError::InvalidWeights { lo, hi });
    }
    if spec.r < 2 {
        return Err(InstanceError::InvalidRank(spec.r));
    }
    let available: u128 = spec.sizes().map(|s| binomial(spec.n, s)).sum();
    if spec.m as u128 > available {
        return Err(InstanceError::Infeasible { m: spec.m, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<Vertex>> = if available <= 4 * spec.m as u128 {
        let mut pool = Vec::new();
        for s in spec.sizes() {
            all_subsets(spec.n, s, &mut pool);
        }
        index::sample(&mut rng, pool.len(), spec.m).into_iter().map(|i| pool[i].clone()).collect()
    } else {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(spec.m);
        while out.len() < spec.m {
            let s = rng.gen_range(spec.sizes());
            let mut vs = index::sample(&mut rng, spec.n, s).into_vec();
            vs.sort_unstable();
            if seen.insert(vs.clone()) {
                out.push(vs);
            }
        }
        out
    };
    let edges: Vec<(f64, Vec<Vertex>)> =
        sets.into_iter().map(|vs| (rng.gen_range(lo..=hi) as f64, vs)).collect();
    Ok(Hypergraph::new(spec.n, edges).expect("generated hyperedges are valid and distinct"))
}

/// Length of the shortest Berge cycle, or `None` if there is none. Two
/// hyperedges sharing two vertices form a cycle of length 2.
///
/// Computed as half the girth of the vertex/hyperedge incidence graph.
pub fn berge_girth(h: &Hypergraph) -> Result<Option<usize>, InstanceError> {
    let incidences: usize = h.edges().iter().map(|e| e.len()).sum();
    if incidences > GIRTH_LIMIT {
        return Err(InstanceError::TooLarge(incidences));
    }
    // nodes 0..n are vertices, n.. are hyperedges
    let n = h.n();
    let total = n + h.m();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (pos, e) in h.edges().iter().enumerate() {
        for &v in &e.vertices {
            adj[v].push(n + pos);
            adj[n + pos].push(v);
        }
    }
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    for s in 0..total {
        dist.fill(usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    Ok((best != usize::MAX).then_some(best / 2))
}

/// Hop distances from `source`, capped at `limit`.
fn hop_distances(adj: &[Vec<usize>], edges: &[Vec<Vertex>], source: Vertex, limit: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut used = vec![false; edges.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= limit {
            continue;
        }
        for &e in &adj[x] {
            if std::mem::replace(&mut used[e], true) {
                continue;
            }
            for &y in &edges[e] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    dist
}

/// Randomized greedy `r`-uniform unweighted hypergraph with Berge girth at
/// least `girth_min`: draw random `r`-sets and keep those that close no
/// short cycle, until `budget` draws have been rejected.
pub fn high_girth_base(n: usize, r: usize, girth_min: usize, seed: u64, budget: usize) -> Result<Hypergraph, InstanceError> {
    if r < 2 {
        return Err(InstanceError::InvalidRank(r));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut rejections = 0;
    while rejections < budget && n >= r {
        let mut cand = index::sample(&mut rng, n, r).into_vec();
        cand.sort_unstable();
        // a new cycle through cand has length 1 + d(a, b) for some a != b in cand
        let limit = girth_min.saturating_sub(2);
        let closes_short = cand.iter().enumerate().any(|(i, &a)| {
            let d = hop_distances(&adj, &edges, a, limit);
            cand[i + 1..].iter().any(|&b| d[b] != usize::MAX && 1 + d[b] < girth_min)
        });
        if closes_short {
            rejections += 1;
            continue;
        }
        for &v in &cand {
            adj[v].push(edges.len());
        }
        edges.push(cand);
    }
    let h = Hypergraph::new(n, edges.into_iter().map(|vs| (1.0, vs))).expect("distinct r-sets");
    if h.edges().iter().map(|e| e.len()).sum::<usize>() <= GIRTH_LIMIT {
        debug_assert!(berge_girth(&h).unwrap().is_none_or(|g| g >= girth_min));
    }
    Ok(h)
}

/// Densest of `restarts` [`high_girth_base`] runs with seeds derived from
/// `seed`; ties go to the earliest run.
pub fn high_girth_best(
    n: usize,
    r: usize,
    girth_min: usize,
    seed: u64,
    budget: usize,
    restarts: usize,
) -> Result<Hypergraph, InstanceError> {
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Hypergraph> = None;
    for _ in 0..restarts.max(1) {
        let h = high_girth_base(n, r, girth_min, seeder.gen(), budget)?;
        if best.as_ref().is_none_or(|b| h.m() > b.m()) {
            best = Some(h);
        }
    }
    Ok(best.expect("at least one run"))
}

/// `⌊f^{1/r}⌋` computed exactly.
pub fn integer_root(f: usize, r: usize) -> usize {
    if r <= 1 || f <= 1 {
        return f;
    }
    let fits = |t: usize| t.checked_pow(r as u32).is_some_and(|p| p <= f);
    let mut t = (f as f64).powf(1.0 / r as f64).round() as usize;
    while t > 0 && !fits(t) {
        t -= 1;
    }
    while fits(t + 1) {
        t += 1;
    }
    t
}

/// A base hypergraph and the blow-up parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupSpec {
    pub base: Hypergraph,
    /// `⌊f^{1/r}⌋`
    pub t: usize,
    pub r: usize,
    pub k: usize,
    pub f: usize,
}

impl BlowupSpec {
    /// Checks that `base` is `r`-uniform, unweighted and of girth at least
    /// `2k + 2`.
    pub fn new(base: Hypergraph, f: usize, k: usize) -> Result<Self, InstanceError> {
        if f == 0 {
            return Err(InstanceError::InvalidF);
        }
        let r = base.rank();
        if base.edges().iter().any(|e| e.len() != r) {
            return Err(InstanceError::NotUniform);
        }
        if base.edges().iter().any(|e| e.weight != 1.0) {
            return Err(InstanceError::NotUnweighted);
        }
        let required = 2 * k + 2;
        if let Some(girth) = berge_girth(&base)? {
            if girth < required {
                return Err(InstanceError::GirthTooSmall { girth, required });
            }
        }
        let t = if r == 0 { 1 } else { integer_root(f, r) };
        Ok(BlowupSpec { base, t, r, k, f })
    }

    /// Vertex `(u, i)` becomes `u·t + i`. The copy of base hyperedge at
    /// position `b` with copy tuple number `j` (lexicographic over `[t]^r`)
    /// gets id `b·t^r + j`.
    pub fn build(&self) -> (Hypergraph, AdversaryIndex) {
        let t = self.t;
        let copies = t.pow(self.r as u32);
        let mut edges = Vec::with_capacity(self.base.m() * copies);
        let mut rows = Vec::with_capacity(self.base.m() * copies);
        for (b, e) in self.base.edges().iter().enumerate() {
            for j in 0..copies {
                let mut rest = j;
                let mut tuple = vec![0; self.r];
                for slot in tuple.iter_mut().rev() {
                    *slot = rest % t;
                    rest /= t;
                }
                let vs: Vec<Vertex> = e.vertices.iter().zip(&tuple).map(|(&u, &i)| u * t + i).collect();
                edges.push((1.0, vs));
                let first = b * copies;
                rows.push((first..first + copies).filter(|&x| x != first + j).collect());
            }
        }
        let h = Hypergraph::new(self.base.n() * t, edges).expect("copies are distinct");
        (h, AdversaryIndex { rows })
    }
}

/// Blow-up of `base` with `t = ⌊f^{1/r}⌋` copies per vertex.
pub fn lowerbound_family(base: &Hypergraph, f: usize, k: usize) -> Result<(Hypergraph, AdversaryIndex), InstanceError> {
    let spec = BlowupSpec::new(base.clone(), f, k)?;
    let out = spec.build();
    assert!(out.1.rows.iter().all(|row| row.len() <= f), "t^r - 1 <= f");
    Ok(out)
}

/// `F(h)`: the other copies of `h`'s base hyperedge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryIndex {
    rows: Vec<Vec<EdgeId>>,
}

impl AdversaryIndex {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn faults(&self, h: EdgeId) -> FaultSet {
        FaultSet::new(self.rows[h].iter().copied()).expect("distinct ids")
    }

    /// One `h_id: f_id f_id ...` line per hyperedge.
    pub fn to_sidecar(&self) -> String {
        let mut out = String::new();
        for (h, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{h}:");
            for x in row {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_sidecar(text: &str) -> Result<Self, InstanceError> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |reason: &str| InstanceError::Sidecar { line, reason: reason.to_string() };
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (head, tail) = raw.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let h: usize = head.trim().parse().map_err(|_| err("bad hyperedge id"))?;
            if h != rows.len() {
                return Err(err("rows out of order"));
            }
            let row = tail
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| err("bad fault id")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(AdversaryIndex { rows })
    }
}

/// A hyperedge whose removal together with `F(h)` leaves all its pairs
/// within distance `2k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HardnessFailure {
    pub edge: EdgeId,
    pub worst: f64,
}

/// For every `h`, removing `h` and `F(h)` must push some pair of `h` to
/// distance at least `2k + 1`.
pub fn check_hardness(h: &Hypergraph, adv: &AdversaryIndex, k: usize) -> Result<(), HardnessFailure> {
    let target = (2 * k + 1) as f64;
    for e in h.edges() {
        let mut ids = adv.rows[e.id].clone();
        ids.push(e.id);
        let mask: Vec<bool> = {
            let set: HashSet<EdgeId> = ids.into_iter().collect();
            h.edges().iter().map(|x| set.contains(&x.id)).collect()
        };
        let mut worst: f64 = 0.0;
        for (a, b) in e.pairs() {
            worst = worst.max(h.distances_masked(a, &mask)[b]);
        }
        if worst < target {
            return Err(HardnessFailure { edge: e.id, worst });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Hypergraph {
        Hypergraph::new(n, (0..n).map(|i| (1.0, vec![i, (i + 1) % n]))).unwrap()
    }

    #[test]
    fn random_edge_cases() {
        let h = random_hypergraph(&RandomSpec::uniform(5, 0, 3), 1).unwrap();
        assert_eq!(h.m(), 0);
        let h = random_hypergraph(&RandomSpec::uniform(5, 10, 3), 1).unwrap();
        let mut sets: Vec<_> = h.edges().iter().map(|e| e.vertices.clone()).collect();
        sets.sort();
        let mut all = Vec::new();
        all_subsets(5, 3, &mut all);
        assert_eq!(sets, all);
        assert!(matches!(
            random_hypergraph(&RandomSpec::uniform(5, 11, 3), 1),
            Err(InstanceError::Infeasible { m: 11, available: 10 })
        ));
        let a = random_hypergraph(&RandomSpec::uniform(12, 30, 3).weights(1, 5).mixed(), 9).unwrap();
        let b = random_hypergraph(&RandomSpec::uniform(12, 30, 3).weights(1, 5).mixed(), 9).unwrap();
        assert_eq!(a, b);
        assert!(a.edges().iter().all(|e| (2..=3).contains(&e.len())));
    }

    #[test]
    fn girth_examples() {
        let two = Hypergraph::new(4, [(1.0, vec![0, 1, 2]), (1.0, vec![1, 2, 3])]).unwrap();
        assert_eq!(berge_girth(&two).unwrap(), Some(2));
        let one = Hypergraph::new(3, [(1.0, vec![0, 1, 2])]).unwrap();
        assert_eq!(berge_girth(&one).unwrap(), None);
        assert_eq!(berge_girth(&cycle(6)).unwrap(), Some(6));
        assert_eq!(berge_girth(&cycle(3)).unwrap(), Some(3));
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(4, 2), 2);
        assert_eq!(integer_root(8, 2), 2);
        assert_eq!(integer_root(9, 2), 3);
        assert_eq!(integer_root(26, 3), 2);
        assert_eq!(integer_root(27, 3), 3);
        assert_eq!(integer_root(1, 3), 1);
    }

    #[test]
    fn c6_blowup() {
        let (h, adv) = lowerbound_family(&cycle(6), 4, 2).unwrap();
        assert_eq!(h.n(), 12);
        assert_eq!(h.m(), 24);
        assert!((0..24).all(|e| adv.faults(e).len() == 3));
        check_hardness(&h, &adv, 2).unwrap();
        let round = AdversaryIndex::parse_sidecar(&adv.to_sidecar()).unwrap();
        assert_eq!(round, adv);
    }

    #[test]
    fn identity_blowup() {
        let (h, adv) = lowerbound_family(&cycle(6), 3, 2).unwrap();
        assert_eq!(h, cycle(6));
        assert!(adv.faults(0).is_empty());
    }

    #[test]
    fn short_girth_rejected() {
        assert_eq!(
            lowerbound_family(&cycle(5), 4, 2),
            Err(InstanceError::GirthTooSmall { girth: 5, required: 6 })
        );
    }

    #[test]
    fn high_girth_outputs_meet_girth() {
        for seed in 0..5 {
            let h = high_girth_base(20, 3, 6, seed, 200).unwrap();
            assert!(berge_girth(&h).unwrap().is_none_or(|g| g >= 6));
            assert_eq!(h, high_girth_base(20, 3, 6, seed, 200).unwrap());
        }
        let c6 = high_girth_best(6, 2, 6, 1, 100, 64).unwrap();
        assert_eq!(c6.m(), 6);
        assert_eq!(berge_girth(&c6).unwrap(), Some(6));
    }
}
