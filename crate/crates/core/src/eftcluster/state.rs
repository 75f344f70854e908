use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hypercore::{EdgeId, HyperPath, Hypergraph, Vertex};

use super::ledger::{Status, TripleStatusLedger};
use super::trace::{IterationTrace, ScanEvent};
use super::{elapsed_ms, IterationStats, Params};

/// State handed from iteration `i - 1` to iteration `i`.
#[derive(Clone, Debug)]
pub struct ClusterState {
    i: usize,
    /// `Z_i`, ascending.
    centers: Vec<Vertex>,
    /// `V_i`, ascending.
    active: Vec<Vertex>,
    /// `Q_i`, keyed by the vertices of `V_i`.
    paths: BTreeMap<Vertex, Vec<HyperPath>>,
    /// `R_i`
    remaining: BTreeSet<EdgeId>,
    /// `H_i`
    spanner: BTreeSet<EdgeId>,
    rng: ChaCha8Rng,
}

impl ClusterState {
    /// `i = 0`: every vertex is a center and active with its trivial path;
    /// every hyperedge is `pp`.
    pub fn initial(h: &Hypergraph, seed: u64) -> Self {
        let all: Vec<Vertex> = (0..h.n()).collect();
        ClusterState {
            i: 0,
            centers: all.clone(),
            active: all.clone(),
            paths: all.iter().map(|&v| (v, vec![HyperPath::trivial(v)])).collect(),
            remaining: h.edge_ids().collect(),
            spanner: BTreeSet::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn iteration(&self) -> usize {
        self.i
    }

    pub fn centers(&self) -> &[Vertex] {
        &self.centers
    }

    pub fn active(&self) -> &[Vertex] {
        &self.active
    }

    pub fn paths(&self, v: Vertex) -> &[HyperPath] {
        self.paths.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn remaining(&self) -> &BTreeSet<EdgeId> {
        &self.remaining
    }

    pub fn spanner(&self) -> &BTreeSet<EdgeId> {
        &self.spanner
    }
}

/// One iteration: turns the state for `i - 1` into the state for `i`.
/// With `trace`, appends an [`IterationTrace`].
pub fn icompute(
    h: &Hypergraph,
    mut state: ClusterState,
    ledger: &mut TripleStatusLedger,
    params: &Params,
    trace: Option<&mut Vec<IterationTrace>>,
) -> (ClusterState, IterationStats) {
    let start = Instant::now();
    let i = state.i + 1;
    let n = h.n();
    let p = params.sampling_probability(n, h.rank());
    let quota = params.path_quota(h.rank());
    let sample_size = params.sample_size(n);
    let rng = &mut state.rng;

    let centers: Vec<Vertex> = if i < params.k() {
        state.centers.iter().copied().filter(|_| rng.gen_bool(p)).collect()
    } else {
        Vec::new()
    };
    let mut is_center = vec![false; n];
    for &z in &centers {
        is_center[z] = true;
    }

    let mut samples: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for &v in &state.active {
        let len = state.paths[&v].len();
        let mut idx = if len <= sample_size {
            (0..len).collect()
        } else {
            rand::seq::index::sample(rng, len, sample_size).into_vec()
        };
        idx.sort_unstable();
        samples.insert(v, idx);
    }

    // E_{i-1}(v): positions of incident hyperedges in R_{i-1}, by (weight, id)
    let mut is_active = vec![false; n];
    for &v in &state.active {
        is_active[v] = true;
    }
    let mut scan: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (pos, e) in h.edges().iter().enumerate() {
        if state.remaining.contains(&e.id) {
            for &x in &e.vertices {
                if is_active[x] {
                    scan[x].push(pos);
                }
            }
        }
    }
    for list in &mut scan {
        list.sort_by(|&a, &b| h.edges()[a].weight.total_cmp(&h.edges()[b].weight));
    }

    let mut events = Vec::new();
    let mut p_final = BTreeMap::new();
    let mut q_next: BTreeMap<Vertex, Vec<HyperPath>> = BTreeMap::new();
    let mut spanner = state.spanner.clone();
    let mut max_pv = 0;
    let tracing = trace.is_some();

    for &v in &state.active {
        let mut pv: Vec<HyperPath> = state.paths[&v].clone();
        let mut pv_edges: HashSet<EdgeId> = pv.iter().flat_map(|p| p.edges().iter().copied()).collect();
        let mut pv_heads: HashSet<Vertex> =
            pv.iter().flat_map(|p| p.head_vertices(h).as_slice().to_vec()).collect();
        let mut qv = Vec::new();
        let mut nv = 0;

        for &pos in &scan[v] {
            let e = &h.edges()[pos];
            for &u in &e.vertices {
                if u == v || ledger.get_status(u, v, e.id) != Status::Postpone {
                    continue;
                }
                let candidates = state.paths.get(&u).zip(samples.get(&u));
                let found = candidates.and_then(|(qu, idx)| {
                    idx.iter().copied().find(|&j| {
                        let cand = &qu[j];
                        cand.edges().iter().all(|x| !pv_edges.contains(x))
                            && cand.head_vertices(h).as_slice().iter().all(|x| !pv_heads.contains(x))
                    })
                });
                match found {
                    Some(j) => {
                        let base = &state.paths[&u][j];
                        debug_assert!(base.edges().iter().all(|x| spanner.contains(x)));
                        let new = base.extended(e.id, v);
                        pv_edges.insert(e.id);
                        pv_edges.extend(base.edges().iter().copied());
                        pv_heads.extend(new.head_vertices(h).as_slice().iter().copied());
                        ledger.set_keep(e.id);
                        spanner.insert(e.id);
                        let sampled = base.head_vertices(h).as_slice().iter().any(|&x| is_center[x]);
                        if sampled {
                            nv += 1;
                            qv.push(new.clone());
                        }
                        pv.push(new);
                        if tracing {
                            events.push(ScanEvent::Insert { v, u, edge: e.id, via: j, sampled });
                        }
                        break;
                    }
                    None => {
                        ledger.set_discard(u, v, e.id);
                        if tracing {
                            events.push(ScanEvent::Discard { v, u, edge: e.id, prefix: pv.len() });
                        }
                    }
                }
            }
            if nv == quota {
                if tracing {
                    events.push(ScanEvent::EarlyStop { v });
                }
                break;
            }
        }

        max_pv = max_pv.max(pv.len());
        if qv.len() == quota {
            q_next.insert(v, qv);
        }
        if tracing {
            p_final.insert(v, pv);
        }
    }

    let active: Vec<Vertex> = q_next.keys().copied().collect();
    let remaining: BTreeSet<EdgeId> = state
        .remaining
        .iter()
        .copied()
        .filter(|&id| !spanner.contains(&id) && ledger.edge_status(h.edge(id).expect("known id")) == Status::Postpone)
        .collect();
    let added = spanner.len() - state.spanner.len();

    if let Some(t) = trace {
        t.push(IterationTrace {
            i,
            centers: centers.clone(),
            active_before: state.active.clone(),
            active_after: active.clone(),
            q_prev: state.paths.clone(),
            samples,
            q_next: q_next.clone(),
            p_final,
            events,
            remaining: remaining.iter().copied().collect(),
            spanner: spanner.iter().copied().collect(),
            kept: ledger.kept_edges(),
            discarded: ledger.discarded_pairs(),
        });
    }

    let stats = IterationStats {
        i,
        centers: centers.len(),
        active: active.len(),
        remaining: remaining.len(),
        added_edges: added,
        max_pv,
        wall_ms: elapsed_ms(start),
    };
    let next = ClusterState { i, centers, active, paths: q_next, remaining, spanner, rng: state.rng };
    (next, stats)
}
