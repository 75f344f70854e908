use std::collections::BTreeMap;

use crate::hypercore::{EdgeId, HyperPath, Hypergraph, Vertex};

use super::Params;

/// One step of the edge scan, in scan order.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanEvent {
    /// `h ∘ P` appended to `P_{i-1}(v)` with `P = q_prev[u][via]`.
    Insert { v: Vertex, u: Vertex, edge: EdgeId, via: usize, sampled: bool },
    /// `(u, v, h)` set to `sd`. The snapshot `P_{i-1}(v, h)` is
    /// `p_final[v][..prefix]`.
    Discard { v: Vertex, u: Vertex, edge: EdgeId, prefix: usize },
    /// `n_v` reached the quota; the scan of `v` stopped here.
    EarlyStop { v: Vertex },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub i: usize,
    /// `Z_i`
    pub centers: Vec<Vertex>,
    /// `V_{i-1}`
    pub active_before: Vec<Vertex>,
    /// `V_i`
    pub active_after: Vec<Vertex>,
    /// `Q_{i-1}`
    pub q_prev: BTreeMap<Vertex, Vec<HyperPath>>,
    /// Indices into `q_prev[v]` forming `S_{i-1}(v)`.
    pub samples: BTreeMap<Vertex, Vec<usize>>,
    /// `Q_i`
    pub q_next: BTreeMap<Vertex, Vec<HyperPath>>,
    /// `P_{i-1}(v)` at the end of the scan.
    pub p_final: BTreeMap<Vertex, Vec<HyperPath>>,
    pub events: Vec<ScanEvent>,
    /// `R_i`
    pub remaining: Vec<EdgeId>,
    /// `H_i`
    pub spanner: Vec<EdgeId>,
    /// `kp` hyperedges after the iteration.
    pub kept: Vec<EdgeId>,
    /// `sd` pairs `(h, a, b)`, `a < b`, after the iteration.
    pub discarded: Vec<(EdgeId, Vertex, Vertex)>,
}

/// Everything needed to re-check a build offline.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildTrace {
    pub host: Hypergraph,
    pub k: usize,
    pub f: usize,
    pub quota: usize,
    pub iterations: Vec<IterationTrace>,
}

impl BuildTrace {
    pub(crate) fn new(h: &Hypergraph, params: &Params) -> Self {
        BuildTrace {
            host: h.clone(),
            k: params.k(),
            f: params.f(),
            quota: params.path_quota(h.rank()),
            iterations: Vec::new(),
        }
    }

    /// Number of `sd` events over all iterations.
    pub fn discard_events(&self) -> usize {
        self.iterations
            .iter()
            .flat_map(|it| &it.events)
            .filter(|e| matches!(e, ScanEvent::Discard { .. }))
            .count()
    }
}
