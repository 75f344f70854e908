use std::collections::HashMap;

use crate::hypercore::{EdgeId, Hyperedge, Hypergraph, Vertex};

/// Status of a `(u, v, h)` triple or of a whole hyperedge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// `kp`: the hyperedge is in the spanner.
    Keep,
    /// `sd`: safely discarded for this pair.
    Discard,
    /// `pp`: postponed.
    Postpone,
}

#[derive(Clone, Debug)]
enum Mark {
    Kept,
    /// Discarded pairs, stored as `(min, max)`.
    Discarded(Vec<(Vertex, Vertex)>),
}

/// Per-hyperedge status memo. An absent entry means every pair is `pp`.
#[derive(Clone, Debug, Default)]
pub struct TripleStatusLedger {
    marks: HashMap<EdgeId, Mark>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StatusCounts {
    pub kept_edges: usize,
    pub discarded_edges: usize,
    pub postponed_edges: usize,
    /// `sd` pairs on hyperedges that are not kept.
    pub discarded_pairs: usize,
}

fn ordered(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl TripleStatusLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Symmetric in `u` and `v`.
    pub fn get_status(&self, u: Vertex, v: Vertex, h: EdgeId) -> Status {
        match self.marks.get(&h) {
            Some(Mark::Kept) => Status::Keep,
            Some(Mark::Discarded(pairs)) if pairs.contains(&ordered(u, v)) => Status::Discard,
            _ => Status::Postpone,
        }
    }

    /// `kp` if kept, `sd` if every pair is discarded, `pp` otherwise.
    pub fn edge_status(&self, h: &Hyperedge) -> Status {
        match self.marks.get(&h.id) {
            Some(Mark::Kept) => Status::Keep,
            Some(Mark::Discarded(pairs)) if h.pairs().all(|p| pairs.contains(&p)) => Status::Discard,
            _ => Status::Postpone,
        }
    }

    pub fn set_keep(&mut self, h: EdgeId) {
        self.marks.insert(h, Mark::Kept);
    }

    /// No effect on a kept hyperedge.
    pub fn set_discard(&mut self, u: Vertex, v: Vertex, h: EdgeId) {
        let pair = ordered(u, v);
        match self.marks.entry(h).or_insert_with(|| Mark::Discarded(Vec::new())) {
            Mark::Kept => {}
            Mark::Discarded(pairs) => {
                if !pairs.contains(&pair) {
                    pairs.push(pair);
                }
            }
        }
    }

    pub fn is_kept(&self, h: EdgeId) -> bool {
        matches!(self.marks.get(&h), Some(Mark::Kept))
    }

    pub fn kept_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .marks
            .iter()
            .filter(|(_, m)| matches!(m, Mark::Kept))
            .map(|(&id, _)| id)
            .collect();
        out.sort_unstable();
        out
    }

    /// All `sd` pairs of non-kept hyperedges, sorted.
    pub fn discarded_pairs(&self) -> Vec<(EdgeId, Vertex, Vertex)> {
        let mut out: Vec<_> = self
            .marks
            .iter()
            .filter_map(|(&id, m)| match m {
                Mark::Discarded(pairs) => Some(pairs.iter().map(move |&(a, b)| (id, a, b))),
                Mark::Kept => None,
            })
            .flatten()
            .collect();
        out.sort_unstable();
        out
    }

    pub fn counts(&self, h: &Hypergraph) -> StatusCounts {
        let mut c = StatusCounts::default();
        for e in h.edges() {
            match self.edge_status(e) {
                Status::Keep => c.kept_edges += 1,
                Status::Discard => c.discarded_edges += 1,
                Status::Postpone => c.postponed_edges += 1,
            }
            if let Some(Mark::Discarded(pairs)) = self.marks.get(&e.id) {
                c.discarded_pairs += pairs.len();
            }
        }
        c
    }
}
