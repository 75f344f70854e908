//! Hypergraph data model, fault sets, and the shortest-path engine.
//!
//! A [`Hypergraph`] is immutable once built. Hyperedges carry a stable
//! [`EdgeId`]; sub-hypergraphs produced by [`Hypergraph::restrict`] keep the
//! ids of their host so that fault sets drawn from the host apply to them
//! directly.
//!
//! Traversing a hyperedge between any two of its members costs its weight
//! once, so distances coincide with distances in the clique expansion.

mod dijkstra;
mod io;
mod path;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use dijkstra::DistanceMatrix;
pub use io::ParseError;
pub(crate) use io::format_weight;
pub use path::{Head, HyperPath, PathError};

/// Dense vertex id in `0..n`.
pub type Vertex = usize;

/// Stable hyperedge id. For a freshly built hypergraph ids are `0..m` in
/// insertion order.
pub type EdgeId = usize;

/// Distance value used for disconnected pairs.
pub const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("hyperedge {edge}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { edge: usize, vertex: Vertex, n: usize },
    #[error("hyperedge {edge}: needs at least 2 vertices, got {size}")]
    TooFewVertices { edge: usize, size: usize },
    #[error("hyperedge {edge}: vertex {vertex} listed twice")]
    RepeatedVertex { edge: usize, vertex: Vertex },
    #[error("hyperedge {edge}: weight {weight} is not a positive finite number")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("hyperedge {second} duplicates hyperedge {first} (same vertices and weight)")]
    DuplicateHyperedge { first: usize, second: usize },
    #[error("vertex {vertex} out of range (n = {n})")]
    QueryOutOfRange { vertex: Vertex, n: usize },
    #[error("unknown hyperedge id {0}")]
    UnknownEdge(EdgeId),
    #[error("fault set lists hyperedge {0} twice")]
    DuplicateFault(EdgeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub id: EdgeId,
    /// Sorted ascending, distinct.
    pub vertices: Vec<Vertex>,
    pub weight: f64,
}

impl Hyperedge {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Unordered vertex pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .flat_map(move |(i, &a)| self.vertices[i + 1..].iter().map(move |&b| (a, b)))
    }

    pub fn intersects(&self, other: &Hyperedge) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }
}

/// A weighted hypergraph on vertices `0..n`.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    /// Sorted by id.
    edges: Vec<Hyperedge>,
    rank: usize,
    multi: bool,
    /// vertex -> positions in `edges`
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Hypergraph {
    /// Builds a hypergraph from `(weight, vertices)` pairs, assigning ids in
    /// order. Exact duplicates (same vertex set and weight) are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = (f64, Vec<Vertex>)>,
    {
        Self::build(n, edges, false)
    }

    /// Like [`Hypergraph::new`] but permits exact duplicate hyperedges; each
    /// copy is a distinct fault.
    pub fn new_multi<I>(n: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = (f64, Vec<Vertex>)>,
    {
        Self::build(n, edges, true)
    }

    fn build<I>(n: usize, edges: I, multi: bool) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = (f64, Vec<Vertex>)>,
    {
        let mut out = Vec::new();
        for (id, (weight, mut vertices)) in edges.into_iter().enumerate() {
            if !(weight.is_finite() && weight > 0.0) {
                return Err(HypergraphError::NonPositiveWeight { edge: id, weight });
            }
            vertices.sort_unstable();
            if let Some(&vertex) = vertices.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { edge: id, vertex, n });
            }
            if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex { edge: id, vertex: w[0] });
            }
            if vertices.len() < 2 {
                return Err(HypergraphError::TooFewVertices { edge: id, size: vertices.len() });
            }
            out.push(Hyperedge { id, vertices, weight });
        }
        if !multi {
            if let Some((first, second)) = find_duplicate(&out) {
                return Err(HypergraphError::DuplicateHyperedge { first, second });
            }
        }
        Ok(Self::from_sorted(n, out, multi))
    }

    /// `edges` must already be valid and sorted by id.
    fn from_sorted(n: usize, edges: Vec<Hyperedge>, multi: bool) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0].id < w[1].id));
        let mut incidence = vec![Vec::new(); n];
        for (pos, e) in edges.iter().enumerate() {
            for &v in &e.vertices {
                incidence[v].push(pos);
            }
        }
        let rank = edges.iter().map(Hyperedge::len).max().unwrap_or(0);
        Hypergraph { n, edges, rank, multi, incidence }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Largest hyperedge size (0 for an edgeless hypergraph).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn allows_multi_edges(&self) -> bool {
        self.multi
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Hyperedge> {
        self.position(id).map(|p| &self.edges[p])
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.position(id).is_some()
    }

    pub(crate) fn position(&self, id: EdgeId) -> Option<usize> {
        if self.edges.get(id).is_some_and(|e| e.id == id) {
            return Some(id);
        }
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    /// Hyperedges containing `v`.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = &Hyperedge> + '_ {
        self.incidence[v].iter().map(move |&p| &self.edges[p])
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// True when every hyperedge has the same weight (vacuously for m = 0).
    pub fn is_uniformly_weighted(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].weight == w[1].weight)
    }

    /// Sub-hypergraph keeping only the given ids (unknown ids are ignored).
    /// Ids and host edge order are preserved.
    pub fn restrict<I>(&self, ids: I) -> Hypergraph
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut keep = vec![false; self.edges.len()];
        for id in ids {
            if let Some(p) = self.position(id) {
                keep[p] = true;
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| e.clone())
            .collect();
        Self::from_sorted(self.n, edges, self.multi)
    }

    /// Sub-hypergraph without the given ids.
    pub fn without<I>(&self, ids: I) -> Hypergraph
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let drop: std::collections::HashSet<EdgeId> = ids.into_iter().collect();
        self.restrict(self.edge_ids().filter(|id| !drop.contains(id)).collect::<Vec<_>>())
    }

    /// True when every hyperedge of `self` is a hyperedge of `host` (same id,
    /// vertices and weight).
    pub fn is_subhypergraph_of(&self, host: &Hypergraph) -> bool {
        self.n == host.n && self.edges.iter().all(|e| host.edge(e.id) == Some(e))
    }

    /// Canonical form: edges sorted by `(weight, vertex tuple)` with ids
    /// reassigned as `0..m`.
    pub fn canonicalize(&self) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.sort_by(|a, b| {
            a.weight
                .total_cmp(&b.weight)
                .then_with(|| a.vertices.cmp(&b.vertices))
        });
        for (id, e) in edges.iter_mut().enumerate() {
            e.id = id;
        }
        Self::from_sorted(self.n, edges, self.multi)
    }

    /// Maps each hyperedge of `sub` (given with arbitrary ids, e.g. loaded
    /// from a file) onto a hyperedge of `self` with the same vertices and
    /// weight, and returns the corresponding restriction of `self`.
    /// Duplicates are matched by multiplicity, lowest id first.
    pub fn match_subhypergraph(&self, sub: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        let mut pool: HashMap<(Vec<Vertex>, u64), Vec<EdgeId>> = HashMap::new();
        for e in self.edges.iter().rev() {
            pool.entry((e.vertices.clone(), e.weight.to_bits()))
                .or_default()
                .push(e.id);
        }
        let mut ids = Vec::with_capacity(sub.m());
        for e in &sub.edges {
            let key = (e.vertices.clone(), e.weight.to_bits());
            match pool.get_mut(&key).and_then(Vec::pop) {
                Some(id) => ids.push(id),
                None => return Err(HypergraphError::UnknownEdge(e.id)),
            }
        }
        Ok(self.restrict(ids))
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), HypergraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(HypergraphError::QueryOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Per-position fault mask. Ids not present in `self` are ignored.
    pub(crate) fn fault_mask(&self, faults: &FaultSet) -> Vec<bool> {
        let mut mask = vec![false; self.edges.len()];
        for &id in faults.ids() {
            if let Some(p) = self.position(id) {
                mask[p] = true;
            }
        }
        mask
    }
}

fn find_duplicate(edges: &[Hyperedge]) -> Option<(usize, usize)> {
    let mut seen: HashMap<(&[Vertex], u64), usize> = HashMap::new();
    for e in edges {
        if let Some(&first) = seen.get(&(e.vertices.as_slice(), e.weight.to_bits())) {
            return Some((first, e.id));
        }
        seen.insert((e.vertices.as_slice(), e.weight.to_bits()), e.id);
    }
    None
}

/// A set of faulty hyperedge ids, stored sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaultSet(Vec<EdgeId>);

impl FaultSet {
    pub fn empty() -> Self {
        FaultSet(Vec::new())
    }

    /// Rejects repeated ids.
    pub fn new<I: IntoIterator<Item = EdgeId>>(ids: I) -> Result<Self, HypergraphError> {
        let mut ids: Vec<EdgeId> = ids.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateFault(w[0]));
        }
        Ok(FaultSet(ids))
    }

    /// For ids already known to be sorted and distinct.
    pub(crate) fn from_sorted(ids: Vec<EdgeId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        FaultSet(ids)
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn is_subset(&self, other: &FaultSet) -> bool {
        self.0.iter().all(|&id| other.contains(id))
    }

    /// Checks every id against `host`.
    pub fn validate(&self, host: &Hypergraph) -> Result<(), HypergraphError> {
        match self.0.iter().find(|&&id| !host.contains_edge(id)) {
            Some(&id) => Err(HypergraphError::UnknownEdge(id)),
            None => Ok(()),
        }
    }

    /// Parses the one-line fault file format (space-separated ids).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        io::parse_fault_line(text)
    }
}

impl fmt::Display for FaultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}
