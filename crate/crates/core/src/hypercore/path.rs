use thiserror::Error;

use super::{EdgeId, Hypergraph, Vertex};

/// The head of a path: its first hyperedge, or the start vertex of a
/// trivial (edgeless) path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Edge(EdgeId),
    Vertex(Vertex),
}

/// An ordered hyperedge sequence from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperPath {
    edges: Vec<EdgeId>,
    start: Vertex,
    end: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("hyperedge {0} is not in the hypergraph")]
    UnknownEdge(EdgeId),
    #[error("start vertex {0} is not in the first hyperedge")]
    BadStart(Vertex),
    #[error("end vertex {0} is not in the last hyperedge")]
    BadEnd(Vertex),
    #[error("trivial path has start {start} != end {end}")]
    TrivialMismatch { start: Vertex, end: Vertex },
    #[error("hyperedges {0} and {1} are consecutive but share no vertex")]
    Disconnected(EdgeId, EdgeId),
}

impl HyperPath {
    pub fn trivial(v: Vertex) -> Self {
        HyperPath { edges: Vec::new(), start: v, end: v }
    }

    /// No validation; see [`HyperPath::validate`].
    pub fn new(edges: Vec<EdgeId>, start: Vertex, end: Vertex) -> Self {
        HyperPath { edges, start, end }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn end(&self) -> Vertex {
        self.end
    }

    /// Hop count.
    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn head(&self) -> Head {
        match self.edges.first() {
            Some(&e) => Head::Edge(e),
            None => Head::Vertex(self.start),
        }
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// Vertices of the head.
    pub fn head_vertices<'a>(&self, h: &'a Hypergraph) -> HeadVertices<'a> {
        match self.head() {
            Head::Edge(e) => HeadVertices::Edge(&h.edge(e).expect("head edge in hypergraph").vertices),
            Head::Vertex(v) => HeadVertices::Single(v),
        }
    }

    /// `h ∘ P`: appends `edge` at the end, arriving at `new_end`.
    pub fn extended(&self, edge: EdgeId, new_end: Vertex) -> HyperPath {
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.extend_from_slice(&self.edges);
        edges.push(edge);
        HyperPath { edges, start: self.start, end: new_end }
    }

    pub fn weight(&self, h: &Hypergraph) -> f64 {
        self.edges
            .iter()
            .map(|&e| h.edge(e).map_or(f64::NAN, |e| e.weight))
            .sum()
    }

    /// Hyperedge weights from head to last edge.
    pub fn weights(&self, h: &Hypergraph) -> Vec<f64> {
        self.edges
            .iter()
            .map(|&e| h.edge(e).map_or(f64::NAN, |e| e.weight))
            .collect()
    }

    pub fn shares_edge_with(&self, other: &HyperPath) -> bool {
        self.edges.iter().any(|e| other.edges.contains(e))
    }

    /// Checks the structural invariants against `h`.
    pub fn validate(&self, h: &Hypergraph) -> Result<(), PathError> {
        let Some((&first, _)) = self.edges.split_first() else {
            return if self.start == self.end {
                Ok(())
            } else {
                Err(PathError::TrivialMismatch { start: self.start, end: self.end })
            };
        };
        let lookup = |id: EdgeId| h.edge(id).ok_or(PathError::UnknownEdge(id));
        if !lookup(first)?.contains(self.start) {
            return Err(PathError::BadStart(self.start));
        }
        for w in self.edges.windows(2) {
            if !lookup(w[0])?.intersects(lookup(w[1])?) {
                return Err(PathError::Disconnected(w[0], w[1]));
            }
        }
        if !lookup(*self.edges.last().unwrap())?.contains(self.end) {
            return Err(PathError::BadEnd(self.end));
        }
        Ok(())
    }
}

/// Borrowed vertex set of a path head.
#[derive(Clone, Copy, Debug)]
pub enum HeadVertices<'a> {
    Edge(&'a [Vertex]),
    Single(Vertex),
}

impl<'a> HeadVertices<'a> {
    pub fn as_slice(&self) -> &[Vertex] {
        match self {
            HeadVertices::Edge(vs) => vs,
            HeadVertices::Single(v) => std::slice::from_ref(v),
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.as_slice().contains(&v)
    }
}
