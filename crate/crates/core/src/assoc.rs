//! Associated graphs: clique expansion of a hypergraph, the simple
//! (lightest-parallel-edge) reduction, and lifting a graph spanner back to a
//! sub-hypergraph.
//!
//! Every graph edge remembers the hyperedge it came from, so any edge subset
//! lifts to the set of its source hyperedges. A multiplicative `α`-spanner
//! (or additive `+β`-spanner) of either associated graph lifts to a
//! hyperspanner with the same guarantee.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;

use crate::hypercore::{DistanceMatrix, EdgeId, Hypergraph, Vertex, INF};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphEdge {
    /// `u < v`.
    pub u: Vertex,
    pub v: Vertex,
    pub weight: f64,
    pub source: EdgeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssociatedGraph {
    n: usize,
    edges: Vec<GraphEdge>,
    simple: bool,
}

/// Replaces every hyperedge `h` by the `C(|h|, 2)` undirected edges of its
/// clique, each of weight `w(h)`. Parallel edges are kept.
pub fn expand_multigraph(h: &Hypergraph) -> AssociatedGraph {
    let edges = h
        .edges()
        .iter()
        .flat_map(|e| {
            e.pairs().map(move |(u, v)| GraphEdge { u, v, weight: e.weight, source: e.id })
        })
        .collect();
    AssociatedGraph { n: h.n(), edges, simple: false }
}

/// Keeps, for every vertex pair, the lightest edge; ties go to the smallest
/// source id. Output is sorted by `(u, v)`. Idempotent.
pub fn simplify(g: &AssociatedGraph) -> AssociatedGraph {
    let mut best: HashMap<(Vertex, Vertex), GraphEdge> = HashMap::new();
    for e in &g.edges {
        best.entry((e.u, e.v))
            .and_modify(|cur| {
                if (e.weight, e.source) < (cur.weight, cur.source) {
                    *cur = *e;
                }
            })
            .or_insert(*e);
    }
    let mut edges: Vec<GraphEdge> = best.into_values().collect();
    edges.sort_by_key(|e| (e.u, e.v));
    AssociatedGraph { n: g.n, edges, simple: true }
}

/// The sub-hypergraph of `h` formed by the source hyperedges of the chosen
/// graph edges (indices into `g.edges()`), in `h`'s edge order.
pub fn lift(g: &AssociatedGraph, spanner_edges: &[usize], h: &Hypergraph) -> Hypergraph {
    let ids: BTreeSet<EdgeId> = spanner_edges.iter().map(|&i| g.edges[i].source).collect();
    h.restrict(ids)
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, Vertex);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) type Adjacency = Vec<Vec<(Vertex, f64)>>;

/// Dijkstra on an adjacency list. With a `cutoff`, vertices farther than it
/// are left at [`INF`] and the search stops once `target` is settled.
pub(crate) fn graph_dijkstra(
    adj: &Adjacency,
    source: Vertex,
    target: Option<Vertex>,
    cutoff: f64,
) -> Vec<f64> {
    let mut dist = vec![INF; adj.len()];
    let mut done = vec![false; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if target == Some(u) {
            break;
        }
        for &(x, w) in &adj[u] {
            let nd = d + w;
            if nd <= cutoff && nd < dist[x] {
                dist[x] = nd;
                heap.push(Entry(nd, x));
            }
        }
    }
    dist
}

impl AssociatedGraph {
    pub fn from_edges(n: usize, edges: Vec<GraphEdge>, simple: bool) -> Self {
        AssociatedGraph { n, edges, simple }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub(crate) fn adjacency_of<'a, I>(&self, edges: I) -> Adjacency
    where
        I: IntoIterator<Item = &'a GraphEdge>,
    {
        let mut adj = vec![Vec::new(); self.n];
        for e in edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        adj
    }

    pub fn all_pairs(&self) -> DistanceMatrix {
        let adj = self.adjacency_of(&self.edges);
        DistanceMatrix::from_rows((0..self.n).map(|s| graph_dijkstra(&adj, s, None, INF)).collect())
    }

    /// All-pairs distances in the subgraph formed by `edge_indices`.
    pub fn all_pairs_of(&self, edge_indices: &[usize]) -> DistanceMatrix {
        let adj = self.adjacency_of(edge_indices.iter().map(|&i| &self.edges[i]));
        DistanceMatrix::from_rows((0..self.n).map(|s| graph_dijkstra(&adj, s, None, INF)).collect())
    }

    /// Edge-list export, one `u v w src` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                e.u,
                e.v,
                crate::hypercore::format_weight(e.weight),
                e.source
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clique() {
        let h = Hypergraph::new(3, [(5.0, vec![0, 1, 2])]).unwrap();
        let g = expand_multigraph(&h);
        let got: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.weight, e.source)).collect();
        assert_eq!(got, vec![(0, 1, 5.0, 0), (0, 2, 5.0, 0), (1, 2, 5.0, 0)]);
        assert!(!g.is_simple());
    }

    #[test]
    fn parallel_edges_kept_then_reduced() {
        let h = Hypergraph::new(3, [(1.0, vec![0, 1]), (3.0, vec![0, 1, 2])]).unwrap();
        let g = expand_multigraph(&h);
        assert_eq!(g.edges().iter().filter(|e| (e.u, e.v) == (0, 1)).count(), 2);
        let s = simplify(&g);
        let e01: Vec<_> = s.edges().iter().filter(|e| (e.u, e.v) == (0, 1)).collect();
        assert_eq!(e01.len(), 1);
        assert_eq!(e01[0].weight, 1.0);
        assert!(s.is_simple());
        assert_eq!(simplify(&s), s);
    }

    #[test]
    fn simplify_tie_break_smallest_source() {
        let g = AssociatedGraph::from_edges(
            2,
            vec![
                GraphEdge { u: 0, v: 1, weight: 1.0, source: 3 },
                GraphEdge { u: 0, v: 1, weight: 1.0, source: 1 },
            ],
            false,
        );
        assert_eq!(simplify(&g).edges()[0].source, 1);
    }

    #[test]
    fn lift_identity_and_many_to_one() {
        let h = Hypergraph::new(4, [(1.0, vec![0, 1, 2]), (2.0, vec![2, 3])]).unwrap();
        let g = expand_multigraph(&h);
        let all: Vec<usize> = (0..g.m()).collect();
        assert_eq!(lift(&g, &all, &h), h);
        let lifted = lift(&g, &[0, 2], &h);
        assert_eq!(lifted.m(), 1);
        assert_eq!(lifted.edge_ids().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn edge_list_export() {
        let h = Hypergraph::new(3, [(2.5, vec![0, 2])]).unwrap();
        assert_eq!(expand_multigraph(&h).to_edge_list(), "0 2 2.5 0\n");
    }

    #[test]
    fn cutoff_dijkstra() {
        let adj: Adjacency = vec![vec![(1, 1.0)], vec![(0, 1.0), (2, 5.0)], vec![(1, 5.0)]];
        assert_eq!(graph_dijkstra(&adj, 0, None, 3.0), vec![0.0, 1.0, INF]);
        assert_eq!(graph_dijkstra(&adj, 0, None, INF), vec![0.0, 1.0, 6.0]);
    }
}
