//! Dijkstra over hypergraphs: vertex -> incident hyperedges -> members.
//!
//! A hyperedge is expanded once, from its first settled member; that member
//! has the smallest distance among all members, so later expansions could
//! not improve anything. Cost per query is O((n + Σ|h|) log n).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{FaultSet, HyperPath, Hypergraph, HypergraphError, Vertex, INF};

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    v: Vertex,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of a single-source run. `parent[v] = (previous vertex, edge position)`.
pub(crate) struct SourceRun {
    pub dist: Vec<f64>,
    parent: Vec<Option<(Vertex, usize)>>,
    source: Vertex,
}

impl SourceRun {
    /// Edge positions from the source to `t`, in order.
    pub fn positions_to(&self, t: Vertex) -> Option<Vec<usize>> {
        if self.dist[t] == INF {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = t;
        while cur != self.source {
            let (prev, pos) = self.parent[cur].expect("reached vertex has a parent");
            out.push(pos);
            cur = prev;
        }
        out.reverse();
        Some(out)
    }
}

/// Row-major all-pairs distance table.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * n, "square matrix");
        DistanceMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

impl Hypergraph {
    pub(crate) fn run_dijkstra(
        &self,
        source: Vertex,
        mask: &[bool],
        target: Option<Vertex>,
    ) -> SourceRun {
        let n = self.n();
        let mut dist = vec![INF; n];
        let mut parent = vec![None; n];
        let mut done = vec![false; n];
        let mut expanded = vec![false; self.m()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry { dist: 0.0, v: source });
        while let Some(Entry { dist: d, v: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if target == Some(u) {
                break;
            }
            for &pos in &self.incidence[u] {
                if mask[pos] || expanded[pos] {
                    continue;
                }
                expanded[pos] = true;
                let e = &self.edges[pos];
                let nd = d + e.weight;
                for &x in &e.vertices {
                    if nd < dist[x] {
                        dist[x] = nd;
                        parent[x] = Some((u, pos));
                        heap.push(Entry { dist: nd, v: x });
                    }
                }
            }
        }
        SourceRun { dist, parent, source }
    }

    pub(crate) fn distances_masked(&self, source: Vertex, mask: &[bool]) -> Vec<f64> {
        self.run_dijkstra(source, mask, None).dist
    }

    pub(crate) fn all_pairs_masked(&self, mask: &[bool]) -> DistanceMatrix {
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for s in 0..n {
            data.extend(self.distances_masked(s, mask));
        }
        DistanceMatrix { n, data }
    }

    /// Distances from `source` to every vertex in `self ∖ faults`.
    pub fn distances_from(&self, source: Vertex, faults: &FaultSet) -> Result<Vec<f64>, HypergraphError> {
        self.check_vertex(source)?;
        Ok(self.distances_masked(source, &self.fault_mask(faults)))
    }

    /// `δ(u, v)` in `self ∖ faults`; [`INF`] when disconnected.
    pub fn shortest_distance(&self, faults: &FaultSet, u: Vertex, v: Vertex) -> Result<f64, HypergraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.run_dijkstra(u, &self.fault_mask(faults), Some(v)).dist[v])
    }

    /// A witness for [`Hypergraph::shortest_distance`]; `None` iff the
    /// distance is infinite.
    pub fn shortest_path(&self, faults: &FaultSet, u: Vertex, v: Vertex) -> Result<Option<HyperPath>, HypergraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let run = self.run_dijkstra(u, &self.fault_mask(faults), Some(v));
        Ok(run.positions_to(v).map(|positions| {
            let ids = positions.into_iter().map(|p| self.edges[p].id).collect();
            HyperPath::new(ids, u, v)
        }))
    }

    /// All-pairs distances in `self ∖ faults`.
    pub fn all_pairs(&self, faults: &FaultSet) -> DistanceMatrix {
        self.all_pairs_masked(&self.fault_mask(faults))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> FaultSet {
        FaultSet::empty()
    }

    #[test]
    fn one_hop_costs_weight_once() {
        let h = Hypergraph::new(3, [(2.0, vec![0, 1, 2])]).unwrap();
        assert_eq!(h.shortest_distance(&none(), 0, 2).unwrap(), 2.0);
        assert_eq!(h.shortest_distance(&none(), 1, 1).unwrap(), 0.0);
        let f = FaultSet::new([0]).unwrap();
        assert_eq!(h.shortest_distance(&f, 0, 2).unwrap(), INF);
        assert_eq!(h.shortest_path(&f, 0, 2).unwrap(), None);
    }

    #[test]
    fn concatenation() {
        let h = Hypergraph::new(3, [(1.0, vec![0, 1]), (3.0, vec![1, 2])]).unwrap();
        assert_eq!(h.shortest_distance(&none(), 0, 2).unwrap(), 4.0);
        let p = h.shortest_path(&none(), 0, 2).unwrap().unwrap();
        assert_eq!(p.edges(), &[0, 1]);
        p.validate(&h).unwrap();
    }

    #[test]
    fn faults_on_sub_hypergraph_use_host_ids() {
        let h = Hypergraph::new(3, [(1.0, vec![0, 1]), (1.0, vec![1, 2]), (5.0, vec![0, 2])]).unwrap();
        let s = h.restrict([1, 2]);
        let f = FaultSet::new([2]).unwrap();
        assert_eq!(s.shortest_distance(&f, 0, 2).unwrap(), INF);
        let f = FaultSet::new([0]).unwrap();
        assert_eq!(s.shortest_distance(&f, 0, 2).unwrap(), 5.0);
    }

    #[test]
    fn out_of_range_queries() {
        let h = Hypergraph::new(2, [(1.0, vec![0, 1])]).unwrap();
        assert!(h.shortest_distance(&none(), 0, 2).is_err());
        assert!(h.distances_from(5, &none()).is_err());
    }

    #[test]
    fn all_pairs_is_symmetric() {
        let h = Hypergraph::new(4, [(1.0, vec![0, 1, 2]), (2.0, vec![2, 3])]).unwrap();
        let d = h.all_pairs(&none());
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(d.get(u, v), d.get(v, u));
            }
        }
        assert_eq!(d.get(0, 3), 3.0);
    }
}
