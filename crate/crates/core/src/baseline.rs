//! Baseline constructions: the fault-free greedy spanner, a `+2` additive
//! spanner for unit-weight graphs, and the peel-off EFT hyperspanner built
//! from `f + 1` edge-disjoint greedy hyperspanners.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::assoc::{expand_multigraph, graph_dijkstra, lift, simplify, AssociatedGraph};
use crate::hypercore::{EdgeId, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("stretch parameter k must be at least 1, got {0}")]
    InvalidK(usize),
    #[error("additive construction needs uniform edge weights")]
    NonUniformWeights,
}

fn greedy_order(g: &AssociatedGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&g.edges()[a], &g.edges()[b]);
        ea.weight
            .total_cmp(&eb.weight)
            .then_with(|| (ea.u, ea.v, ea.source).cmp(&(eb.u, eb.v, eb.source)))
    });
    order
}

/// Greedy `(2k-1)`-spanner: scan edges by `(weight, u, v, source)` and keep
/// an edge iff the current spanner distance between its endpoints exceeds
/// `(2k-1)·w`. Returns indices into `g.edges()` in scan order.
pub fn greedy_spanner(g: &AssociatedGraph, k: usize) -> Result<Vec<usize>, BaselineError> {
    if k == 0 {
        return Err(BaselineError::InvalidK(k));
    }
    let stretch = (2 * k - 1) as f64;
    let mut adj = vec![Vec::new(); g.n()];
    let mut kept = Vec::new();
    for i in greedy_order(g) {
        let e = g.edges()[i];
        let bound = stretch * e.weight;
        let d = graph_dijkstra(&adj, e.u, Some(e.v), bound)[e.v];
        if d > bound {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
            kept.push(i);
        }
    }
    Ok(kept)
}

/// `+2` additive spanner for graphs whose edges all have the same weight.
///
/// Keeps every edge with an endpoint of degree below `⌈√n⌉`, greedily picks
/// centers whose closed neighbourhoods dominate the remaining high-degree
/// vertices, and adds a BFS tree from every center. Returns sorted edge
/// indices.
pub fn additive2_spanner(g: &AssociatedGraph) -> Result<Vec<usize>, BaselineError> {
    let edges = g.edges();
    if edges.windows(2).any(|w| w[0].weight != w[1].weight) {
        return Err(BaselineError::NonUniformWeights);
    }
    let n = g.n();
    let threshold = (n as f64).sqrt().ceil() as usize;
    let mut nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        nbrs[e.u].push((e.v, i));
        nbrs[e.v].push((e.u, i));
    }
    let light = |v: usize| nbrs[v].len() < threshold;

    let mut kept: BTreeSet<usize> = edges
        .iter()
        .enumerate()
        .filter(|(_, e)| light(e.u) || light(e.v))
        .map(|(i, _)| i)
        .collect();

    let mut uncovered: BTreeSet<usize> = (0..n).filter(|&v| !light(v)).collect();
    let mut centers = Vec::new();
    while !uncovered.is_empty() {
        let gain = |x: usize| {
            usize::from(uncovered.contains(&x))
                + nbrs[x].iter().filter(|(y, _)| uncovered.contains(y)).count()
        };
        let best = (0..n)
            .max_by_key(|&x| (gain(x), std::cmp::Reverse(x)))
            .expect("n > 0 when a vertex is uncovered");
        uncovered.remove(&best);
        for (y, _) in &nbrs[best] {
            uncovered.remove(y);
        }
        centers.push(best);
    }

    for &c in &centers {
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([c]);
        seen[c] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, i) in &nbrs[x] {
                if !seen[y] {
                    seen[y] = true;
                    kept.insert(i);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(kept.into_iter().collect())
}

/// Fault-free `(2k-1)`-hyperspanner: greedy spanner on the simple associated
/// graph, lifted back.
pub fn lifted_greedy(h: &Hypergraph, k: usize) -> Result<Hypergraph, BaselineError> {
    let g = simplify(&expand_multigraph(h));
    let chosen = greedy_spanner(&g, k)?;
    Ok(lift(&g, &chosen, h))
}

/// Fault-free `+2` hyperspanner of a uniformly weighted hypergraph.
pub fn lifted_additive2(h: &Hypergraph) -> Result<Hypergraph, BaselineError> {
    if !h.is_uniformly_weighted() {
        return Err(BaselineError::NonUniformWeights);
    }
    let g = simplify(&expand_multigraph(h));
    let chosen = additive2_spanner(&g)?;
    Ok(lift(&g, &chosen, h))
}

#[derive(Clone, Debug)]
pub struct PeelOff {
    pub spanner: Hypergraph,
    /// Hyperedges extracted per round; pairwise disjoint.
    pub rounds: Vec<Vec<EdgeId>>,
}

/// Peel-off `f`-EFT `(2k-1)`-hyperspanner: `f + 1` rounds, each extracting a
/// lifted greedy hyperspanner of the hyperedges not yet taken.
pub fn peeloff_eft(h: &Hypergraph, k: usize, f: usize) -> Result<PeelOff, BaselineError> {
    if k == 0 {
        return Err(BaselineError::InvalidK(k));
    }
    let mut remaining: BTreeSet<EdgeId> = h.edge_ids().collect();
    let mut rounds = Vec::new();
    let mut taken = BTreeSet::new();
    for _ in 0..=f {
        if remaining.is_empty() {
            break;
        }
        let rest = h.restrict(remaining.iter().copied().collect::<Vec<_>>());
        let round: Vec<EdgeId> = lifted_greedy(&rest, k)?.edge_ids().collect();
        for id in &round {
            remaining.remove(id);
            taken.insert(*id);
        }
        rounds.push(round);
    }
    Ok(PeelOff { spanner: h.restrict(taken), rounds })
}

/// Reported size constant `|S| / n^{3/2}` of an additive spanner.
pub fn additive_size_constant(edges: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    edges as f64 / (n as f64).powf(1.5)
}

#[cfg(test)]
pub(crate) fn greedy_spanner_naive(g: &AssociatedGraph, k: usize) -> Vec<usize> {
    let stretch = (2 * k - 1) as f64;
    let mut adj = vec![Vec::new(); g.n()];
    let mut kept = Vec::new();
    for i in greedy_order(g) {
        let e = g.edges()[i];
        if graph_dijkstra(&adj, e.u, None, crate::hypercore::INF)[e.v] > stretch * e.weight {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
            kept.push(i);
        }
    }
    kept
}
