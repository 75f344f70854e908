//! Offline re-check of a traced clustering build.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::eftcluster::{count_disjoint_pairs, BuildStats, BuildTrace, IterationTrace, ScanEvent};
use crate::hypercore::{EdgeId, HyperPath, Hypergraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantKind {
    /// Hyperedge weights along a path decrease somewhere.
    WeightOrder,
    /// A postponed pair has an inactive endpoint or is lighter than a
    /// cluster path edge.
    PostponedWeight,
    /// Shared hyperedges or head vertices where none are allowed.
    Disjointness,
    /// `|Q_i(v)|` differs from the quota.
    Quota,
    /// A cluster path whose head holds no center.
    HeadCenter,
    /// A path with more than `i` hops.
    HopBound,
    /// A path that is not a valid path ending at its owner.
    PathShape,
    /// Scanning continued after the quota was met, or stopped early.
    EarlyStop,
    /// `H_i`, `R_i` or the kept set disagree with the events.
    Bookkeeping,
    /// A status reverted.
    StatusMonotonicity,
    /// A discarded triple had an eligible sampled path.
    DiscardSoundness,
    /// Fewer than `2f + 1` pairs where they are guaranteed.
    PairBound,
    /// The trace contradicts itself or the stats.
    TraceMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct InvariantViolation {
    pub kind: InvariantKind,
    pub iteration: usize,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in iteration {}: {}", self.kind, self.iteration, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayReport {
    pub iterations: usize,
    pub paths_checked: usize,
    pub insertions: usize,
    pub discard_events: usize,
    /// Discards where fewer than half of `Q_{i-1}(u)` overlapped the
    /// snapshot. Possible with small probability; not fatal.
    pub half_overlap_anomalies: usize,
    /// Discards certified with at least `2f + 1` pairs.
    pub pair_bound_certified: usize,
    /// Discards where the pair count is not guaranteed: `Q_{i-1}(u)` is
    /// below quota, the quota is overridden below `12(k+r)f`, or a list
    /// has overlapping members.
    pub pair_bound_not_applicable: usize,
}

impl ReplayReport {
    pub fn anomaly_rate(&self) -> f64 {
        if self.discard_events == 0 {
            0.0
        } else {
            self.half_overlap_anomalies as f64 / self.discard_events as f64
        }
    }
}

struct Ctx<'a> {
    h: &'a Hypergraph,
    i: usize,
}

impl Ctx<'_> {
    fn fail<T>(&self, kind: InvariantKind, detail: impl Into<String>) -> Result<T, InvariantViolation> {
        Err(InvariantViolation { kind, iteration: self.i, detail: detail.into() })
    }

    fn ensure(&self, ok: bool, kind: InvariantKind, detail: impl FnOnce() -> String) -> Result<(), InvariantViolation> {
        if ok {
            Ok(())
        } else {
            self.fail(kind, detail())
        }
    }

    fn weight(&self, e: EdgeId) -> f64 {
        self.h.edge(e).map_or(f64::NAN, |x| x.weight)
    }

    fn check_path(&self, p: &HyperPath, owner: Vertex) -> Result<(), InvariantViolation> {
        use InvariantKind::*;
        self.ensure(p.validate(self.h).is_ok() && p.end() == owner, PathShape, || {
            format!("path {:?} of vertex {owner}", p.edges())
        })?;
        self.ensure(p.hops() <= self.i, HopBound, || format!("path {:?} has {} hops", p.edges(), p.hops()))?;
        let w = p.weights(self.h);
        self.ensure(w.windows(2).all(|x| x[0] <= x[1]), WeightOrder, || {
            format!("path {:?} of vertex {owner} has weights {w:?}", p.edges())
        })
    }

    fn heads(&self, p: &HyperPath) -> Vec<Vertex> {
        p.head_vertices(self.h).as_slice().to_vec()
    }
}

/// Running `P_{i-1}(v)` with its edge and head-vertex sets.
struct Pv {
    paths: Vec<HyperPath>,
    edges: HashSet<EdgeId>,
    heads: HashSet<Vertex>,
}

impl Pv {
    fn new(ctx: &Ctx, init: &[HyperPath]) -> Self {
        let mut pv = Pv { paths: Vec::new(), edges: HashSet::new(), heads: HashSet::new() };
        for p in init {
            pv.push(ctx, p.clone());
        }
        pv
    }

    fn eligible(&self, ctx: &Ctx, p: &HyperPath) -> bool {
        p.edges().iter().all(|e| !self.edges.contains(e)) && ctx.heads(p).iter().all(|x| !self.heads.contains(x))
    }

    fn push(&mut self, ctx: &Ctx, p: HyperPath) {
        self.edges.extend(p.edges().iter().copied());
        self.heads.extend(ctx.heads(&p));
        self.paths.push(p);
    }
}

/// Re-checks every per-iteration invariant of a traced build, replays
/// every scan event, and certifies discards with
/// [`count_disjoint_pairs`] where the pair bound is guaranteed.
pub fn replay_invariants(stats: &BuildStats, trace: &BuildTrace) -> Result<ReplayReport, InvariantViolation> {
    let h = &trace.host;
    let mut report = ReplayReport::default();
    let outer = Ctx { h, i: 0 };
    if stats.degenerate {
        outer.ensure(trace.iterations.is_empty(), InvariantKind::TraceMismatch, || {
            "degenerate build has iterations".into()
        })?;
        return Ok(report);
    }
    outer.ensure(
        trace.iterations.len() == trace.k && stats.iterations.len() == trace.k,
        InvariantKind::TraceMismatch,
        || format!("{} traced iterations for k = {}", trace.iterations.len(), trace.k),
    )?;

    let all: Vec<Vertex> = (0..h.n()).collect();
    let mut prev_centers = all.clone();
    let mut prev_active = all.clone();
    let mut prev_q: BTreeMap<Vertex, Vec<HyperPath>> = all.iter().map(|&v| (v, vec![HyperPath::trivial(v)])).collect();
    let mut prev_remaining: BTreeSet<EdgeId> = h.edge_ids().collect();
    let mut prev_spanner: BTreeSet<EdgeId> = BTreeSet::new();
    let mut prev_kept: BTreeSet<EdgeId> = BTreeSet::new();
    let mut prev_discarded: BTreeSet<(EdgeId, Vertex, Vertex)> = BTreeSet::new();

    for (idx, it) in trace.iterations.iter().enumerate() {
        let ctx = Ctx { h, i: it.i };
        use InvariantKind::*;
        ctx.ensure(it.i == idx + 1, TraceMismatch, || format!("iteration index {}", it.i))?;
        ctx.ensure(it.active_before == prev_active && it.q_prev == prev_q, TraceMismatch, || {
            "iteration input differs from previous output".into()
        })?;
        let prev_center_set: HashSet<Vertex> = prev_centers.iter().copied().collect();
        ctx.ensure(it.centers.iter().all(|z| prev_center_set.contains(z)), TraceMismatch, || {
            "Z_i is not a subset of Z_{i-1}".into()
        })?;
        ctx.ensure(it.i < trace.k || it.centers.is_empty(), TraceMismatch, || "Z_k is not empty".into())?;

        // Q_i
        let is_center: HashSet<Vertex> = it.centers.iter().copied().collect();
        ctx.ensure(it.q_next.keys().copied().eq(it.active_after.iter().copied()), TraceMismatch, || {
            "Q_i keys differ from V_i".into()
        })?;
        for (&v, q) in &it.q_next {
            ctx.ensure(q.len() == trace.quota, Quota, || format!("|Q_i({v})| = {} != {}", q.len(), trace.quota))?;
            for p in q {
                ctx.check_path(p, v)?;
                ctx.ensure(ctx.heads(p).iter().any(|x| is_center.contains(x)), HeadCenter, || {
                    format!("path {:?} of {v}", p.edges())
                })?;
                report.paths_checked += 1;
            }
            check_pairwise(&ctx, q, v, it.i >= 2)?;
        }

        replay_scan(&ctx, trace, it, &is_center, &mut report)?;

        // bookkeeping
        let inserted: BTreeSet<EdgeId> = it
            .events
            .iter()
            .filter_map(|e| match e {
                ScanEvent::Insert { edge, .. } => Some(*edge),
                _ => None,
            })
            .collect();
        let spanner: BTreeSet<EdgeId> = it.spanner.iter().copied().collect();
        let expected: BTreeSet<EdgeId> = prev_spanner.union(&inserted).copied().collect();
        ctx.ensure(spanner == expected, Bookkeeping, || "H_i is not H_{i-1} plus inserted last edges".into())?;
        let kept: BTreeSet<EdgeId> = it.kept.iter().copied().collect();
        ctx.ensure(kept == spanner, Bookkeeping, || "kp set differs from H_i".into())?;
        let remaining: BTreeSet<EdgeId> = it.remaining.iter().copied().collect();
        ctx.ensure(remaining.is_disjoint(&spanner), Bookkeeping, || "R_i meets H_i".into())?;
        ctx.ensure(remaining.is_subset(&prev_remaining), Bookkeeping, || "R_i grew".into())?;
        let discarded: BTreeSet<(EdgeId, Vertex, Vertex)> = it.discarded.iter().copied().collect();
        let pp_pairs = |e: EdgeId| -> Vec<(Vertex, Vertex)> {
            h.edge(e).expect("known").pairs().filter(|&(a, b)| !discarded.contains(&(e, a, b))).collect()
        };
        for &e in prev_remaining.difference(&remaining) {
            ctx.ensure(spanner.contains(&e) || pp_pairs(e).is_empty(), Bookkeeping, || {
                format!("hyperedge {e} left R without being kept or fully discarded")
            })?;
        }
        for &e in &remaining {
            let pairs = pp_pairs(e);
            ctx.ensure(!pairs.is_empty(), Bookkeeping, || format!("fully discarded hyperedge {e} in R_i"))?;
            let w = ctx.weight(e);
            for (a, b) in pairs {
                for x in [a, b] {
                    let Some(q) = it.q_next.get(&x) else {
                        return ctx.fail(PostponedWeight, format!("pp pair ({a},{b}) of {e} has inactive endpoint {x}"));
                    };
                    let heavier = q.iter().flat_map(|p| p.edges()).any(|&y| ctx.weight(y) > w);
                    ctx.ensure(!heavier, PostponedWeight, || format!("Q_i({x}) has an edge heavier than {e}"))?;
                }
            }
        }

        // monotone statuses
        ctx.ensure(prev_kept.is_subset(&kept), StatusMonotonicity, || "a kept hyperedge reverted".into())?;
        for &(e, a, b) in &prev_discarded {
            ctx.ensure(discarded.contains(&(e, a, b)) || kept.contains(&e), StatusMonotonicity, || {
                format!("sd pair ({a},{b}) of {e} reverted")
            })?;
        }

        // stats row
        let row = &stats.iterations[idx];
        let max_pv = it.p_final.values().map(Vec::len).max().unwrap_or(0);
        let consistent = row.i == it.i
            && row.centers == it.centers.len()
            && row.active == it.active_after.len()
            && row.remaining == it.remaining.len()
            && row.added_edges == spanner.len() - prev_spanner.len()
            && row.max_pv == max_pv;
        ctx.ensure(consistent, TraceMismatch, || format!("stats row {row:?} disagrees with the trace"))?;

        prev_centers = it.centers.clone();
        prev_active = it.active_after.clone();
        prev_q = it.q_next.clone();
        prev_remaining = remaining;
        prev_spanner = spanner;
        prev_kept = kept;
        prev_discarded = discarded;
        report.iterations += 1;
    }
    outer.ensure(stats.spanner_edges == prev_spanner.len(), InvariantKind::TraceMismatch, || {
        "final spanner size differs from H_k".into()
    })?;
    Ok(report)
}

fn check_pairwise(ctx: &Ctx, list: &[HyperPath], v: Vertex, heads: bool) -> Result<(), InvariantViolation> {
    for (a, p) in list.iter().enumerate() {
        for q in &list[a + 1..] {
            ctx.ensure(!p.shares_edge_with(q), InvariantKind::Disjointness, || {
                format!("paths {:?} and {:?} of {v} share a hyperedge", p.edges(), q.edges())
            })?;
            if heads {
                let hp = ctx.heads(p);
                ctx.ensure(ctx.heads(q).iter().all(|x| !hp.contains(x)), InvariantKind::Disjointness, || {
                    format!("paths {:?} and {:?} of {v} have intersecting heads", p.edges(), q.edges())
                })?;
            }
        }
    }
    Ok(())
}

/// Smallest quota for which half of `Q_{i-1}(u)` overlapping `P_{i-1}(v)`
/// forces `2f + 1` disjoint pairs: each path of `P_{i-1}(v)` meets at most
/// `k + r` members of `Q_{i-1}(u)`.
fn pair_bound_quota(trace: &BuildTrace) -> usize {
    12 * (trace.k + trace.host.rank()) * trace.f
}

fn replay_scan(
    ctx: &Ctx,
    trace: &BuildTrace,
    it: &IterationTrace,
    is_center: &HashSet<Vertex>,
    report: &mut ReplayReport,
) -> Result<(), InvariantViolation> {
    use InvariantKind::*;
    let mut by_vertex: BTreeMap<Vertex, Vec<&ScanEvent>> = BTreeMap::new();
    for e in &it.events {
        let v = match e {
            ScanEvent::Insert { v, .. } | ScanEvent::Discard { v, .. } | ScanEvent::EarlyStop { v } => *v,
        };
        by_vertex.entry(v).or_default().push(e);
    }
    let active: HashSet<Vertex> = it.active_before.iter().copied().collect();
    ctx.ensure(by_vertex.keys().all(|v| active.contains(v)), TraceMismatch, || "event for an inactive vertex".into())?;

    for &v in &it.active_before {
        let mut pv = Pv::new(ctx, &it.q_prev[&v]);
        let mut sampled_new = Vec::new();
        let mut stopped = false;
        for ev in by_vertex.get(&v).map_or(&[][..], Vec::as_slice) {
            ctx.ensure(!stopped, EarlyStop, || format!("vertex {v} scanned after reaching the quota"))?;
            ctx.ensure(sampled_new.len() < trace.quota || matches!(ev, ScanEvent::EarlyStop { .. }), EarlyStop, || {
                format!("vertex {v} kept scanning with {} sampled paths", sampled_new.len())
            })?;
            match **ev {
                ScanEvent::Insert { u, edge, via, sampled, .. } => {
                    let e = ctx.h.edge(edge).expect("known edge");
                    ctx.ensure(e.contains(u) && e.contains(v) && u != v, TraceMismatch, || {
                        format!("insert of {edge} for ({u},{v})")
                    })?;
                    let sample = it.samples.get(&u).map_or(&[][..], Vec::as_slice);
                    let qu = it.q_prev.get(&u).map_or(&[][..], Vec::as_slice);
                    ctx.ensure(sample.contains(&via) && via < qu.len(), TraceMismatch, || {
                        format!("insert for ({u},{v}) via unsampled path {via}")
                    })?;
                    let base = &qu[via];
                    ctx.ensure(pv.eligible(ctx, base) && !pv.edges.contains(&edge), Disjointness, || {
                        format!("path {:?} inserted at {v} overlaps P_(i-1)({v})", base.edges())
                    })?;
                    let earlier_ok = sample.iter().take_while(|&&j| j != via).any(|&j| pv.eligible(ctx, &qu[j]));
                    ctx.ensure(!earlier_ok, TraceMismatch, || format!("insert at {v} skipped an eligible sample"))?;
                    let new = base.extended(edge, v);
                    ctx.check_path(&new, v)?;
                    let recorded = it.p_final.get(&v).and_then(|p| p.get(pv.paths.len()));
                    ctx.ensure(recorded == Some(&new), TraceMismatch, || format!("P_(i-1)({v}) differs from events"))?;
                    let is_sampled = ctx.heads(base).iter().any(|x| is_center.contains(x));
                    ctx.ensure(is_sampled == sampled, TraceMismatch, || format!("sampled flag at {v}"))?;
                    if sampled {
                        sampled_new.push(new.clone());
                    }
                    pv.push(ctx, new);
                    report.insertions += 1;
                    report.paths_checked += 1;
                }
                ScanEvent::Discard { u, edge, prefix, .. } => {
                    ctx.ensure(prefix == pv.paths.len(), TraceMismatch, || format!("discard snapshot at {v}"))?;
                    let Some(qu) = it.q_prev.get(&u) else {
                        return ctx.fail(PostponedWeight, format!("pp triple ({u},{v},{edge}) with inactive {u}"));
                    };
                    let sample = &it.samples[&u];
                    ctx.ensure(sample.iter().all(|&j| !pv.eligible(ctx, &qu[j])), DiscardSoundness, || {
                        format!("({u},{v},{edge}) discarded with an eligible sampled path")
                    })?;
                    report.discard_events += 1;
                    let overlapping = qu
                        .iter()
                        .filter(|q| q.edges().iter().any(|e| pv.edges.contains(e)) || ctx.heads(q).iter().any(|x| pv.heads.contains(x)))
                        .count();
                    if 2 * overlapping < qu.len() {
                        log::warn!("iteration {}: ({u},{v},{edge}) discarded with {overlapping}/{} overlapping", ctx.i, qu.len());
                        report.half_overlap_anomalies += 1;
                    } else if qu.len() < trace.quota || trace.quota < pair_bound_quota(trace) {
                        report.pair_bound_not_applicable += 1;
                    } else {
                        match count_disjoint_pairs(ctx.h, qu, &pv.paths, trace.f) {
                            Ok(c) if c > 2 * trace.f => report.pair_bound_certified += 1,
                            Ok(c) => {
                                return ctx.fail(PairBound, format!("({u},{v},{edge}): only {c} pairs"));
                            }
                            Err(_) => report.pair_bound_not_applicable += 1,
                        }
                    }
                }
                ScanEvent::EarlyStop { .. } => {
                    ctx.ensure(sampled_new.len() == trace.quota, EarlyStop, || {
                        format!("vertex {v} stopped with {} sampled paths", sampled_new.len())
                    })?;
                    stopped = true;
                }
            }
        }
        let recorded = it.p_final.get(&v).map_or(&[][..], Vec::as_slice);
        ctx.ensure(recorded == pv.paths.as_slice(), TraceMismatch, || format!("P_(i-1)({v}) has extra paths"))?;
        check_pairwise(ctx, &pv.paths, v, false)?;
        let expect_active = sampled_new.len() == trace.quota;
        match it.q_next.get(&v) {
            Some(q) => ctx.ensure(expect_active && *q == sampled_new, TraceMismatch, || format!("Q_i({v}) differs"))?,
            None => ctx.ensure(!expect_active, TraceMismatch, || format!("{v} missing from V_i"))?,
        }
    }
    Ok(())
}
