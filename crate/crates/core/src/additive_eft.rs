//! Additive EFT hyperspanners: the union of a fault-free `+2` hyperspanner
//! and a multiplicative EFT hyperspanner from [`crate::eftcluster`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::baseline::{lifted_additive2, BaselineError};
use crate::eftcluster::{self, BuildStats, ClusterError, Params};
use crate::hypercore::{EdgeId, Hypergraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdditiveError {
    #[error("additive construction needs uniform edge weights")]
    NonUniformWeights,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

impl From<BaselineError> for AdditiveError {
    fn from(_: BaselineError) -> Self {
        AdditiveError::NonUniformWeights
    }
}

/// The fault-free additive part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AdditiveAlgo {
    /// [`crate::baseline::additive2_spanner`], `α = 2`.
    #[default]
    Plus2,
}

impl AdditiveAlgo {
    pub fn alpha(self) -> f64 {
        match self {
            AdditiveAlgo::Plus2 => 2.0,
        }
    }
}

/// `f·r·(2α + (μ-1)·W) + α`.
pub fn surplus_bound(f: usize, r: usize, alpha: f64, mu: f64, w: f64) -> f64 {
    (f * r) as f64 * (2.0 * alpha + (mu - 1.0) * w) + alpha
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurplusBound {
    pub f: usize,
    pub r: usize,
    pub alpha: f64,
    /// `2k - 1` of the multiplicative part.
    pub mu: f64,
    /// Largest hyperedge weight of the input.
    pub w: f64,
}

impl SurplusBound {
    /// The bound with `W` set to the largest input weight.
    pub fn value(&self) -> f64 {
        surplus_bound(self.f, self.r, self.alpha, self.mu, self.w)
    }

    /// The bound for a pair whose post-failure shortest path has largest
    /// weight `w_st`.
    pub fn for_pair(&self, w_st: f64) -> f64 {
        surplus_bound(self.f, self.r, self.alpha, self.mu, w_st)
    }
}

#[derive(Clone, Debug)]
pub struct AdditiveOutput {
    pub spanner: Hypergraph,
    pub bound: SurplusBound,
    pub additive_part: Vec<EdgeId>,
    pub multiplicative_part: Vec<EdgeId>,
    pub stats: BuildStats,
}

/// `S = S_1 ∪ S_2` with `S_1` the lifted additive spanner and `S_2` the
/// clustering spanner for `k_mult`.
pub fn build_additive_eft(
    h: &Hypergraph,
    k_mult: usize,
    f: usize,
    seed: u64,
    algo: AdditiveAlgo,
) -> Result<AdditiveOutput, AdditiveError> {
    if !h.is_uniformly_weighted() {
        return Err(AdditiveError::NonUniformWeights);
    }
    let params = Params::new(k_mult, f, seed)?;
    let s1 = match algo {
        AdditiveAlgo::Plus2 => lifted_additive2(h)?,
    };
    let (s2, stats) = eftcluster::build(h, &params);
    let additive_part: Vec<EdgeId> = s1.edge_ids().collect();
    let multiplicative_part: Vec<EdgeId> = s2.edge_ids().collect();
    let union: BTreeSet<EdgeId> = additive_part.iter().chain(&multiplicative_part).copied().collect();
    let bound = SurplusBound {
        f,
        r: h.rank(),
        alpha: algo.alpha(),
        mu: (2 * k_mult - 1) as f64,
        w: h.max_weight(),
    };
    Ok(AdditiveOutput { spanner: h.restrict(union), bound, additive_part, multiplicative_part, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form() {
        assert_eq!(surplus_bound(2, 3, 2.0, 3.0, 1.0), 38.0);
        assert_eq!(surplus_bound(1, 2, 2.0, 3.0, 1.0), 14.0);
        assert_eq!(surplus_bound(5, 4, 0.0, 1.0, 7.0), 0.0);
        assert_eq!(surplus_bound(1, 3, 2.0, 3.0, 1.0), 20.0);
    }

    #[test]
    fn union_of_parts() {
        let h = Hypergraph::new(
            5,
            [(1.0, vec![0, 1, 2]), (1.0, vec![2, 3]), (1.0, vec![3, 4, 0]), (1.0, vec![1, 4])],
        )
        .unwrap();
        let out = build_additive_eft(&h, 2, 1, 3, AdditiveAlgo::Plus2).unwrap();
        let ids: BTreeSet<EdgeId> = out.spanner.edge_ids().collect();
        let expect: BTreeSet<EdgeId> = out.additive_part.iter().chain(&out.multiplicative_part).copied().collect();
        assert_eq!(ids, expect);
        assert!(out.spanner.m() <= out.additive_part.len() + out.multiplicative_part.len());
        assert_eq!(out.bound.value(), 20.0);
    }

    #[test]
    fn weighted_input_rejected() {
        let h = Hypergraph::new(3, [(1.0, vec![0, 1]), (2.0, vec![1, 2])]).unwrap();
        assert_eq!(
            build_additive_eft(&h, 2, 1, 0, AdditiveAlgo::Plus2).unwrap_err(),
            AdditiveError::NonUniformWeights
        );
    }
}
