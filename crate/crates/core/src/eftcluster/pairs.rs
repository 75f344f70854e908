use crate::hypercore::{HyperPath, Hypergraph};

use super::ClusterError;

/// Two paths overlap if they share a hyperedge or their heads share a vertex.
pub fn paths_overlap(h: &Hypergraph, a: &HyperPath, b: &HyperPath) -> bool {
    if a.shares_edge_with(b) {
        return true;
    }
    let hb = b.head_vertices(h);
    a.head_vertices(h).as_slice().iter().any(|&x| hb.contains(x))
}

fn check_list(h: &Hypergraph, list: &[HyperPath], name: &str) -> Result<(), ClusterError> {
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if paths_overlap(h, a, b) {
                return Err(ClusterError::Precondition(format!(
                    "{name}: paths {:?} and {:?} share a hyperedge or head vertex",
                    a.edges(),
                    b.edges()
                )));
            }
        }
    }
    Ok(())
}

/// Greedy pair extraction: repeatedly take the first remaining `Q` that
/// overlaps something in `pv`, pair it with the first `P` it overlaps, drop
/// `P`, and drop every `Q` overlapping `P`. Stops after `2f + 1` pairs.
///
/// Both lists must be pairwise edge-disjoint with pairwise vertex-disjoint
/// heads.
pub fn count_disjoint_pairs(
    h: &Hypergraph,
    qu: &[HyperPath],
    pv: &[HyperPath],
    f: usize,
) -> Result<usize, ClusterError> {
    check_list(h, qu, "Q")?;
    check_list(h, pv, "P")?;
    let target = 2 * f + 1;
    let mut a: Vec<&HyperPath> = qu.iter().filter(|q| pv.iter().any(|p| paths_overlap(h, q, p))).collect();
    let mut b: Vec<&HyperPath> = pv.iter().collect();
    let mut count = 0;
    while count < target && !a.is_empty() {
        let q = a[0];
        let j = b
            .iter()
            .position(|p| paths_overlap(h, q, p))
            .expect("every remaining Q overlaps a remaining P");
        let p = b.remove(j);
        a.retain(|x| !paths_overlap(h, x, p));
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host() -> Hypergraph {
        Hypergraph::new(
            8,
            [
                (1.0, vec![0, 1]),
                (1.0, vec![2, 3]),
                (1.0, vec![4, 5]),
                (2.0, vec![1, 6]),
                (2.0, vec![3, 6]),
                (2.0, vec![5, 7]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn disjoint_lists_give_zero() {
        let h = host();
        let q = vec![HyperPath::new(vec![0], 0, 1)];
        let p = vec![HyperPath::new(vec![1], 2, 3)];
        assert_eq!(count_disjoint_pairs(&h, &q, &p, 1).unwrap(), 0);
    }

    #[test]
    fn shared_path_gives_one() {
        let h = host();
        let q = vec![HyperPath::new(vec![0, 3], 0, 6)];
        assert_eq!(count_disjoint_pairs(&h, &q, &q, 1).unwrap(), 1);
    }

    #[test]
    fn three_matched_pairs_capped() {
        let h = host();
        let q: Vec<_> = [(0, 0, 1), (1, 2, 3), (2, 4, 5)].iter().map(|&(e, s, t)| HyperPath::new(vec![e], s, t)).collect();
        let p = vec![
            HyperPath::new(vec![0, 3], 0, 6),
            HyperPath::new(vec![1, 4], 2, 6),
            HyperPath::new(vec![2, 5], 4, 7),
        ];
        assert_eq!(count_disjoint_pairs(&h, &q, &p, 1).unwrap(), 3);
        assert_eq!(count_disjoint_pairs(&h, &q, &p, 0).unwrap(), 1);
    }

    #[test]
    fn precondition_violation() {
        let h = host();
        let q = vec![HyperPath::new(vec![0], 0, 1), HyperPath::new(vec![0, 3], 0, 6)];
        assert!(matches!(count_disjoint_pairs(&h, &q, &[], 1), Err(ClusterError::Precondition(_))));
    }
}
