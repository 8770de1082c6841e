//! Preference graphs: validated connected DAGs, reachability, the
//! arc-to-matrix construction and the reachability ("closure") matrix.

use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PcmError, Result};
use crate::matrix::{CompleteMatrix, IncompleteMatrix};

/// A weakly connected directed acyclic graph over `0..n`. An arc `(i, j)`
/// states that item `i` is preferred to item `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceDag {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
    successors: Vec<Vec<usize>>,
    topo_order: Vec<usize>,
}

impl PreferenceDag {
    /// Validates `arcs` (zero-based). Duplicate arcs are merged.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < 2 {
            return Err(PcmError::MatrixTooSmall { n, min: 2 });
        }
        let mut set = BTreeSet::new();
        for (from, to) in arcs {
            if from >= n || to >= n {
                return Err(PcmError::ArcOutOfRange { from, to, n });
            }
            if from == to {
                return Err(PcmError::SelfLoop { vertex: from });
            }
            set.insert((from, to));
        }
        if let Some(&(from, to)) = set.iter().find(|&&(a, b)| set.contains(&(b, a))) {
            return Err(PcmError::BidirectionalArc { from, to });
        }
        let mut successors = vec![Vec::new(); n];
        for &(a, b) in &set {
            successors[a].push(b);
        }
        let topo_order = topological_order(n, &successors)?;
        let components = weak_components(n, &set);
        if components.len() > 1 {
            return Err(PcmError::Disconnected { components });
        }
        Ok(Self {
            n,
            arcs: set,
            successors,
            topo_order,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arcs.contains(&(i, j))
    }

    /// Topological order; among available vertices the smallest index comes first.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo_order
    }

    /// Whether a directed walk leads from `i` to `j`. False when `i == j`.
    pub fn reachable(&self, i: usize, j: usize) -> bool {
        i != j && self.descendants(i)[j]
    }

    /// Marks every vertex reachable from `from` by a non-empty walk.
    fn descendants(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue: VecDeque<usize> = self.successors[from].iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            queue.extend(self.successors[v].iter().copied().filter(|&u| !seen[u]));
        }
        seen
    }

    /// Full reachability relation, row `i` listing the descendants of `i`.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|i| self.descendants(i)).collect()
    }

    /// Incomplete matrix with `a_ij = alpha`, `a_ji = 1/alpha` for each arc
    /// and every other off-diagonal pair missing.
    pub fn to_incomplete_matrix(&self, alpha: f64) -> Result<IncompleteMatrix> {
        check_alpha(alpha)?;
        let mut raw = vec![vec![None; self.n]; self.n];
        for (i, row) in raw.iter_mut().enumerate() {
            row[i] = Some(1.0);
        }
        for &(i, j) in &self.arcs {
            raw[i][j] = Some(alpha);
            raw[j][i] = Some(1.0 / alpha);
        }
        IncompleteMatrix::from_raw(&raw)
    }

    /// `c_ij = alpha` if `j` is reachable from `i`, `1/alpha` if `i` is
    /// reachable from `j`, and 1 for incomparable pairs. Every triad of the
    /// result has inconsistency at most `alpha`.
    pub fn transitive_closure_matrix(&self, alpha: f64) -> Result<CompleteMatrix> {
        check_alpha(alpha)?;
        let reach = self.reachability();
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if reach[i][j] {
                            alpha
                        } else if reach[j][i] {
                            1.0 / alpha
                        } else {
                            1.0
                        }
                    })
                    .collect()
            })
            .collect();
        CompleteMatrix::from_rows(&rows)
    }

    /// Random connected DAG, deterministic in `seed`.
    ///
    /// A random permutation fixes the order; each forward pair becomes an
    /// arc with probability `arc_density`. Components are then chained in
    /// that order by an arc from the first vertex of each component to the
    /// first vertex of the next.
    pub fn random(n: usize, arc_density: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(PcmError::MatrixTooSmall { n, min: 2 });
        }
        if !(arc_density > 0.0 && arc_density <= 1.0) {
            return Err(PcmError::InvalidDensity {
                density: arc_density,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut arcs = BTreeSet::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.random::<f64>() < arc_density {
                    arcs.insert((order[a], order[b]));
                }
            }
        }
        let mut position = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let mut roots: Vec<usize> = weak_components(n, &arcs)
            .iter()
            .map(|c| *c.iter().min_by_key(|&&v| position[v]).expect("non-empty"))
            .collect();
        roots.sort_by_key(|&v| position[v]);
        for w in roots.windows(2) {
            arcs.insert((w[0], w[1]));
        }
        Self::new(n, arcs)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(())
    } else {
        Err(PcmError::AlphaNotGreaterThanOne { alpha })
    }
}

/// Kahn's algorithm with a min-heap; on failure returns one directed cycle.
fn topological_order(n: usize, successors: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    for s in successors {
        for &v in s {
            indegree[v] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &u in &successors[v] {
            indegree[u] -= 1;
            if indegree[u] == 0 {
                heap.push(Reverse(u));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover vertex has a leftover predecessor, so walking
    // backwards within the leftovers must revisit a vertex.
    let leftover: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
    let mut predecessor = vec![usize::MAX; n];
    for (v, s) in successors.iter().enumerate() {
        if leftover[v] {
            for &u in s {
                if leftover[u] {
                    predecessor[u] = v;
                }
            }
        }
    }
    let start = (0..n).find(|&v| leftover[v]).expect("a leftover vertex");
    let mut visited_at = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut v = start;
    while visited_at[v] == usize::MAX {
        visited_at[v] = path.len();
        path.push(v);
        v = predecessor[v];
    }
    let mut cycle: Vec<usize> = path[visited_at[v]..].to_vec();
    cycle.reverse();
    Err(PcmError::CycleDetected { cycle })
}

fn weak_components(n: usize, arcs: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(a, b) in arcs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(v);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The seven-vertex example graph, zero-based.
    fn reference_dag() -> PreferenceDag {
        let arcs = [
            (1, 2), (1, 6), (1, 7), (2, 3), (2, 4), (3, 4),
            (3, 5), (4, 5), (4, 6), (5, 6), (5, 7),
        ];
        PreferenceDag::new(7, arcs.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    #[test]
    fn single_arc() {
        let g = PreferenceDag::new(2, [(0, 1)]).unwrap();
        assert_eq!(g.topo_order(), &[0, 1]);
    }

    #[test]
    fn topo_order_prefers_small_indices() {
        let g = PreferenceDag::new(4, [(2, 0), (3, 0), (1, 0)]).unwrap();
        assert_eq!(g.topo_order(), &[1, 2, 3, 0]);
    }

    #[test]
    fn reference_dag_graph_is_valid() {
        let g = reference_dag();
        assert_eq!(g.arcs().len(), 11);
        assert!(g.reachable(0, 4));
        assert!(!g.reachable(5, 6));
        assert!(!g.reachable(6, 5));
        assert!(!g.reachable(3, 3));
    }

    #[test]
    fn cycle_is_detected_with_witness() {
        let err = PreferenceDag::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap_err();
        match err {
            PcmError::CycleDetected { cycle } => {
                assert_eq!(cycle.len(), 3);
                for w in 0..cycle.len() {
                    let (a, b) = (cycle[w], cycle[(w + 1) % cycle.len()]);
                    assert!([(0, 1), (1, 2), (2, 0)].contains(&(a, b)), "{cycle:?}");
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            PreferenceDag::new(4, [(0, 1), (2, 3)]),
            Err(PcmError::Disconnected { .. })
        ));
        assert!(matches!(
            PreferenceDag::new(2, [(0, 1), (1, 0)]),
            Err(PcmError::BidirectionalArc { .. })
        ));
        assert!(matches!(
            PreferenceDag::new(2, [(0, 2)]),
            Err(PcmError::ArcOutOfRange { .. })
        ));
        assert!(matches!(
            PreferenceDag::new(2, [(1, 1)]),
            Err(PcmError::SelfLoop { vertex: 1 })
        ));
    }

    #[test]
    fn arcs_to_matrix() {
        let g = PreferenceDag::new(2, [(0, 1)]).unwrap();
        let a = g.to_incomplete_matrix(3.0).unwrap();
        assert_eq!(a.get(0, 1), Some(3.0));
        assert_eq!(a.get(1, 0), Some(1.0 / 3.0));

        let path = PreferenceDag::new(3, [(0, 1), (1, 2)]).unwrap();
        let a = path.to_incomplete_matrix(2.0).unwrap();
        assert_eq!(a.get(0, 2), None);
        assert_eq!(a.get(0, 1), Some(2.0));
        assert_eq!(a.get(1, 2), Some(2.0));
        assert!(matches!(
            path.to_incomplete_matrix(1.0),
            Err(PcmError::AlphaNotGreaterThanOne { .. })
        ));
    }

    #[test]
    fn reference_dag_matrix_pattern() {
        let g = reference_dag();
        let a = g.to_incomplete_matrix(2.0).unwrap();
        let expected_upper = [
            "a***aa", "aa***", "aa**", "aa*", "aa", "*",
        ];
        for (i, row) in expected_upper.iter().enumerate() {
            for (off, ch) in row.chars().enumerate() {
                let j = i + 1 + off;
                match ch {
                    'a' => assert_eq!(a.get(i, j), Some(2.0), "({i},{j})"),
                    _ => assert_eq!(a.get(i, j), None, "({i},{j})"),
                }
            }
        }
        assert!(a.is_connected());
    }

    #[test]
    fn reference_dag_closure_matrix() {
        let c = reference_dag().transitive_closure_matrix(3.0).unwrap();
        for i in 0..7 {
            for j in (i + 1)..7 {
                let want = if (i, j) == (5, 6) { 1.0 } else { 3.0 };
                assert_eq!(c.get(i, j), want, "({i},{j})");
            }
        }
    }

    #[test]
    fn random_dags() {
        let g = PreferenceDag::random(2, 0.1, 5).unwrap();
        assert_eq!(g.arcs().len(), 1);
        let g = PreferenceDag::random(7, 0.5, 42).unwrap();
        assert!(PreferenceDag::new(7, g.arcs().iter().copied()).is_ok());
        assert_eq!(g, PreferenceDag::random(7, 0.5, 42).unwrap());
        assert!(PreferenceDag::random(5, 0.0, 1).is_err());
        // very sparse graphs are repaired, not rejected
        for seed in 0..50 {
            let g = PreferenceDag::random(9, 0.05, seed).unwrap();
            assert!(g.arcs().len() >= 8);
        }
    }
}
