//! Exact ground truth for small hypergraphs.
//!
//! Both searches walk vertex sequences depth-first and keep a maximum
//! bipartite matching between the consecutive pairs placed so far and the
//! edges containing them. A prefix whose pairs admit no system of
//! distinct edges has no valid extension, so it is pruned.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{verify_cycle, verify_path, BergeCycle, BergePath};
use crate::error::{argument, capacity, Result};
use crate::hypergraph::Hypergraph;

/// Size limits for the exhaustive searches. Larger inputs are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleGuard {
    pub max_n: usize,
    pub max_edges: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        Self {
            max_n: 10,
            max_edges: 400,
        }
    }
}

impl OracleGuard {
    pub fn admits(&self, h: &Hypergraph) -> bool {
        h.n() <= self.max_n && h.edge_count() <= self.max_edges
    }

    pub fn check(&self, h: &Hypergraph) -> Result<()> {
        if !self.admits(h) {
            return Err(capacity!(
                "oracle limited to n <= {} and at most {} edges, got n = {} with {} edges",
                self.max_n,
                self.max_edges,
                h.n(),
                h.edge_count()
            ));
        }
        Ok(())
    }
}

const FREE: usize = usize::MAX;

/// Incremental matching between consecutive vertex pairs and edges.
struct PairMatching<'h> {
    h: &'h Hypergraph,
    /// `pair_edges[u * n + v]`: edges containing both `u` and `v`.
    pair_edges: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
    pair_to_edge: Vec<usize>,
    edge_to_pair: Vec<usize>,
    seen: Vec<u32>,
    stamp: u32,
}

impl<'h> PairMatching<'h> {
    fn new(h: &'h Hypergraph) -> Self {
        let n = h.n();
        let mut pair_edges = vec![Vec::new(); n * n];
        for (id, e) in h.edges().enumerate() {
            for &a in e {
                for &b in e {
                    if a != b {
                        pair_edges[a * n + b].push(id);
                    }
                }
            }
        }
        Self {
            h,
            pair_edges,
            pairs: Vec::new(),
            pair_to_edge: Vec::new(),
            edge_to_pair: vec![FREE; h.edge_count()],
            seen: vec![0; h.edge_count()],
            stamp: 0,
        }
    }

    fn candidates(&self, pair: usize) -> &[usize] {
        let (a, b) = self.pairs[pair];
        &self.pair_edges[a * self.h.n() + b]
    }

    fn augment(&mut self, pair: usize) -> bool {
        let count = self.candidates(pair).len();
        for k in 0..count {
            let e = self.candidates(pair)[k];
            if self.seen[e] == self.stamp {
                continue;
            }
            self.seen[e] = self.stamp;
            let holder = self.edge_to_pair[e];
            if holder == FREE || self.augment(holder) {
                self.edge_to_pair[e] = pair;
                self.pair_to_edge[pair] = e;
                return true;
            }
        }
        false
    }

    /// Adds the pair `(a, b)`; keeps it only if all pairs stay matched.
    fn push(&mut self, a: usize, b: usize) -> bool {
        let idx = self.pairs.len();
        self.pairs.push((a, b));
        self.pair_to_edge.push(FREE);
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        if self.augment(idx) {
            true
        } else {
            self.pairs.pop();
            self.pair_to_edge.pop();
            false
        }
    }

    fn pop(&mut self) {
        let e = self.pair_to_edge.pop().expect("pop on empty matching");
        self.pairs.pop();
        self.edge_to_pair[e] = FREE;
    }
}

/// Exact Berge Hamiltonicity. Orders fix `v_1 = 0` and require the second
/// vertex to be smaller than the last, so each cyclic order is tried once.
pub fn exact_hamiltonian(h: &Hypergraph, guard: &OracleGuard) -> Result<Option<BergeCycle>> {
    guard.check(h)?;
    let n = h.n();
    if n < 3 || h.min_degree() < 2 || !h.is_connected() {
        return Ok(None);
    }
    let mut search = HamSearch {
        matching: PairMatching::new(h),
        order: vec![0],
        used: vec![false; n],
    };
    search.used[0] = true;
    if search.dfs() {
        let m = &search.matching;
        let cycle = BergeCycle {
            vertices: search.order.clone(),
            edge_ids: m.pair_to_edge.clone(),
        };
        debug_assert!(verify_cycle(h, &cycle, false));
        return Ok(Some(cycle));
    }
    Ok(None)
}

struct HamSearch<'h> {
    matching: PairMatching<'h>,
    order: Vec<usize>,
    used: Vec<bool>,
}

impl HamSearch<'_> {
    fn dfs(&mut self) -> bool {
        let n = self.used.len();
        let last = self.order[self.order.len() - 1];
        if self.order.len() == n {
            if self.order[1] > last {
                return false;
            }
            if self.matching.push(last, self.order[0]) {
                return true;
            }
            return false;
        }
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            if !self.matching.push(last, v) {
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            if self.dfs() {
                return true;
            }
            self.order.pop();
            self.used[v] = false;
            self.matching.pop();
        }
        false
    }
}

/// A longest Berge path; among those the lexicographically smallest
/// vertex sequence.
pub fn exact_longest_path(h: &Hypergraph, guard: &OracleGuard) -> Result<BergePath> {
    guard.check(h)?;
    let n = h.n();
    if n == 0 {
        return Err(argument!("hypergraph has no vertices"));
    }
    let mut search = PathSearch {
        matching: PairMatching::new(h),
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: Vec::new(),
        best_edges: Vec::new(),
    };
    for start in 0..n {
        search.order.push(start);
        search.used[start] = true;
        search.dfs();
        search.used[start] = false;
        search.order.pop();
        if search.best.len() == n {
            break;
        }
    }
    let path = BergePath {
        vertices: search.best,
        edge_ids: search.best_edges,
    };
    debug_assert!(verify_path(h, &path, false));
    Ok(path)
}

struct PathSearch<'h> {
    matching: PairMatching<'h>,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Vec<usize>,
    best_edges: Vec<usize>,
}

impl PathSearch<'_> {
    /// Returns `true` once a spanning path is recorded.
    fn dfs(&mut self) -> bool {
        let n = self.used.len();
        if self.order.len() > self.best.len() {
            self.best.clone_from(&self.order);
            self.best_edges.clone_from(&self.matching.pair_to_edge);
            if self.best.len() == n {
                return true;
            }
        }
        let last = self.order[self.order.len() - 1];
        for v in 0..n {
            if self.used[v] || !self.matching.push(last, v) {
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            let done = self.dfs();
            self.order.pop();
            self.used[v] = false;
            self.matching.pop();
            if done {
                return true;
            }
        }
        false
    }
}

/// Whether adding the two non-edges `e1`, `e2` to the non-Hamiltonian
/// `gamma` makes it Hamiltonian or lengthens its longest Berge path.
pub fn exact_is_booster(gamma: &Hypergraph, e1: &[usize], e2: &[usize], guard: &OracleGuard) -> Result<bool> {
    guard.check(gamma)?;
    for e in [e1, e2] {
        if gamma.find_edge(e).is_some() {
            return Err(argument!("{e:?} is already an edge"));
        }
    }
    let augmented = gamma.with_extra_edges(&[e1, e2])?;
    guard.check(&augmented)?;
    if exact_hamiltonian(gamma, guard)?.is_some() {
        return Err(argument!("booster pairs are defined only for non-Hamiltonian hypergraphs"));
    }
    if exact_hamiltonian(&augmented, guard)?.is_some() {
        return Ok(true);
    }
    Ok(exact_longest_path(&augmented, guard)?.len() > exact_longest_path(gamma, guard)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, two_cliques};

    fn guard() -> OracleGuard {
        OracleGuard::default()
    }

    #[test]
    fn hamiltonian_examples() {
        let k4 = complete(4, 3).unwrap();
        let c = exact_hamiltonian(&k4, &guard()).unwrap().unwrap();
        assert!(c.is_hamiltonian_in(&k4));
        assert!(exact_hamiltonian(&two_cliques(8, 3).unwrap(), &guard()).unwrap().is_none());
        let ring = Hypergraph::new(5, 3, (0..5).map(|i| [i, (i + 1) % 5, (i + 2) % 5])).unwrap();
        assert!(exact_hamiltonian(&ring, &guard()).unwrap().is_some());
    }

    #[test]
    fn longest_path_examples() {
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let p = exact_longest_path(&single, &guard()).unwrap();
        assert_eq!(p.vertices, [0, 1]);
        assert_eq!(exact_longest_path(&complete(5, 3).unwrap(), &guard()).unwrap().len(), 5);
        assert_eq!(exact_longest_path(&Hypergraph::empty(4, 3), &guard()).unwrap().vertices, [0]);
    }

    #[test]
    fn guard_rejects_large_hosts() {
        let k11 = complete(11, 3).unwrap();
        assert!(matches!(exact_hamiltonian(&k11, &guard()), Err(crate::Error::Capacity(_))));
        assert!(exact_longest_path(&k11, &guard()).is_err());
    }

    #[test]
    fn booster_examples() {
        // Spanning path 0-1-2-3-4; vertex 0 has degree 1 so no Hamilton cycle.
        let path_host = Hypergraph::new(5, 3, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [1, 3, 4]]).unwrap();
        assert!(exact_hamiltonian(&path_host, &guard()).unwrap().is_none());
        assert_eq!(exact_longest_path(&path_host, &guard()).unwrap().len(), 5);
        // {0,2,4} closes 4 back to 0.
        assert!(exact_is_booster(&path_host, &[0, 2, 4], &[0, 1, 3], &guard()).unwrap());

        let ring = Hypergraph::new(5, 3, (0..5).map(|i| [i, (i + 1) % 5, (i + 2) % 5])).unwrap();
        assert!(exact_is_booster(&ring, &[0, 1, 3], &[0, 2, 4], &guard()).is_err());
        assert!(exact_is_booster(&path_host, &[0, 1, 2], &[0, 2, 4], &guard()).is_err());

        // K5 minus {0,1,2} next to a small component on 5..8.
        let mut edges: Vec<Vec<usize>> = complete(5, 3).unwrap().edges().skip(1).map(<[usize]>::to_vec).collect();
        edges.push(vec![5, 6, 7]);
        edges.push(vec![6, 7, 8]);
        let split = Hypergraph::new(9, 3, edges).unwrap();
        assert_eq!(exact_longest_path(&split, &guard()).unwrap().len(), 5);
        assert!(!exact_is_booster(&split, &[0, 1, 2], &[5, 6, 8], &guard()).unwrap());
    }
}
