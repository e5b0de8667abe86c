//! Immutable r-uniform hypergraphs on the vertex set `0..n`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::combin::{binomial, Combinations};
use crate::error::{argument, capacity, Error, Result};
use crate::rng::SplitMix64;

/// A set of vertices of a fixed universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn new(n: usize) -> Self {
        Self(FixedBitSet::with_capacity(n))
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::new(n);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Size of the universe.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.0.set(v, false);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// A positive rational `num / den`, used for expansion factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub const fn new(num: u64, den: u64) -> Self {
        Self { num, den }
    }

    pub const fn integer(value: u64) -> Self {
        Self { num: value, den: 1 }
    }

    /// Largest `y` with `y < self * x`, or `None` when no such `y >= 0` exists.
    pub fn max_strictly_below(&self, x: usize) -> Option<usize> {
        let bound = u128::from(self.num) * x as u128;
        if bound == 0 {
            return None;
        }
        // y * den < bound  <=>  y <= (bound - 1) / den
        Some(((bound - 1) / u128::from(self.den)) as usize)
    }
}

/// An r-uniform hypergraph with a per-vertex incidence index.
///
/// Vertices are `0..n`. Edges are stored sorted and are identified by
/// their index in the edge list everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<usize>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge. Rejects wrong arity,
    /// out-of-range vertices and duplicate edges.
    pub fn new<I, E>(n: usize, r: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if r < 2 {
            return Err(Error::InvalidHypergraph(alloc::format!(
                "uniformity must be at least 2, got {r}"
            )));
        }
        let mut flat = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (index, edge) in edges.into_iter().enumerate() {
            let edge = edge.as_ref();
            let mut sorted = edge.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if edge.len() != r || sorted.len() != r {
                return Err(Error::InvalidHypergraph(alloc::format!(
                    "edge {index} has {} distinct vertices, expected {r}",
                    sorted.len()
                )));
            }
            if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(alloc::format!(
                    "edge {index} contains vertex {v} outside 0..{n}"
                )));
            }
            if !seen.insert(sorted.clone()) {
                return Err(Error::InvalidHypergraph(alloc::format!(
                    "edge {index} duplicates an earlier edge"
                )));
            }
            flat.extend_from_slice(&sorted);
        }
        Ok(Self::from_sorted_unchecked(n, r, flat))
    }

    /// Builds from already validated, sorted, distinct edges.
    pub(crate) fn from_sorted_unchecked(n: usize, r: usize, flat: Vec<usize>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (id, edge) in flat.chunks_exact(r).enumerate() {
            for &v in edge {
                incidence[v].push(id);
            }
        }
        Self {
            n,
            r,
            edges: flat,
            incidence,
        }
    }

    pub fn empty(n: usize, r: usize) -> Self {
        Self::from_sorted_unchecked(n, r.max(2), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.r
    }

    /// Sorted vertices of edge `id`.
    pub fn edge(&self, id: usize) -> &[usize] {
        &self.edges[id * self.r..(id + 1) * self.r]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.r)
    }

    /// Edge ids containing `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn edge_contains(&self, id: usize, v: usize) -> bool {
        self.edge(id).binary_search(&v).is_ok()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(argument!("vertex {v} outside 0..{}", self.n));
        }
        Ok(())
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.incidence[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edges containing both `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(argument!("codegree needs two distinct vertices, got {u} twice"));
        }
        Ok(self.common_edges(u, v).count())
    }

    /// Edge ids containing both `u` and `v`, ascending.
    pub fn common_edges(&self, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = if self.incidence[u].len() <= self.incidence[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.incidence[a]
            .iter()
            .copied()
            .filter(move |&e| self.edge_contains(e, b))
    }

    /// Codegrees of `v` with every vertex (`0` at `v` itself).
    pub fn codegree_row(&self, v: usize) -> Vec<usize> {
        let mut row = vec![0; self.n];
        for &e in &self.incidence[v] {
            for &u in self.edge(e) {
                if u != v {
                    row[u] += 1;
                }
            }
        }
        row
    }

    /// Id of the edge with exactly this vertex set, if present.
    pub fn find_edge(&self, vertices: &[usize]) -> Option<usize> {
        if vertices.len() != self.r {
            return None;
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        if sorted.iter().any(|&v| v >= self.n) {
            return None;
        }
        self.incidence[sorted[0]]
            .iter()
            .copied()
            .find(|&e| self.edge(e) == sorted.as_slice())
    }

    /// Vertices outside `set` sharing an edge with some vertex of `set`.
    pub fn neighborhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for v in set.iter() {
            for &e in &self.incidence[v] {
                for &u in self.edge(e) {
                    if !set.contains(u) {
                        out.insert(u);
                    }
                }
            }
        }
        out
    }

    /// Component label per vertex and the number of components. Isolated
    /// vertices form their own components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        const UNSEEN: usize = usize::MAX;
        let mut label = vec![UNSEEN; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != UNSEEN {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &e in &self.incidence[v] {
                    for &u in self.edge(e) {
                        if label[u] == UNSEEN {
                            label[u] = count;
                            stack.push(u);
                        }
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n >= 1 && self.components().1 == 1
    }

    /// The spanning subgraph whose edges are `ids`, in that order. Edge
    /// `i` of the result is edge `ids[i]` of `self`.
    pub fn sub_hypergraph(&self, ids: &[usize]) -> Self {
        let mut flat = Vec::with_capacity(ids.len() * self.r);
        for &id in ids {
            flat.extend_from_slice(self.edge(id));
        }
        Self::from_sorted_unchecked(self.n, self.r, flat)
    }

    /// `self` plus new edges appended after the existing ones.
    pub fn with_extra_edges<E: AsRef<[usize]>>(&self, extra: &[E]) -> Result<Self> {
        let all = self
            .edges()
            .map(<[usize]>::to_vec)
            .chain(extra.iter().map(|e| e.as_ref().to_vec()));
        Self::new(self.n, self.r, all)
    }

    /// Same vertex count, uniformity and edge set, ignoring edge order.
    pub fn same_edge_set(&self, other: &Hypergraph) -> bool {
        if self.n != other.n || self.r != other.r || self.edge_count() != other.edge_count() {
            return false;
        }
        let a: BTreeSet<&[usize]> = self.edges().collect();
        other.edges().all(|e| a.contains(e))
    }

    /// Copy with edges in lexicographic order.
    pub fn canonical(&self) -> Self {
        let mut list: Vec<&[usize]> = self.edges().collect();
        list.sort_unstable();
        let flat = list.concat();
        Self::from_sorted_unchecked(self.n, self.r, flat)
    }

    /// Checks whether the hypergraph is a `(k, alpha)`-expander: for all
    /// disjoint `X`, `Y` with `|X| <= k` and `|Y| < alpha |X|` some edge
    /// meets `X` in exactly one vertex and misses `Y`.
    pub fn is_expander(&self, k: usize, alpha: Ratio, mode: ExpanderMode) -> Result<ExpanderVerdict> {
        if k > self.n {
            return Err(argument!("k = {k} exceeds n = {}", self.n));
        }
        if alpha.den == 0 {
            return Err(argument!("alpha has zero denominator"));
        }
        match mode {
            ExpanderMode::Exhaustive { max_n } => {
                let guard = max_n.min(64);
                if self.n > guard {
                    return Err(capacity!(
                        "exhaustive expander check limited to n <= {guard}, got n = {}",
                        self.n
                    ));
                }
                Ok(self.expander_exhaustive(k, alpha))
            }
            ExpanderMode::Sampled { trials, seed } => Ok(self.expander_sampled(k, alpha, trials, seed)),
        }
    }

    fn edge_mask(&self, id: usize) -> u64 {
        self.edge(id).iter().fold(0u64, |m, &v| m | (1 << v))
    }

    fn expander_exhaustive(&self, k: usize, alpha: Ratio) -> ExpanderVerdict {
        let masks: Vec<u64> = (0..self.edge_count()).map(|e| self.edge_mask(e)).collect();
        let mut remainders = Vec::new();
        for size in 1..=k {
            let Some(max_y) = alpha.max_strictly_below(size) else {
                continue;
            };
            let mut combos = Combinations::new(self.n, size);
            while let Some(xs) = combos.next_ref() {
                let x = xs.iter().fold(0u64, |m, &v| m | (1 << v));
                remainders.clear();
                remainders.extend(
                    masks
                        .iter()
                        .filter(|&&m| (m & x).count_ones() == 1)
                        .map(|&m| m & !x),
                );
                if let Some(y) = small_hitting_set(&remainders, 0, max_y) {
                    return ExpanderVerdict::Witness {
                        x: VertexSet::from_vertices(self.n, xs.iter().copied()),
                        y: VertexSet::from_vertices(self.n, (0..self.n).filter(|&v| y >> v & 1 == 1)),
                    };
                }
            }
        }
        ExpanderVerdict::Expander
    }

    fn expander_sampled(&self, k: usize, alpha: Ratio, trials: usize, seed: u64) -> ExpanderVerdict {
        let mut rng = SplitMix64::new(seed);
        let vertices: Vec<usize> = (0..self.n).collect();
        if k == 0 || self.n == 0 {
            return ExpanderVerdict::NoCounterexampleFound { trials };
        }
        for _ in 0..trials {
            let size = 1 + rng.below_usize(k);
            let Some(max_y) = alpha.max_strictly_below(size) else {
                continue;
            };
            let x = VertexSet::from_vertices(self.n, rng.sample(&vertices, size));
            let y = self.greedy_cover(&x);
            if y.len() <= max_y {
                return ExpanderVerdict::Witness { x, y };
            }
        }
        ExpanderVerdict::NoCounterexampleFound { trials }
    }

    /// Greedy set `Y` disjoint from `X` hitting every edge that meets `X`
    /// exactly once.
    fn greedy_cover(&self, x: &VertexSet) -> VertexSet {
        let mut pending: Vec<usize> = (0..self.edge_count())
            .filter(|&e| self.edge(e).iter().filter(|&&v| x.contains(v)).count() == 1)
            .collect();
        let mut y = VertexSet::new(self.n);
        let mut hits = vec![0usize; self.n];
        while !pending.is_empty() {
            hits.iter_mut().for_each(|h| *h = 0);
            for &e in &pending {
                for &v in self.edge(e) {
                    if !x.contains(v) {
                        hits[v] += 1;
                    }
                }
            }
            let best = (0..self.n).max_by_key(|&v| (hits[v], usize::MAX - v)).unwrap_or(0);
            y.insert(best);
            pending.retain(|&e| !self.edge_contains(e, best));
        }
        y
    }

    /// Every vertex `v` has at least `(1/2 + eps) n` partners `u` with
    /// codegree `d(u, v) >= eps n^(r-2)`.
    pub fn check_theorem_condition(&self, eps: f64) -> Result<ConditionCheck> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(argument!("eps must lie in (0, 1), got {eps}"));
        }
        let codegree_floor = eps * libm::pow(self.n as f64, self.r as f64 - 2.0);
        let needed = (0.5 + eps) * self.n as f64;
        for v in 0..self.n {
            let row = self.codegree_row(v);
            let qualifying = (0..self.n)
                .filter(|&u| u != v && row[u] as f64 >= codegree_floor)
                .count();
            if (qualifying as f64) < needed {
                return Ok(ConditionCheck::Fails { vertex: v, qualifying });
            }
        }
        Ok(ConditionCheck::Holds)
    }

    /// The two minimum-degree conditions: `δ1 >= (2^(1-r) + eps) C(n-1, r-1)`
    /// and `δ2 >= eps n^(r-2)`.
    pub fn check_corollary_conditions(&self, eps: f64) -> Result<CorollaryReport> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(argument!("eps must lie in (0, 1), got {eps}"));
        }
        let delta1 = self.min_degree();
        let delta1_bound = (libm::pow(2.0, 1.0 - self.r as f64) + eps)
            * binomial(self.n.saturating_sub(1), self.r - 1) as f64;
        let mut delta2 = usize::MAX;
        for v in 0..self.n {
            let row = self.codegree_row(v);
            for (u, &c) in row.iter().enumerate() {
                if u != v {
                    delta2 = delta2.min(c);
                }
            }
        }
        if self.n < 2 {
            delta2 = 0;
        }
        let delta2_bound = eps * libm::pow(self.n as f64, self.r as f64 - 2.0);
        Ok(CorollaryReport {
            delta1,
            delta1_bound,
            delta1_ok: delta1 as f64 >= delta1_bound,
            delta2,
            delta2_bound,
            delta2_ok: delta2 as f64 >= delta2_bound,
        })
    }
}

/// Smallest-first search for `Y` with `|Y| <= budget` hitting every mask.
fn small_hitting_set(masks: &[u64], chosen: u64, budget: usize) -> Option<u64> {
    let Some(&open) = masks.iter().find(|&&m| m & chosen == 0) else {
        return Some(chosen);
    };
    if budget == 0 {
        return None;
    }
    let mut rest = open;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest ^= bit;
        if let Some(found) = small_hitting_set(masks, chosen | bit, budget - 1) {
            return Some(found);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpanderMode {
    /// Scan every `X`; refuses hypergraphs with more than `max_n` vertices.
    Exhaustive { max_n: usize },
    /// Random `X` with a greedy cover `Y`; one-sided.
    Sampled { trials: usize, seed: u64 },
}

impl Default for ExpanderMode {
    fn default() -> Self {
        ExpanderMode::Exhaustive { max_n: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpanderVerdict {
    Expander,
    NoCounterexampleFound { trials: usize },
    /// No edge meets `x` exactly once while avoiding `y`.
    Witness { x: VertexSet, y: VertexSet },
}

impl ExpanderVerdict {
    pub fn is_expander(&self) -> bool {
        matches!(self, ExpanderVerdict::Expander)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConditionCheck {
    Holds,
    Fails { vertex: usize, qualifying: usize },
}

impl ConditionCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionCheck::Holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorollaryReport {
    pub delta1: usize,
    pub delta1_bound: f64,
    pub delta1_ok: bool,
    pub delta2: usize,
    pub delta2_bound: f64,
    pub delta2_ok: bool,
}

/// Brute-force check that no edge meets `x` exactly once and avoids `y`.
pub fn is_expansion_witness(h: &Hypergraph, x: &VertexSet, y: &VertexSet) -> bool {
    x.is_disjoint(y)
        && !h.edges().any(|e| {
            e.iter().filter(|&&v| x.contains(v)).count() == 1 && !e.iter().any(|&v| y.contains(v))
        })
}
