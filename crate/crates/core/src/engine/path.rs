use alloc::vec;
use alloc::vec::Vec;

use crate::hypergraph::Hypergraph;

/// `v_1, e_1, v_2, ..., e_{l-1}, v_l` with `{v_i, v_{i+1}} ⊆ e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BergePath {
    pub vertices: Vec<usize>,
    pub edge_ids: Vec<usize>,
}

impl BergePath {
    pub fn single(v: usize) -> Self {
        Self {
            vertices: vec![v],
            edge_ids: Vec::new(),
        }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut edge_ids = self.edge_ids.clone();
        vertices.reverse();
        edge_ids.reverse();
        Self { vertices, edge_ids }
    }

    /// Relabels edge ids through `map` (e.g. subgraph to host ids).
    pub fn map_edges(&self, map: &[usize]) -> Self {
        Self {
            vertices: self.vertices.clone(),
            edge_ids: self.edge_ids.iter().map(|&e| map[e]).collect(),
        }
    }
}

/// `v_1, e_1, ..., v_k, e_k` where `e_k` joins `v_k` back to `v_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BergeCycle {
    pub vertices: Vec<usize>,
    pub edge_ids: Vec<usize>,
}

impl BergeCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_hamiltonian_in(&self, h: &Hypergraph) -> bool {
        self.len() == h.n() && verify_cycle(h, self, false)
    }

    pub fn map_edges(&self, map: &[usize]) -> Self {
        Self {
            vertices: self.vertices.clone(),
            edge_ids: self.edge_ids.iter().map(|&e| map[e]).collect(),
        }
    }
}

fn all_distinct(items: &[usize], universe: usize) -> bool {
    let mut seen = vec![false; universe];
    for &x in items {
        if x >= universe || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn links_hold(h: &Hypergraph, pairs: impl Iterator<Item = (usize, usize, usize)>) -> bool {
    let m = h.edge_count();
    for (a, e, b) in pairs {
        if e >= m || !h.edge_contains(e, a) || !h.edge_contains(e, b) {
            return false;
        }
    }
    true
}

/// Checks every path invariant; `weak` skips edge distinctness.
pub fn verify_path(h: &Hypergraph, p: &BergePath, weak: bool) -> bool {
    let l = p.vertices.len();
    if l == 0 || p.edge_ids.len() != l - 1 || !all_distinct(&p.vertices, h.n()) {
        return false;
    }
    if !weak && !all_distinct(&p.edge_ids, h.edge_count()) {
        return false;
    }
    links_hold(
        h,
        (0..l - 1).map(|i| (p.vertices[i], p.edge_ids[i], p.vertices[i + 1])),
    )
}

/// Checks every cycle invariant (at least two vertices).
pub fn verify_cycle(h: &Hypergraph, c: &BergeCycle, weak: bool) -> bool {
    let k = c.vertices.len();
    if k < 2 || c.edge_ids.len() != k || !all_distinct(&c.vertices, h.n()) {
        return false;
    }
    if !weak && !all_distinct(&c.edge_ids, h.edge_count()) {
        return false;
    }
    links_hold(
        h,
        (0..k).map(|i| (c.vertices[i], c.edge_ids[i], c.vertices[(i + 1) % k])),
    )
}

/// Mutable path with position indexes, used by the search loops.
#[derive(Debug, Clone)]
pub(crate) struct PathState {
    pub verts: Vec<usize>,
    pub edges: Vec<usize>,
    pos: Vec<usize>,
    epos: Vec<usize>,
}

pub(crate) const OFF: usize = usize::MAX;

impl PathState {
    pub fn new(n: usize, m: usize, start: usize) -> Self {
        let mut pos = vec![OFF; n];
        pos[start] = 0;
        Self {
            verts: vec![start],
            edges: Vec::new(),
            pos,
            epos: vec![OFF; m],
        }
    }

    pub fn from_path(n: usize, m: usize, p: &BergePath) -> Self {
        Self::from_parts(n, m, p.vertices.clone(), p.edge_ids.clone())
    }

    pub fn from_parts(n: usize, m: usize, verts: Vec<usize>, edges: Vec<usize>) -> Self {
        let mut pos = vec![OFF; n];
        let mut epos = vec![OFF; m];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        for (i, &e) in edges.iter().enumerate() {
            epos[e] = i;
        }
        Self {
            verts,
            edges,
            pos,
            epos,
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn first(&self) -> usize {
        self.verts[0]
    }

    pub fn last(&self) -> usize {
        self.verts[self.verts.len() - 1]
    }

    pub fn on_path(&self, v: usize) -> bool {
        self.pos[v] != OFF
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn edge_position(&self, e: usize) -> usize {
        self.epos[e]
    }

    pub fn used(&self, e: usize) -> bool {
        self.epos[e] != OFF
    }

    pub fn push(&mut self, e: usize, v: usize) {
        self.epos[e] = self.edges.len();
        self.edges.push(e);
        self.pos[v] = self.verts.len();
        self.verts.push(v);
    }

    pub fn reverse(&mut self) {
        self.verts.reverse();
        self.edges.reverse();
        self.reindex(0);
    }

    fn reindex(&mut self, from: usize) {
        for i in from..self.verts.len() {
            self.pos[self.verts[i]] = i;
        }
        for i in from..self.edges.len() {
            self.epos[self.edges[i]] = i;
        }
    }

    /// Rotation at `pivot` with edge `e` (which contains the pivot vertex
    /// and the last vertex). The last vertex becomes `verts[pivot + 1]`.
    pub fn rotate(&mut self, e: usize, pivot: usize) {
        let old = self.edges[pivot];
        if old != e {
            self.epos[old] = OFF;
        }
        debug_assert!(self.epos[e] == OFF || self.epos[e] == pivot);
        self.edges[pivot] = e;
        self.verts[pivot + 1..].reverse();
        self.edges[pivot + 1..].reverse();
        self.epos[e] = pivot;
        self.reindex(pivot + 1);
    }

    pub fn to_path(&self) -> BergePath {
        BergePath {
            vertices: self.verts.clone(),
            edge_ids: self.edges.clone(),
        }
    }

    pub fn to_cycle(&self, closing: usize) -> BergeCycle {
        let mut edge_ids = self.edges.clone();
        edge_ids.push(closing);
        BergeCycle {
            vertices: self.verts.clone(),
            edge_ids,
        }
    }
}

/// Opens the cycle `(verts, edges)` (where `edges[i]` joins `verts[i]` and
/// `verts[i+1 mod k]`) through an edge that meets it and some vertex
/// outside it. Returns the longer path, starting at the outside vertex.
pub(crate) fn open_cycle(
    h: &Hypergraph,
    verts: &[usize],
    edges: &[usize],
    start_at: usize,
) -> Option<BergePath> {
    let k = verts.len();
    let n = h.n();
    let mut pos = vec![OFF; n];
    for (i, &v) in verts.iter().enumerate() {
        pos[v] = i;
    }
    let cycle_pos = |e: usize| edges.iter().position(|&x| x == e);
    for step in 0..k {
        let j = (start_at + step) % k;
        let v = verts[j];
        for &g in h.incident(v) {
            let Some(&w) = h.edge(g).iter().find(|&&u| pos[u] == OFF) else {
                continue;
            };
            let prev = (j + k - 1) % k;
            let forward = match cycle_pos(g) {
                None => true,
                Some(m) if m == prev => true,
                Some(m) if m == j => false,
                Some(_) => continue,
            };
            let mut vertices = Vec::with_capacity(k + 1);
            let mut edge_ids = Vec::with_capacity(k);
            vertices.push(w);
            edge_ids.push(g);
            if forward {
                // v_j, c_j, v_{j+1}, ..., v_{j-1}
                for s in 0..k {
                    vertices.push(verts[(j + s) % k]);
                    if s + 1 < k {
                        edge_ids.push(edges[(j + s) % k]);
                    }
                }
            } else {
                // v_j, c_{j-1}, v_{j-1}, ..., v_{j+1}
                for s in 0..k {
                    vertices.push(verts[(j + k - s) % k]);
                    if s + 1 < k {
                        edge_ids.push(edges[(j + k - s - 1) % k]);
                    }
                }
            }
            return Some(BergePath { vertices, edge_ids });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host() -> Hypergraph {
        // 0: {1,2,5}, 1: {2,3,5}, 2: {1,3,4}
        Hypergraph::new(6, 3, [[1, 2, 5], [2, 3, 5], [1, 3, 4]]).unwrap()
    }

    #[test]
    fn verify_examples() {
        let h = host();
        let p = BergePath {
            vertices: vec![1, 2, 3],
            edge_ids: vec![0, 1],
        };
        assert!(verify_path(&h, &p, false));
        let twice = BergePath {
            vertices: vec![2, 5, 2 + 1],
            edge_ids: vec![1, 1],
        };
        assert!(!verify_path(&h, &twice, false));
        assert!(verify_path(&h, &twice, true));
        let repeated = BergePath {
            vertices: vec![1, 2, 1],
            edge_ids: vec![0, 0],
        };
        assert!(!verify_path(&h, &repeated, true));
        assert!(verify_path(&h, &BergePath::single(0), false));
        assert!(!verify_path(&h, &BergePath { vertices: vec![], edge_ids: vec![] }, false));
    }

    #[test]
    fn cycle_verification() {
        let h = crate::generators::complete(4, 3).unwrap();
        // edges: 0 {0,1,2}, 1 {0,1,3}, 2 {0,2,3}, 3 {1,2,3}
        let c = BergeCycle {
            vertices: vec![0, 1, 2, 3],
            edge_ids: vec![0, 3, 2, 1],
        };
        assert!(verify_cycle(&h, &c, false));
        assert!(c.is_hamiltonian_in(&h));
        let bad = BergeCycle {
            vertices: vec![0, 1, 2, 3],
            edge_ids: vec![0, 3, 2, 2],
        };
        assert!(!verify_cycle(&h, &bad, false));
    }

    #[test]
    fn state_rotation_matches_formula() {
        let h = host();
        let mut st = PathState::from_parts(6, 3, vec![1, 2, 3], vec![0, 1]);
        st.rotate(2, 0);
        assert_eq!(st.verts, [1, 3, 2]);
        assert_eq!(st.edges, [2, 1]);
        assert!(verify_path(&h, &st.to_path(), false));
        assert_eq!(st.position(2), 2);
        assert!(!st.used(0));
    }

    #[test]
    fn reopening_lengthens() {
        let h = crate::generators::complete(5, 3).unwrap();
        // Cycle 0-1-2 using {0,1,2}=0, {1,2,3}=6, {0,2,3}=3.
        let verts = [0, 1, 2];
        let edges = [0, 6, 3];
        assert!(verify_cycle(&h, &BergeCycle { vertices: verts.to_vec(), edge_ids: edges.to_vec() }, false));
        let p = open_cycle(&h, &verts, &edges, 0).unwrap();
        assert_eq!(p.len(), 4);
        assert!(verify_path(&h, &p, false));
    }
}
