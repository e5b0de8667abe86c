use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::path::{verify_path, BergePath, PathState, OFF};
use crate::error::{argument, Result};
use crate::hypergraph::Hypergraph;

/// All rotations `(edge, pivot)` available at the last vertex of `p`.
///
/// A path edge `e_i` qualifies when it contains the last vertex; an unused
/// edge qualifies once per path vertex it contains. Pivots at the
/// second-to-last vertex are skipped: they leave the endpoint unchanged.
pub fn rotation_moves(h: &Hypergraph, p: &BergePath) -> Vec<(usize, usize)> {
    let st = PathState::from_path(h.n(), h.edge_count(), p);
    moves_of(h, &st)
}

pub(crate) fn moves_of(h: &Hypergraph, st: &PathState) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for_each_move(h, st, |e, pivot| out.push((e, pivot)));
    out
}

pub(crate) fn for_each_move(h: &Hypergraph, st: &PathState, mut f: impl FnMut(usize, usize)) {
    let l = st.len();
    if l < 3 {
        return;
    }
    for &e in h.incident(st.last()) {
        let at = st.edge_position(e);
        if at != OFF {
            if at + 2 < l {
                f(e, at);
            }
            continue;
        }
        for &u in h.edge(e) {
            let i = st.position(u);
            if i != OFF && i + 2 < l {
                f(e, i);
            }
        }
    }
}

/// Pósa rotation of `p` fixing its first vertex, through edge `e`.
///
/// With `e = e_i` on the path the pivot is `v_i`; otherwise the pivot is
/// the earliest path vertex of `e`. The result is
/// `(v_1, e_1, ..., v_i, e, v_l, e_{l-1}, ..., e_{i+1}, v_{i+1})`, or `None`
/// when `e` offers no pivot other than `v_{l-1}`.
pub fn rotate(h: &Hypergraph, p: &BergePath, e: usize) -> Result<Option<BergePath>> {
    check_rotation_edge(h, p, e)?;
    let st = PathState::from_path(h.n(), h.edge_count(), p);
    let l = st.len();
    let at = st.edge_position(e);
    let pivot = if at != OFF {
        Some(at).filter(|&i| i + 2 < l)
    } else {
        h.edge(e)
            .iter()
            .map(|&u| st.position(u))
            .filter(|&i| i != OFF && i + 2 < l)
            .min()
    };
    Ok(pivot.map(|i| {
        let mut st = st;
        st.rotate(e, i);
        st.to_path()
    }))
}

/// Rotation through `e` at an explicit pivot position (0-based).
pub fn rotate_at(h: &Hypergraph, p: &BergePath, e: usize, pivot: usize) -> Result<Option<BergePath>> {
    check_rotation_edge(h, p, e)?;
    let st = PathState::from_path(h.n(), h.edge_count(), p);
    let l = st.len();
    if pivot + 2 >= l || !h.edge_contains(e, st.verts[pivot]) {
        return Ok(None);
    }
    let at = st.edge_position(e);
    if at != OFF && at != pivot {
        return Ok(None);
    }
    let mut st = st;
    st.rotate(e, pivot);
    Ok(Some(st.to_path()))
}

fn check_rotation_edge(h: &Hypergraph, p: &BergePath, e: usize) -> Result<()> {
    if !verify_path(h, p, false) {
        return Err(argument!("not a Berge path of this hypergraph"));
    }
    if e >= h.edge_count() {
        return Err(argument!("edge {e} outside 0..{}", h.edge_count()));
    }
    if !h.edge_contains(e, p.last()) {
        return Err(argument!("edge {e} does not contain the endpoint {}", p.last()));
    }
    Ok(())
}

/// Endpoints reachable by rotations fixing the first vertex, each with a
/// witness path of the original length.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RotationClosure {
    pub fixed: usize,
    pub paths: BTreeMap<usize, BergePath>,
    /// Rotations applied.
    pub rotations: u64,
    /// `true` when the search ran out of new states before the budget.
    pub exhausted: bool,
}

impl RotationClosure {
    pub fn endpoints(&self) -> impl Iterator<Item = usize> + '_ {
        self.paths.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Breadth-first closure of `p` under rotations fixing `p.first()`,
/// deduplicated by endpoint. `budget` bounds the number of rotations.
pub fn endpoint_closure(h: &Hypergraph, p: &BergePath, budget: u64) -> Result<RotationClosure> {
    if !verify_path(h, p, false) {
        return Err(argument!("not a Berge path of this hypergraph"));
    }
    let (n, m) = (h.n(), h.edge_count());
    let mut paths = BTreeMap::new();
    paths.insert(p.last(), p.clone());
    let mut queue = VecDeque::new();
    queue.push_back(p.clone());
    let mut rotations = 0u64;
    let mut moves = Vec::new();
    while let Some(current) = queue.pop_front() {
        let st = PathState::from_path(n, m, &current);
        moves.clear();
        for_each_move(h, &st, |e, pivot| moves.push((e, pivot)));
        for &(e, pivot) in &moves {
            if rotations >= budget {
                return Ok(RotationClosure {
                    fixed: p.first(),
                    paths,
                    rotations,
                    exhausted: false,
                });
            }
            rotations += 1;
            let end = st.verts[pivot + 1];
            if paths.contains_key(&end) {
                continue;
            }
            let mut next = st.clone();
            next.rotate(e, pivot);
            let path = next.to_path();
            paths.insert(end, path.clone());
            queue.push_back(path);
        }
    }
    Ok(RotationClosure {
        fixed: p.first(),
        paths,
        rotations,
        exhausted: true,
    })
}
