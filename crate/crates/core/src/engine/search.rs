use alloc::vec::Vec;

use super::path::{open_cycle, verify_cycle, verify_path, BergeCycle, BergePath, PathState};
use super::rotation::for_each_move;
use super::{structurally_excluded, DecisionOutcome, Effort, Provenance, Verdict};
use crate::error::{argument, Result};
use crate::hypergraph::Hypergraph;
use crate::oracle::{exact_hamiltonian, OracleGuard};
use crate::rng::SplitMix64;

/// Result of one greedy step on a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendOutcome {
    Extended(BergePath),
    Closed(BergeCycle),
    Stuck,
}

/// Extends `p` by one vertex through the smallest unused edge at its last
/// vertex that reaches off the path; failing that, closes it with the
/// smallest unused edge containing both endpoints.
pub fn extend_or_close(h: &Hypergraph, p: &BergePath) -> Result<ExtendOutcome> {
    if !verify_path(h, p, false) {
        return Err(argument!("not a Berge path of this hypergraph"));
    }
    let mut st = PathState::from_path(h.n(), h.edge_count(), p);
    let end = st.last();
    for &e in h.incident(end) {
        if st.used(e) {
            continue;
        }
        if let Some(&w) = h.edge(e).iter().find(|&&w| !st.on_path(w)) {
            st.push(e, w);
            return Ok(ExtendOutcome::Extended(st.to_path()));
        }
    }
    if st.len() >= 2 {
        if let Some(e) = closing_edge(h, &st) {
            return Ok(ExtendOutcome::Closed(st.to_cycle(e)));
        }
    }
    Ok(ExtendOutcome::Stuck)
}

fn closing_edge(h: &Hypergraph, st: &PathState) -> Option<usize> {
    let first = st.first();
    h.common_edges(st.last(), first).find(|&e| !st.used(e))
}

/// Settings for [`decide_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideConfig {
    /// Maximum number of rotations over all restarts.
    pub budget: u64,
    pub seed: u64,
    /// Ask the exact oracle when the search gives up within the guard.
    pub fallback: bool,
    pub guard: OracleGuard,
}

impl Default for DecideConfig {
    fn default() -> Self {
        Self {
            budget: 20_000,
            seed: 0,
            fallback: false,
            guard: OracleGuard::default(),
        }
    }
}

/// Rotation-extension decision for Berge Hamiltonicity.
pub fn decide_hamiltonian(h: &Hypergraph, budget: u64, seed: u64, fallback: bool) -> DecisionOutcome {
    decide_with(
        h,
        &DecideConfig {
            budget,
            seed,
            fallback,
            ..DecideConfig::default()
        },
    )
}

/// Rotation-extension decision for Berge Hamiltonicity.
///
/// Starts from the vertex of maximum degree (smallest index on ties),
/// then alternates greedy extension at both ends, closing, re-opening a
/// closed non-spanning cycle through an edge that leaves it, and random
/// rotations. Every `restart_period` rotations without progress the walk
/// restarts from a random vertex. Answers `No` only for structurally
/// excluded hosts or through the oracle.
pub fn decide_with(h: &Hypergraph, cfg: &DecideConfig) -> DecisionOutcome {
    let mut effort = Effort::default();
    if structurally_excluded(h) {
        return DecisionOutcome::structural_no(effort);
    }
    let mut searcher = Searcher::new(h, cfg.seed, cfg.budget);
    if let Found::Cycle(c) = searcher.run_with_restarts() {
        debug_assert!(c.is_hamiltonian_in(h));
        return DecisionOutcome {
            verdict: Verdict::Yes,
            certificate: Some(c),
            provenance: Provenance::Rotation,
            effort: searcher.effort,
        };
    }
    effort.add(&searcher.effort);
    oracle_fallback(h, cfg.fallback, cfg.guard, effort)
}

pub(crate) fn oracle_fallback(h: &Hypergraph, fallback: bool, guard: OracleGuard, mut effort: Effort) -> DecisionOutcome {
    if fallback && guard.admits(h) {
        effort.oracle_calls += 1;
        if let Ok(answer) = exact_hamiltonian(h, &guard) {
            return DecisionOutcome {
                verdict: if answer.is_some() { Verdict::Yes } else { Verdict::No },
                certificate: answer,
                provenance: Provenance::Oracle,
                effort,
            };
        }
    }
    DecisionOutcome {
        verdict: Verdict::Unknown,
        certificate: None,
        provenance: Provenance::Rotation,
        effort,
    }
}

pub(crate) enum Found {
    Cycle(BergeCycle),
    Path(BergePath),
}

pub(crate) struct Searcher<'h> {
    h: &'h Hypergraph,
    rng: SplitMix64,
    pub budget: u64,
    pub effort: Effort,
    free_degree: Vec<usize>,
}

impl<'h> Searcher<'h> {
    pub fn new(h: &'h Hypergraph, seed: u64, budget: u64) -> Self {
        Self {
            h,
            rng: SplitMix64::new(seed),
            budget,
            effort: Effort::default(),
            free_degree: h.degrees(),
        }
    }

    fn restart_period(&self) -> u64 {
        let n = self.h.n() as u64;
        (40 * n * n).max(2_000)
    }

    fn start_vertex(&self) -> usize {
        let h = self.h;
        (0..h.n())
            .max_by_key(|&v| (h.incident(v).len(), usize::MAX - v))
            .unwrap_or(0)
    }

    pub fn run_with_restarts(&mut self) -> Found {
        let (n, m) = (self.h.n(), self.h.edge_count());
        let mut best: Option<BergePath> = None;
        let mut start = self.start_vertex();
        loop {
            let st = PathState::new(n, m, start);
            self.reset_free_degree(&st);
            let period = self.restart_period();
            match self.walk(st, period) {
                Found::Cycle(c) => return Found::Cycle(c),
                Found::Path(p) => {
                    if best.as_ref().is_none_or(|b| p.len() > b.len()) {
                        best = Some(p);
                    }
                }
            }
            if self.budget == 0 {
                break;
            }
            self.effort.restarts += 1;
            start = self.rng.below_usize(n);
        }
        Found::Path(best.unwrap_or_else(|| BergePath::single(start)))
    }

    /// One walk from the default start vertex, without restarts.
    pub fn single_walk(&mut self) -> Found {
        let st = PathState::new(self.h.n(), self.h.edge_count(), self.start_vertex());
        self.reset_free_degree(&st);
        let period = self.restart_period();
        self.walk(st, period)
    }

    /// Improves a given path without restarting elsewhere.
    pub fn improve(&mut self, p: &BergePath) -> Found {
        let st = PathState::from_path(self.h.n(), self.h.edge_count(), p);
        self.reset_free_degree(&st);
        let period = self.restart_period();
        self.walk(st, period)
    }

    fn reset_free_degree(&mut self, st: &PathState) {
        let h = self.h;
        for v in 0..h.n() {
            self.free_degree[v] = h.incident(v).iter().filter(|&&e| !st.used(e)).count();
        }
    }

    fn mark_used(&mut self, e: usize, delta_used: bool) {
        for &v in self.h.edge(e) {
            if delta_used {
                self.free_degree[v] -= 1;
            } else {
                self.free_degree[v] += 1;
            }
        }
    }

    /// Extension at the last vertex, preferring the off-path vertex with
    /// the fewest unused edges left.
    fn try_extend(&mut self, st: &mut PathState) -> bool {
        let h = self.h;
        let end = st.last();
        let mut best: Option<(usize, usize)> = None;
        let mut best_key = usize::MAX;
        let mut ties = 0u64;
        for &e in h.incident(end) {
            if st.used(e) {
                continue;
            }
            for &w in h.edge(e) {
                if st.on_path(w) {
                    continue;
                }
                let key = self.free_degree[w];
                if key < best_key {
                    best_key = key;
                    best = Some((e, w));
                    ties = 1;
                } else if key == best_key {
                    ties += 1;
                    if self.rng.below(ties) == 0 {
                        best = Some((e, w));
                    }
                }
            }
        }
        match best {
            Some((e, w)) => {
                st.push(e, w);
                self.mark_used(e, true);
                self.effort.extensions += 1;
                true
            }
            None => false,
        }
    }

    fn walk(&mut self, mut st: PathState, period: u64) -> Found {
        let n = self.h.n();
        let mut best = st.to_path();
        let mut since_progress = 0u64;
        let mut moves: Vec<(usize, usize)> = Vec::new();
        loop {
            let mut grew = false;
            while self.try_extend(&mut st) {
                grew = true;
            }
            st.reverse();
            while self.try_extend(&mut st) {
                grew = true;
            }
            if let Some(e) = (st.len() >= 3).then(|| closing_edge(self.h, &st)).flatten() {
                if st.len() == n {
                    let c = st.to_cycle(e);
                    debug_assert!(verify_cycle(self.h, &c, false));
                    return Found::Cycle(c);
                }
                let mut cycle_edges = st.edges.clone();
                cycle_edges.push(e);
                let at = self.rng.below_usize(st.len());
                if let Some(p) = open_cycle(self.h, &st.verts, &cycle_edges, at) {
                    self.effort.reopenings += 1;
                    st = PathState::from_path(n, self.h.edge_count(), &p);
                    self.reset_free_degree(&st);
                    grew = true;
                }
            }
            if st.len() > best.len() {
                best = st.to_path();
                since_progress = 0;
            }
            if grew {
                continue;
            }
            if self.budget == 0 || since_progress >= period {
                return Found::Path(best);
            }
            moves.clear();
            for_each_move(self.h, &st, |e, pivot| moves.push((e, pivot)));
            if moves.is_empty() {
                st.reverse();
                for_each_move(self.h, &st, |e, pivot| moves.push((e, pivot)));
                if moves.is_empty() {
                    return Found::Path(best);
                }
            }
            let (e, pivot) = moves[self.rng.below_usize(moves.len())];
            let old = st.edges[pivot];
            if old != e {
                self.mark_used(old, false);
                self.mark_used(e, true);
            }
            st.rotate(e, pivot);
            self.budget -= 1;
            self.effort.rotations += 1;
            since_progress += 1;
            if self.rng.below(2) == 0 {
                st.reverse();
            }
        }
    }
}
