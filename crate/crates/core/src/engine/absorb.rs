//! Sparse expander extraction and the booster absorption loop.
//!
//! The loop keeps a connected spanning subgraph `Γ` of the host `G` and
//! the longest Berge path the engine has certified in it. Each step adds
//! one or two edges of `E(G) \ E(Γ)` that verifiably lengthen that path or
//! close a Hamilton cycle. Candidate edges are searched at the endpoints
//! reachable by rotations from both ends of the current path.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::path::{open_cycle, verify_cycle, verify_path, BergeCycle, BergePath};
use super::rotation::endpoint_closure;
use super::search::{oracle_fallback, Found, Searcher};
use super::{structurally_excluded, DecisionOutcome, Effort, Provenance, Verdict};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::oracle::OracleGuard;
use crate::rng::SplitMix64;

/// Sparsity parameter `max(2, ceil(eps^8 ln n))`.
pub fn default_d0(eps: f64, n: usize) -> usize {
    let raw = libm::pow(eps, 8.0) * libm::log(n.max(1) as f64);
    (libm::ceil(raw) as usize).max(2)
}

/// Every vertex of degree at most `d0` keeps all its edges, every other
/// vertex keeps a uniform `d0`-subset of its edges; returns the union as
/// ascending edge ids of `g`.
pub fn extract_expander(g: &Hypergraph, d0: usize, seed: u64) -> Vec<usize> {
    let mut rng = SplitMix64::new(seed);
    let mut keep = vec![false; g.edge_count()];
    for v in 0..g.n() {
        let incident = g.incident(v);
        if incident.len() <= d0 {
            incident.iter().for_each(|&e| keep[e] = true);
        } else {
            for e in rng.sample(incident, d0) {
                keep[e] = true;
            }
        }
    }
    (0..g.edge_count()).filter(|&e| keep[e]).collect()
}

/// `g` has no edge leaving `component`, so no spanning subgraph of it can
/// be connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSplit {
    pub component: VertexSet,
    /// Edge ids of `Γ` after the successful patches.
    pub partial: Vec<usize>,
}

/// Adds crossing edges of `g` to the spanning subgraph `gamma` (ids of
/// `g`) until it is connected. Added ids are appended in order.
pub fn connect_components(g: &Hypergraph, gamma: &[usize]) -> Result<Vec<usize>, ComponentSplit> {
    let mut ids = gamma.to_vec();
    let mut member = vec![false; g.edge_count()];
    ids.iter().for_each(|&e| member[e] = true);
    loop {
        let (label, count) = g.sub_hypergraph(&ids).components();
        if count <= 1 {
            return Ok(ids);
        }
        let crossing = (0..g.edge_count()).find(|&e| {
            !member[e] && {
                let first = label[g.edge(e)[0]];
                g.edge(e).iter().any(|&v| label[v] != first)
            }
        });
        match crossing {
            Some(e) => {
                member[e] = true;
                ids.push(e);
            }
            None => {
                // Report the component of G (through Γ) that nothing crosses.
                let (g_label, _) = g.components();
                let component = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| g_label[v] == g_label[0]));
                return Err(ComponentSplit { component, partial: ids });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbsorbConfig {
    pub d0: usize,
    /// Rotation budget over the whole run.
    pub budget: u64,
    pub seed: u64,
    pub fallback: bool,
    pub guard: OracleGuard,
}

impl AbsorbConfig {
    pub fn new(d0: usize, budget: u64, seed: u64) -> Self {
        Self {
            d0,
            budget,
            seed,
            fallback: false,
            guard: OracleGuard::default(),
        }
    }
}

/// One absorption step.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoosterStep {
    pub step: usize,
    /// Host edge ids added to `Γ` (one or two).
    pub added: Vec<usize>,
    pub arity: usize,
    pub path_before: usize,
    pub path_after: usize,
    pub hamiltonian: bool,
    /// `|E(Γ)|` after the step.
    pub gamma_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbsorptionRun {
    pub outcome: DecisionOutcome,
    /// `|E(Γ_0)|` straight after extraction.
    pub extracted_edges: usize,
    /// `|E(Γ)|` after connecting components.
    pub connected_edges: usize,
    pub trace: Vec<BoosterStep>,
}

/// What the booster search found, in `Γ + added` local edge ids.
enum Boost {
    Path(BergePath),
    Cycle(BergeCycle),
}

struct Absorber<'g> {
    g: &'g Hypergraph,
    /// Host ids of Γ; local id `i` of Γ is `ids[i]`.
    ids: Vec<usize>,
    member: Vec<bool>,
    gamma: Hypergraph,
    budget: u64,
    effort: Effort,
}

/// Expander extraction, connection, then at most `n` booster steps.
pub fn absorption_run(g: &Hypergraph, cfg: &AbsorbConfig) -> AbsorptionRun {
    let mut run = AbsorptionRun {
        outcome: DecisionOutcome::structural_no(Effort::default()),
        extracted_edges: 0,
        connected_edges: 0,
        trace: Vec::new(),
    };
    if structurally_excluded(g) {
        return run;
    }
    if cfg.budget == 0 {
        run.outcome = oracle_fallback(g, cfg.fallback, cfg.guard, Effort::default());
        return run;
    }
    let gamma0 = extract_expander(g, cfg.d0, cfg.seed);
    run.extracted_edges = gamma0.len();
    let ids = match connect_components(g, &gamma0) {
        Ok(ids) => ids,
        Err(_) => return run,
    };
    run.connected_edges = ids.len();
    let mut member = vec![false; g.edge_count()];
    ids.iter().for_each(|&e| member[e] = true);
    let mut ab = Absorber {
        g,
        gamma: g.sub_hypergraph(&ids),
        ids,
        member,
        budget: cfg.budget,
        effort: Effort::default(),
    };
    let mut search_seed = SplitMix64::new(cfg.seed ^ 0x5EED_AB50_4B00_0000);

    let mut searcher = Searcher::new(&ab.gamma, search_seed.next_u64(), ab.budget);
    let first = searcher.single_walk();
    let spent = (searcher.effort, searcher.budget);
    ab.charge(spent);
    let mut path = match first {
        Found::Cycle(c) => {
            run.outcome = ab.yes(c);
            return run;
        }
        Found::Path(p) => p,
    };

    for step in 0..g.n() {
        if ab.budget == 0 {
            break;
        }
        let before = path.len();
        let Some((added, boost)) = ab.find_booster(&path) else {
            break;
        };
        for &e in &added {
            ab.member[e] = true;
            ab.ids.push(e);
        }
        ab.gamma = g.sub_hypergraph(&ab.ids);
        let (after, hamiltonian) = match &boost {
            Boost::Path(p) => (p.len(), false),
            Boost::Cycle(c) => (c.len(), true),
        };
        run.trace.push(BoosterStep {
            step,
            arity: added.len(),
            added,
            path_before: before,
            path_after: after,
            hamiltonian,
            gamma_edges: ab.ids.len(),
        });
        match boost {
            Boost::Cycle(c) => {
                run.outcome = ab.yes(c);
                return run;
            }
            Boost::Path(p) => {
                debug_assert!(verify_path(&ab.gamma, &p, false));
                let mut searcher = Searcher::new(&ab.gamma, search_seed.next_u64(), ab.budget);
                let improved = searcher.improve(&p);
                let spent = (searcher.effort, searcher.budget);
                ab.charge(spent);
                match improved {
                    Found::Cycle(c) => {
                        run.outcome = ab.yes(c);
                        return run;
                    }
                    Found::Path(q) => path = if q.len() > p.len() { q } else { p },
                }
            }
        }
    }
    run.outcome = oracle_fallback(g, cfg.fallback, cfg.guard, ab.effort);
    run
}

impl Absorber<'_> {
    fn charge(&mut self, (effort, budget): (Effort, u64)) {
        self.effort.add(&effort);
        self.budget = budget;
    }

    fn yes(&self, c: BergeCycle) -> DecisionOutcome {
        let cert = c.map_edges(&self.ids);
        debug_assert!(cert.is_hamiltonian_in(self.g));
        DecisionOutcome {
            verdict: Verdict::Yes,
            certificate: Some(cert),
            provenance: Provenance::Rotation,
            effort: self.effort,
        }
    }

    /// Host edges outside Γ containing `v`, ascending.
    fn outside_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.g.incident(v).iter().copied().filter(|&e| !self.member[e])
    }

    /// Witness paths `s .. t` for endpoint pairs reachable by rotations:
    /// first the closure fixing `s`, then from each `t` the closure fixing `t`.
    fn endpoint_pairs(&mut self, path: &BergePath) -> Vec<BergePath> {
        let mut out = vec![path.clone()];
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        seen.insert((path.first(), path.last()));
        let Ok(outer) = endpoint_closure(&self.gamma, path, self.budget) else {
            return out;
        };
        self.spend(outer.rotations);
        for witness in outer.paths.values() {
            if seen.insert((witness.first(), witness.last())) {
                out.push(witness.clone());
            }
            let Ok(inner) = endpoint_closure(&self.gamma, &witness.reversed(), self.budget) else {
                continue;
            };
            self.spend(inner.rotations);
            for back in inner.paths.values() {
                let forward = back.reversed();
                if seen.insert((forward.first(), forward.last())) {
                    out.push(forward);
                }
            }
            if self.budget == 0 {
                break;
            }
        }
        out
    }

    fn spend(&mut self, rotations: u64) {
        self.effort.rotations += rotations;
        self.budget = self.budget.saturating_sub(rotations);
    }

    fn find_booster(&mut self, path: &BergePath) -> Option<(Vec<usize>, Boost)> {
        let pairs = self.endpoint_pairs(path);
        for w in &pairs {
            if let Some(found) = self.single_edge_boost(w) {
                return Some(found);
            }
        }
        for w in &pairs {
            if let Some(found) = self.pair_boost(w) {
                return Some(found);
            }
        }
        None
    }

    fn local_id(&self, slot: usize) -> usize {
        self.ids.len() + slot
    }

    /// Finishes a cycle on `V(w)` through the new edges: Hamiltonian, or
    /// re-opened into a longer path through an edge of Γ leaving it.
    fn finish_cycle(&self, added: &[usize], verts: Vec<usize>, edges: Vec<usize>) -> Option<Boost> {
        let extended = self.extended_gamma(added);
        if verts.len() == self.g.n() {
            let c = BergeCycle { vertices: verts, edge_ids: edges };
            return verify_cycle(&extended, &c, false).then_some(Boost::Cycle(c));
        }
        let p = open_cycle(&extended, &verts, &edges, 0)?;
        verify_path(&extended, &p, false).then_some(Boost::Path(p))
    }

    fn extended_gamma(&self, added: &[usize]) -> Hypergraph {
        let mut ids = self.ids.clone();
        ids.extend_from_slice(added);
        self.g.sub_hypergraph(&ids)
    }

    /// One edge at `s` or `t`: extension off the path, or closing `s..t`.
    fn single_edge_boost(&self, w: &BergePath) -> Option<(Vec<usize>, Boost)> {
        let on_path: BTreeSet<usize> = w.vertices.iter().copied().collect();
        let (s, t) = (w.first(), w.last());
        let new_id = self.local_id(0);
        for (end, other) in [(s, t), (t, s)] {
            for e in self.outside_at(end) {
                let edge = self.g.edge(e);
                if let Some(&x) = edge.iter().find(|v| !on_path.contains(v)) {
                    let mut p = if end == t { w.clone() } else { w.reversed() };
                    p.vertices.push(x);
                    p.edge_ids.push(new_id);
                    return Some((vec![e], Boost::Path(p)));
                }
                if w.len() >= 3 && edge.contains(&other) {
                    let mut edges = w.edge_ids.clone();
                    edges.push(new_id);
                    if let Some(b) = self.finish_cycle(&[e], w.vertices.clone(), edges) {
                        return Some((vec![e], b));
                    }
                }
            }
        }
        None
    }

    /// Two edges `e_s ∋ {s, p_{i+1}}` and `e_t ∋ {t, p_i}` turning the path
    /// into a cycle on its own vertex set.
    fn pair_boost(&self, w: &BergePath) -> Option<(Vec<usize>, Boost)> {
        let l = w.len();
        if l < 3 {
            return None;
        }
        let (s, t) = (w.first(), w.last());
        let p = &w.vertices;
        for i in 0..l - 1 {
            for es in self.outside_at(s).filter(|&e| self.g.edge_contains(e, p[i + 1])) {
                let Some(et) = self
                    .outside_at(t)
                    .find(|&e| e != es && self.g.edge_contains(e, p[i]))
                else {
                    continue;
                };
                // p_0 .. p_i, e_t, p_{l-1} .. p_{i+1}, e_s back to p_0.
                let (id_s, id_t) = (self.local_id(0), self.local_id(1));
                let mut verts: Vec<usize> = p[..=i].to_vec();
                verts.extend(p[i + 1..].iter().rev());
                let mut edges: Vec<usize> = w.edge_ids[..i].to_vec();
                edges.push(id_t);
                edges.extend(w.edge_ids[i + 1..].iter().rev());
                edges.push(id_s);
                if let Some(b) = self.finish_cycle(&[es, et], verts, edges) {
                    return Some((vec![es, et], b));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, two_cliques};

    #[test]
    fn extraction_keeps_everything_when_d0_is_large() {
        let g = complete(8, 3).unwrap();
        let all: Vec<usize> = (0..g.edge_count()).collect();
        assert_eq!(extract_expander(&g, g.max_degree(), 3), all);
    }

    #[test]
    fn extraction_bounds() {
        let g = complete(30, 3).unwrap();
        let ids = extract_expander(&g, 5, 8);
        assert!(ids.len() <= 150);
        assert!(g.sub_hypergraph(&ids).min_degree() >= 5);
        // Star: every edge contains vertex 0.
        let star = Hypergraph::new(7, 3, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [0, 1, 3]]).unwrap();
        let ids = extract_expander(&star, 1, 2);
        assert!(ids.len() <= star.n());
        assert!(!ids.is_empty());
    }

    #[test]
    fn connecting_components() {
        let g = complete(9, 3).unwrap();
        let connected: Vec<usize> = (0..g.edge_count()).collect();
        assert_eq!(connect_components(&g, &connected).unwrap(), connected);
        // {0,1,2},{3,4,5},{6,7,8}, ... two components: 0..4 and 5..8.
        let a = g.find_edge(&[0, 1, 2]).unwrap();
        let b = g.find_edge(&[2, 3, 4]).unwrap();
        let c = g.find_edge(&[5, 6, 7]).unwrap();
        let d = g.find_edge(&[6, 7, 8]).unwrap();
        let patched = connect_components(&g, &[a, b, c, d]).unwrap();
        assert_eq!(patched.len(), 5);
        assert!(g.sub_hypergraph(&patched).is_connected());

        let tc = two_cliques(8, 3).unwrap();
        let all: Vec<usize> = (0..tc.edge_count()).collect();
        let split = connect_components(&tc, &all).unwrap_err();
        assert_eq!(split.component.to_vec(), [0, 1, 2, 3]);
    }

    #[test]
    fn absorption_on_complete_twenty() {
        let g = complete(20, 3).unwrap();
        let run = absorption_run(&g, &AbsorbConfig::new(8, 50_000, 4));
        assert_eq!(run.outcome.verdict, Verdict::Yes);
        assert!(run.outcome.certificate.as_ref().unwrap().is_hamiltonian_in(&g));
        assert!(run.trace.len() <= g.n());
    }

    #[test]
    fn absorption_edge_cases() {
        let run = absorption_run(&two_cliques(8, 3).unwrap(), &AbsorbConfig::new(3, 1000, 1));
        assert_eq!(run.outcome.verdict, Verdict::No);
        let run = absorption_run(&complete(10, 3).unwrap(), &AbsorbConfig::new(3, 0, 1));
        assert_eq!(run.outcome.verdict, Verdict::Unknown);
        assert!(run.trace.is_empty());
    }

    #[test]
    fn boosters_come_from_outside_gamma_and_lengthen() {
        // Sparse Γ (d0 = 2) forces booster steps on a dense host.
        for seed in 0..10 {
            let g = complete(12, 3).unwrap();
            let run = absorption_run(&g, &AbsorbConfig::new(2, 20_000, seed));
            let mut seen = BTreeSet::new();
            for step in &run.trace {
                assert!(step.path_after > step.path_before || step.hamiltonian);
                assert!(step.arity == step.added.len() && (1..=2).contains(&step.arity));
                for &e in &step.added {
                    assert!(seen.insert(e));
                }
            }
            assert!(run.trace.len() <= g.n());
        }
    }

    #[test]
    fn d0_default_floor() {
        assert_eq!(default_d0(0.1, 40), 2);
        assert_eq!(default_d0(0.9, 1_000_000), 6);
    }
}
