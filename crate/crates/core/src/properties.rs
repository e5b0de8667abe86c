//! Checkers for the structural properties P1 to P7 of a hypergraph `G`.
//!
//! P1 to P3 only look at degrees and are always exact. P4 to P7 quantify
//! over vertex subsets: exact mode enumerates them (bounded by a guard),
//! sampled mode draws random subsets and can only fail to find a
//! counterexample. Logarithms are natural and the subset sizes
//! `n/√ln n` and `(1-ε/2)n` are rounded down.

use alloc::string::String;
use alloc::vec::Vec;

use crate::combin::Combinations;
use crate::error::{argument, capacity, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropertyMode {
    /// Enumerate all subsets; hosts with `n > guard` are rejected.
    Exact { guard: usize },
    Sampled { trials: u64, seed: u64 },
}

impl Default for PropertyMode {
    fn default() -> Self {
        PropertyMode::Exact { guard: 12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyConfig {
    pub eps: f64,
    /// Degree bound of `SMALL(G)`; `eps^8 ln n` by default.
    pub d0: f64,
    pub mode: PropertyMode,
}

impl PropertyConfig {
    pub fn new(eps: f64, n: usize) -> Self {
        Self {
            eps,
            d0: libm::pow(eps, 8.0) * ln(n),
            mode: PropertyMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum Witness {
    Degree { vertex: usize, degree: usize, bound: f64 },
    SmallCount { count: usize, bound: f64 },
    /// An edge with two vertices of `SMALL(G)`.
    SmallPair { edge: usize, vertices: [usize; 2] },
    /// Two edges at `vertex` that both meet `N[SMALL(G)] - {vertex}`.
    Crowded { vertex: usize, edges: [usize; 2] },
    Sets { u: Vec<usize>, w: Vec<usize>, count: usize, bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "verdict"))]
pub enum PropertyVerdict {
    Verified,
    Violated { witness: Witness },
    NoCounterexampleFound { trials: u64 },
}

impl PropertyVerdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, PropertyVerdict::Violated { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropertyResult {
    pub name: String,
    pub verdict: PropertyVerdict,
}

fn ln(n: usize) -> f64 {
    libm::log(n as f64)
}

fn violated(witness: Witness) -> PropertyVerdict {
    PropertyVerdict::Violated { witness }
}

/// `SMALL(G)`: vertices of degree at most `d0`.
pub fn small_set(g: &Hypergraph, d0: f64) -> VertexSet {
    VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| g.incident(v).len() as f64 <= d0))
}

/// P1: `Δ(G) <= (10/ε) ln n`.
pub fn check_p1(g: &Hypergraph, eps: f64) -> PropertyVerdict {
    let bound = 10.0 / eps * ln(g.n());
    match (0..g.n()).max_by_key(|&v| (g.incident(v).len(), usize::MAX - v)) {
        Some(v) if g.incident(v).len() as f64 > bound => violated(Witness::Degree {
            vertex: v,
            degree: g.incident(v).len(),
            bound,
        }),
        _ => PropertyVerdict::Verified,
    }
}

/// P2: `|SMALL(G)| <= n^0.1`.
pub fn check_p2(g: &Hypergraph, d0: f64) -> PropertyVerdict {
    let bound = libm::pow(g.n() as f64, 0.1);
    let count = small_set(g, d0).len();
    if count as f64 > bound {
        violated(Witness::SmallCount { count, bound })
    } else {
        PropertyVerdict::Verified
    }
}

/// P3: no edge meets `SMALL(G)` twice, and no vertex outside `SMALL(G)`
/// lies in two edges meeting `N[SMALL(G)] - {v}`.
pub fn check_p3(g: &Hypergraph, d0: f64) -> PropertyVerdict {
    let small = small_set(g, d0);
    for (id, e) in g.edges().enumerate() {
        let mut hits = e.iter().copied().filter(|&v| small.contains(v));
        if let (Some(a), Some(b)) = (hits.next(), hits.next()) {
            return violated(Witness::SmallPair {
                edge: id,
                vertices: [a, b],
            });
        }
    }
    let mut closed = g.neighborhood(&small);
    small.iter().for_each(|v| closed.insert(v));
    for v in (0..g.n()).filter(|&v| !small.contains(v)) {
        let mut touching = g
            .incident(v)
            .iter()
            .copied()
            .filter(|&e| g.edge(e).iter().any(|&u| u != v && closed.contains(u)));
        if let (Some(a), Some(b)) = (touching.next(), touching.next()) {
            return violated(Witness::Crowded { vertex: v, edges: [a, b] });
        }
    }
    PropertyVerdict::Verified
}

/// Edge masks for the subset properties.
struct Masks {
    n: usize,
    r: u32,
    edges: Vec<u64>,
}

impl Masks {
    fn new(g: &Hypergraph) -> Self {
        Self {
            n: g.n(),
            r: g.r() as u32,
            edges: g.edges().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect(),
        }
    }

    fn count(&self, f: impl Fn(u64) -> bool) -> usize {
        self.edges.iter().filter(|&&m| f(m)).count()
    }

    /// Edges meeting `u` at least twice.
    fn p4(&self, u: u64) -> usize {
        self.count(|e| (e & u).count_ones() >= 2)
    }

    /// Edges meeting `u` exactly once and meeting `w`.
    fn p5(&self, u: u64, w: u64) -> usize {
        self.count(|e| (e & u).count_ones() == 1 && e & w != 0)
    }

    /// Edges meeting `u` exactly once and `w` in `r - 1` vertices.
    fn p6(&self, u: u64, w: u64) -> usize {
        self.count(|e| (e & u).count_ones() == 1 && (e & w).count_ones() == self.r - 1)
    }

    fn crossing(&self, u: u64, w: u64) -> bool {
        self.edges.iter().any(|&e| e & u != 0 && e & w != 0)
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

fn to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Subsets of `pool` of size `k`, as masks.
fn for_each_subset(pool: u64, k: usize, mut f: impl FnMut(u64) -> bool) -> bool {
    let items = to_vec(pool);
    if k > items.len() {
        return true;
    }
    let mut combos = Combinations::new(items.len(), k);
    while let Some(idx) = combos.next_ref() {
        if !f(idx.iter().fold(0u64, |m, &i| m | 1 << items[i])) {
            return false;
        }
    }
    true
}

fn random_subset(rng: &mut SplitMix64, pool: u64, k: usize) -> u64 {
    rng.sample(&to_vec(pool), k).into_iter().fold(0u64, |m, v| m | 1 << v)
}

/// Size limits shared by the subset properties.
struct Sizes {
    /// `floor(n / √ln n)`.
    u_max: usize,
    /// `floor((1 - ε/2) n)`.
    w_big: usize,
    p4_factor: f64,
    p5_factor: f64,
    p6_bound: f64,
}

impl Sizes {
    fn new(n: usize, eps: f64) -> Self {
        let l = ln(n);
        let u_max = if l > 0.0 {
            (libm::floor(n as f64 / libm::sqrt(l)) as usize).min(n)
        } else {
            n
        };
        Self {
            u_max,
            w_big: libm::floor((1.0 - eps / 2.0) * n as f64) as usize,
            p4_factor: libm::pow(l, 0.75),
            p5_factor: 0.5 * eps * l,
            p6_bound: n as f64 * libm::cbrt(l),
        }
    }
}

fn sets(u: u64, w: u64, count: usize, bound: f64) -> PropertyVerdict {
    violated(Witness::Sets {
        u: to_vec(u),
        w: to_vec(w),
        count,
        bound,
    })
}

fn p7_sizes(n: usize, eps: f64) -> impl Iterator<Item = usize> {
    let lo = eps * n as f64 / 6.0;
    (0..=n).filter(move |&u| {
        let w = n - u;
        u as f64 >= lo && u <= w && (w as f64) <= n as f64 - lo
    })
}

fn exact_subset_properties(g: &Hypergraph, eps: f64) -> [PropertyVerdict; 4] {
    let m = Masks::new(g);
    let n = g.n();
    let s = Sizes::new(n, eps);
    let all = m.all();

    let mut p4 = PropertyVerdict::Verified;
    'p4: for k in 1..=s.u_max {
        let bound = k as f64 * s.p4_factor;
        let mut hit = None;
        for_each_subset(all, k, |u| {
            let c = m.p4(u);
            if c as f64 > bound {
                hit = Some((u, c));
            }
            hit.is_none()
        });
        if let Some((u, c)) = hit {
            p4 = sets(u, 0, c, bound);
            break 'p4;
        }
    }

    // The count grows with W, so only the largest admissible W matter.
    let mut p5 = PropertyVerdict::Verified;
    'p5: for k in 1..=s.u_max {
        let bound = k as f64 * s.p5_factor;
        let mut hit = None;
        for_each_subset(all, k, |u| {
            let rest = all & !u;
            let size = (3 * k).min(n - k);
            for_each_subset(rest, size, |w| {
                let c = m.p5(u, w);
                if c as f64 > bound {
                    hit = Some((u, w, c));
                }
                hit.is_none()
            })
        });
        if let Some((u, w, c)) = hit {
            p5 = sets(u, w, c, bound);
            break 'p5;
        }
    }

    let mut p6 = PropertyVerdict::Verified;
    if s.u_max + s.w_big <= n {
        let mut hit = None;
        for_each_subset(all, s.u_max, |u| {
            for_each_subset(all & !u, s.w_big, |w| {
                let c = m.p6(u, w);
                if (c as f64) < s.p6_bound {
                    hit = Some((u, w, c));
                }
                hit.is_none()
            })
        });
        if let Some((u, w, c)) = hit {
            p6 = sets(u, w, c, s.p6_bound);
        }
    }

    let mut p7 = PropertyVerdict::Verified;
    for k in p7_sizes(n, eps) {
        let mut hit = None;
        for_each_subset(all, k, |u| {
            if !m.crossing(u, all & !u) {
                hit = Some(u);
            }
            hit.is_none()
        });
        if let Some(u) = hit {
            p7 = sets(u, all & !u, 0, 1.0);
            break;
        }
    }
    [p4, p5, p6, p7]
}

fn sampled_subset_properties(g: &Hypergraph, eps: f64, trials: u64, seed: u64) -> [PropertyVerdict; 4] {
    let m = Masks::new(g);
    let n = g.n();
    let s = Sizes::new(n, eps);
    let all = m.all();
    let none = PropertyVerdict::NoCounterexampleFound { trials };
    let mut out = [none.clone(), none.clone(), none.clone(), none];
    let mut rng = SplitMix64::new(seed);
    let p7: Vec<usize> = p7_sizes(n, eps).collect();
    for _ in 0..trials {
        if s.u_max >= 1 && !out[0].is_violated() {
            let k = 1 + rng.below_usize(s.u_max);
            let u = random_subset(&mut rng, all, k);
            let (c, bound) = (m.p4(u), k as f64 * s.p4_factor);
            if c as f64 > bound {
                out[0] = sets(u, 0, c, bound);
            }
        }
        if s.u_max >= 1 && !out[1].is_violated() {
            let k = 1 + rng.below_usize(s.u_max);
            let u = random_subset(&mut rng, all, k);
            let size = rng.below_usize((3 * k).min(n - k) + 1);
            let w = random_subset(&mut rng, all & !u, size);
            let (c, bound) = (m.p5(u, w), k as f64 * s.p5_factor);
            if c as f64 > bound {
                out[1] = sets(u, w, c, bound);
            }
        }
        if s.u_max + s.w_big <= n && !out[2].is_violated() {
            let u = random_subset(&mut rng, all, s.u_max);
            let w = random_subset(&mut rng, all & !u, s.w_big);
            let c = m.p6(u, w);
            if (c as f64) < s.p6_bound {
                out[2] = sets(u, w, c, s.p6_bound);
            }
        }
        if !p7.is_empty() && !out[3].is_violated() {
            let k = p7[rng.below_usize(p7.len())];
            let u = random_subset(&mut rng, all, k);
            if !m.crossing(u, all & !u) {
                out[3] = sets(u, all & !u, 0, 1.0);
            }
        }
    }
    out
}

/// Verdicts for P1 to P7 in order.
pub fn property_report(g: &Hypergraph, config: &PropertyConfig) -> Result<Vec<PropertyResult>> {
    let eps = config.eps;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(argument!("eps must lie in (0, 1), got {eps}"));
    }
    if g.n() < 2 {
        return Err(argument!("need at least two vertices"));
    }
    let subset = match config.mode {
        PropertyMode::Exact { guard } => {
            if g.n() > guard.min(64) {
                return Err(capacity!(
                    "P4: exact subset enumeration is limited to n <= {}, got n = {}",
                    guard.min(64),
                    g.n()
                ));
            }
            exact_subset_properties(g, eps)
        }
        PropertyMode::Sampled { trials, seed } => {
            if g.n() > 64 {
                return Err(capacity!("P4: subset sampling is limited to n <= 64, got n = {}", g.n()));
            }
            sampled_subset_properties(g, eps, trials, seed)
        }
    };
    let [p4, p5, p6, p7] = subset;
    let verdicts = [check_p1(g, eps), check_p2(g, config.d0), check_p3(g, config.d0), p4, p5, p6, p7];
    Ok(verdicts
        .into_iter()
        .enumerate()
        .map(|(i, verdict)| PropertyResult {
            name: alloc::format!("P{}", i + 1),
            verdict,
        })
        .collect())
}
