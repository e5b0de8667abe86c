//! Host families. Random families are pure functions of their seed.

use alloc::vec::Vec;

use crate::combin::Combinations;
use crate::error::{argument, Error, Result};
use crate::hypergraph::{ConditionCheck, Hypergraph};
use crate::rng::{derive_seed, SplitMix64};

/// Retry cap for [`degree_condition_random`].
pub const DEGREE_CONDITION_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    Complete,
    TwoCliques,
    TwoCliquesMatching,
    Binomial,
    DegreeConditionRandom,
}

/// Full description of a host, enough to regenerate it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub eps: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Hypergraph> {
        if self.n < self.r {
            return Err(argument!("need n >= r, got n = {} and r = {}", self.n, self.r));
        }
        match self.family {
            Family::Complete => complete(self.n, self.r),
            Family::TwoCliques => two_cliques(self.n, self.r),
            Family::TwoCliquesMatching => {
                if self.r != 3 {
                    return Err(argument!("two_cliques_matching is a 3-graph, got r = {}", self.r));
                }
                two_cliques_matching(self.n, self.seed)
            }
            Family::Binomial => binomial(self.n, self.r, self.p, self.seed),
            Family::DegreeConditionRandom => {
                degree_condition_random(self.n, self.r, self.eps, self.seed)
            }
        }
    }
}

fn push_cliques(flat: &mut Vec<usize>, offset: usize, size: usize, r: usize) {
    let mut combos = Combinations::new(size, r);
    while let Some(c) = combos.next_ref() {
        flat.extend(c.iter().map(|&v| v + offset));
    }
}

/// All `C(n, r)` edges in lexicographic order.
pub fn complete(n: usize, r: usize) -> Result<Hypergraph> {
    if r < 2 || n < r {
        return Err(argument!("complete needs n >= r >= 2, got n = {n}, r = {r}"));
    }
    let mut flat = Vec::new();
    push_cliques(&mut flat, 0, n, r);
    Ok(Hypergraph::from_sorted_unchecked(n, r, flat))
}

/// Complete r-graphs on `0..n/2` and on `n/2..n`.
pub fn two_cliques(n: usize, r: usize) -> Result<Hypergraph> {
    if !n.is_multiple_of(2) {
        return Err(argument!("two_cliques needs even n, got {n}"));
    }
    if r < 2 || n / 2 < r {
        return Err(argument!("two_cliques needs n/2 >= r >= 2, got n = {n}, r = {r}"));
    }
    let half = n / 2;
    let mut flat = Vec::new();
    push_cliques(&mut flat, 0, half, r);
    push_cliques(&mut flat, half, half, r);
    Ok(Hypergraph::from_sorted_unchecked(n, r, flat))
}

/// Two complete 3-graphs on halves `V1 = 0..n/2`, `V2 = n/2..n`, plus a
/// perfect matching of `n/3` triples each meeting both halves. The clique
/// edges come first, the matching edges are the last `n/3` edges.
///
/// Covering `V1` forces exactly `n/6` triples of each split type (two
/// vertices in `V1` or two in `V2`); the split types are shuffled and the
/// vertices of each side are filled in uniformly without replacement.
pub fn two_cliques_matching(n: usize, seed: u64) -> Result<Hypergraph> {
    if n == 0 || !n.is_multiple_of(6) {
        return Err(argument!("two_cliques_matching needs n divisible by 6, got {n}"));
    }
    let half = n / 2;
    let mut flat = Vec::new();
    push_cliques(&mut flat, 0, half, 3);
    push_cliques(&mut flat, half, half, 3);

    let mut rng = SplitMix64::new(seed);
    let mut heavy_left: Vec<bool> = (0..n / 3).map(|i| i < n / 6).collect();
    rng.shuffle(&mut heavy_left);
    let mut left: Vec<usize> = (0..half).collect();
    let mut right: Vec<usize> = (half..n).collect();
    rng.shuffle(&mut left);
    rng.shuffle(&mut right);
    let (mut li, mut ri) = (0, 0);
    for heavy in heavy_left {
        let (nl, nr) = if heavy { (2, 1) } else { (1, 2) };
        let mut edge: Vec<usize> = left[li..li + nl].iter().chain(&right[ri..ri + nr]).copied().collect();
        li += nl;
        ri += nr;
        edge.sort_unstable();
        flat.extend(edge);
    }
    Ok(Hypergraph::from_sorted_unchecked(n, 3, flat))
}

/// Each of the `C(n, r)` candidate edges independently with probability
/// `p`, candidates visited in lexicographic order.
pub fn binomial(n: usize, r: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(argument!("p must lie in [0, 1], got {p}"));
    }
    if r < 2 || n < r {
        return Err(argument!("binomial needs n >= r >= 2, got n = {n}, r = {r}"));
    }
    let mut rng = SplitMix64::new(seed);
    let mut flat = Vec::new();
    let mut combos = Combinations::new(n, r);
    while let Some(c) = combos.next_ref() {
        if rng.bernoulli(p) {
            flat.extend_from_slice(c);
        }
    }
    Ok(Hypergraph::from_sorted_unchecked(n, r, flat))
}

/// A binomial host certified by [`Hypergraph::check_theorem_condition`].
///
/// Starts at density `min(1, 4 eps)` and doubles it after every failed
/// attempt; attempt `i` uses a seed derived from `(seed, i)`.
pub fn degree_condition_random(n: usize, r: usize, eps: f64, seed: u64) -> Result<Hypergraph> {
    if !(eps > 0.0 && eps < 0.2) {
        return Err(argument!("eps must lie in (0, 0.2), got {eps}"));
    }
    let mut p = (4.0 * eps).min(1.0);
    let mut last = None;
    for attempt in 0..DEGREE_CONDITION_RETRIES {
        let host = binomial(n, r, p, derive_seed(seed, attempt as u64))?;
        match host.check_theorem_condition(eps)? {
            ConditionCheck::Holds => return Ok(host),
            fail => last = Some(fail),
        }
        p = (2.0 * p).min(1.0);
    }
    Err(Error::Generation(alloc::format!(
        "no host passed the degree condition after {DEGREE_CONDITION_RETRIES} attempts; last witness {last:?}"
    )))
}
