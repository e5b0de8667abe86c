//! Edge-probability thresholds around the minimum-degree-two hitting time.
//!
//! All logarithms are natural. `N` is the number of host edges and the
//! step count matching a probability `p` is `m = N p`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{argument, Error, Result};
use crate::hypergraph::Hypergraph;

/// Relative slack applied to the three exponential comparisons.
pub const COMPARISON_SLACK: f64 = 1e-9;

/// A probability and its step count, real and rounded.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Threshold {
    pub p: f64,
    pub m: f64,
    pub m_rounded: u64,
}

impl Threshold {
    fn lower(p: f64, edges: usize) -> Self {
        let m = edges as f64 * p;
        Self {
            p,
            m,
            m_rounded: libm::floor(m) as u64,
        }
    }

    fn upper(p: f64, edges: usize) -> Self {
        let m = edges as f64 * p;
        Self {
            p,
            m,
            m_rounded: libm::ceil(m) as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BasicThresholds {
    /// `ln n / n^{r-1}`, step count rounded down.
    pub t1: Threshold,
    /// `2 ln n / (eps n^{r-1})`, step count rounded up.
    pub t2: Threshold,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(argument!("eps must lie in (0, 1), got {eps}"));
    }
    Ok(())
}

fn scale(h: &Hypergraph) -> f64 {
    libm::pow(h.n() as f64, (h.r() - 1) as f64)
}

pub fn basic_thresholds(h: &Hypergraph, eps: f64) -> Result<BasicThresholds> {
    check_eps(eps)?;
    if h.n() < 3 {
        return Err(argument!("need n >= 3, got {}", h.n()));
    }
    let ln_n = libm::log(h.n() as f64);
    let p1 = ln_n / scale(h);
    let p2 = 2.0 * ln_n / (eps * scale(h));
    Ok(BasicThresholds {
        t1: Threshold::lower(p1, h.edge_count()),
        t2: Threshold::upper(p2, h.edge_count()),
    })
}

/// The degree sequence as `(degree, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pairs: Vec<(usize, usize)>,
    n: usize,
}

impl DegreeProfile {
    pub fn of(h: &Hypergraph) -> Self {
        let mut counts = BTreeMap::new();
        for d in h.degrees() {
            *counts.entry(d).or_insert(0usize) += 1;
        }
        Self {
            pairs: counts.into_iter().collect(),
            n: h.n(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `S(p) = Σ_v (1-p)^{d_v}`.
    pub fn sum(&self, p: f64) -> f64 {
        if p >= 1.0 {
            return self.pairs.iter().filter(|&&(d, _)| d == 0).map(|&(_, c)| c as f64).sum();
        }
        let log_q = libm::log1p(-p);
        self.pairs
            .iter()
            .map(|&(d, c)| c as f64 * libm::exp(d as f64 * log_q))
            .sum()
    }
}

/// The root `p0` with its residual `S(p0) - 1/ln n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Root {
    pub p0: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Bisection for `Σ_v (1-p)^{d_v} = 1 / ln n` on `(0, 1)`.
pub fn solve_p0(h: &Hypergraph, tol: f64) -> Result<Root> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(argument!("tolerance must be positive, got {tol}"));
    }
    if h.n() < 3 {
        return Err(argument!("need n >= 3, got {}", h.n()));
    }
    let profile = DegreeProfile::of(h);
    if profile.pairs().first().is_some_and(|&(d, _)| d == 0) {
        return Err(Error::NoRoot("a vertex has degree 0, so the sum never drops below 1".into()));
    }
    let target = 1.0 / libm::log(h.n() as f64);
    let f = |p: f64| profile.sum(p) - target;
    // f(0) = n - 1/ln n > 0 and f(1) = -1/ln n < 0.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || iterations >= 2_000 {
            break;
        }
        iterations += 1;
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p0 = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let residual = f(p0);
    if residual.abs() > tol {
        return Err(Error::NoRoot(alloc::format!(
            "bisection stalled with residual {residual:e} above tolerance {tol:e}"
        )));
    }
    Ok(Root {
        p0,
        residual,
        iterations,
    })
}

/// Closed-form root `1 - (n ln n)^{-1/D}` for a `D`-regular host.
pub fn regular_p0(n: usize, degree: usize) -> f64 {
    let n = n as f64;
    -libm::expm1(-libm::log(n * libm::log(n)) / degree as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftedThresholds {
    /// `max(0, c_gamma ln ln ln n)`.
    pub gamma: f64,
    /// `p0 - gamma/n^{r-1}`, step count rounded down.
    pub t3: Threshold,
    /// `p0 + gamma/n^{r-1}`, step count rounded up.
    pub t4: Threshold,
    /// Set when either shifted probability left `[0, 1]` and was clamped.
    pub clamped: bool,
    /// `p3 >= r! ln n / (2 n^{r-1})`.
    pub lower_sanity: bool,
    /// `p4 <= 2 ln n / (eps n^{r-1})`.
    pub upper_sanity: bool,
}

pub fn gamma(n: usize, c_gamma: f64) -> f64 {
    let lll = libm::log(libm::log(libm::log(n as f64)));
    let g = c_gamma * lll;
    if g.is_nan() || g < 0.0 {
        0.0
    } else {
        g
    }
}

pub fn shifted_thresholds(h: &Hypergraph, eps: f64, c_gamma: f64, p0: f64) -> Result<ShiftedThresholds> {
    check_eps(eps)?;
    let gamma = gamma(h.n(), c_gamma);
    let shift = gamma / scale(h);
    let (raw3, raw4) = (p0 - shift, p0 + shift);
    let (p3, p4) = (raw3.clamp(0.0, 1.0), raw4.clamp(0.0, 1.0));
    let ln_n = libm::log(h.n() as f64);
    let r_factorial: f64 = (1..=h.r()).map(|i| i as f64).product();
    Ok(ShiftedThresholds {
        gamma,
        t3: Threshold::lower(p3, h.edge_count()),
        t4: Threshold::upper(p4, h.edge_count()),
        clamped: p3 != raw3 || p4 != raw4,
        lower_sanity: p3 >= r_factorial * ln_n / (2.0 * scale(h)),
        upper_sanity: p4 <= 2.0 * ln_n / (eps * scale(h)),
    })
}

/// One comparison `lhs` against `rhs` of the three inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Inequalities {
    /// `ln n · S(p3) >= e^{eps gamma / 4}`.
    pub l1: Comparison,
    /// `ln n · S(p3) <= e^{gamma}`.
    pub l2: Comparison,
    /// `ln n · S(p4) <= e^{-gamma}`.
    pub l3: Comparison,
}

pub fn inequality_report(h: &Hypergraph, eps: f64, gamma: f64, p3: f64, p4: f64) -> Inequalities {
    let profile = DegreeProfile::of(h);
    let ln_n = libm::log(h.n() as f64);
    let s3 = ln_n * profile.sum(p3);
    let s4 = ln_n * profile.sum(p4);
    let at_least = |lhs: f64, rhs: f64| Comparison {
        lhs,
        rhs,
        ok: lhs >= rhs * (1.0 - COMPARISON_SLACK),
    };
    let at_most = |lhs: f64, rhs: f64| Comparison {
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + COMPARISON_SLACK),
    };
    Inequalities {
        l1: at_least(s3, libm::exp(eps * gamma / 4.0)),
        l2: at_most(s3, libm::exp(gamma)),
        l3: at_most(s4, libm::exp(-gamma)),
    }
}

/// Every threshold quantity for one host.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdReport {
    pub n: usize,
    pub r: usize,
    pub edges: usize,
    pub eps: f64,
    pub c_gamma: f64,
    pub basic: BasicThresholds,
    pub root: Root,
    pub shifted: ShiftedThresholds,
    pub inequalities: Inequalities,
}

pub fn threshold_report(h: &Hypergraph, eps: f64, c_gamma: f64, tol: f64) -> Result<ThresholdReport> {
    let basic = basic_thresholds(h, eps)?;
    let root = solve_p0(h, tol)?;
    let shifted = shifted_thresholds(h, eps, c_gamma, root.p0)?;
    let inequalities = inequality_report(h, eps, shifted.gamma, shifted.t3.p, shifted.t4.p);
    Ok(ThresholdReport {
        n: h.n(),
        r: h.r(),
        edges: h.edge_count(),
        eps,
        c_gamma,
        basic,
        root,
        shifted,
        inequalities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn basic_complete_sixty() {
        let k = complete(60, 3).unwrap();
        let b = basic_thresholds(&k, 0.3).unwrap();
        assert_eq!(k.edge_count(), 34_220);
        // ln 60 = 4.0943445622..., / 3600.
        assert!(rel(b.t1.p, 1.137_317_934e-3) < 1e-8);
        assert!((b.t1.m - 38.919).abs() < 1e-3);
        assert_eq!(b.t1.m_rounded, 38);
        assert!(rel(b.t2.p / b.t1.p, 2.0 / 0.3) < 1e-12);
        assert!(basic_thresholds(&k, 1.0).is_err());
        let near_one = basic_thresholds(&k, 1.0 - 1e-12).unwrap();
        assert!(rel(near_one.t2.m, 2.0 * near_one.t1.m) < 1e-9);
    }

    #[test]
    fn p0_regular_closed_form() {
        for n in [30, 60, 100] {
            let k = complete(n, 3).unwrap();
            let d = (n - 1) * (n - 2) / 2;
            let root = solve_p0(&k, 1e-9).unwrap();
            assert!(rel(root.p0, regular_p0(n, d)) < 1e-10, "n={n}");
            assert!(root.residual.abs() <= 1e-9);
        }
        let isolated = Hypergraph::new(5, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert!(matches!(solve_p0(&isolated, 1e-9), Err(Error::NoRoot(_))));
    }

    #[test]
    fn shifted_examples() {
        let k = complete(60, 3).unwrap();
        let p0 = solve_p0(&k, 1e-9).unwrap().p0;
        let s = shifted_thresholds(&k, 0.3, 0.0, p0).unwrap();
        assert_eq!((s.t3.p, s.t4.p), (p0, p0));
        let s = shifted_thresholds(&k, 0.3, 1.0, p0).unwrap();
        // ln ln ln 60 = 0.34330...
        assert!((s.gamma - 0.343_30).abs() < 1e-4);
        assert!(rel(s.t4.p - s.t3.p, 2.0 * s.gamma / 3600.0) < 1e-9);
        assert!(s.t3.p <= p0 && p0 <= s.t4.p);
    }

    #[test]
    fn inequalities_tight_at_regular_root() {
        let k = complete(30, 3).unwrap();
        let p0 = solve_p0(&k, 1e-12).unwrap().p0;
        let l = inequality_report(&k, 0.3, 0.0, p0, p0);
        for c in [l.l1, l.l2, l.l3] {
            assert!((c.lhs - 1.0).abs() < 1e-9);
            assert_eq!(c.rhs, 1.0);
            assert!(c.ok);
        }
        let l = inequality_report(&k, 0.3, 50.0, p0, p0);
        assert!(!l.l3.ok);
    }
}
