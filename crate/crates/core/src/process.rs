//! The random subgraph process, hitting times and Monte Carlo trials.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{decide_with, DecideConfig, Provenance, Verdict};
use crate::error::{argument, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::oracle::{exact_hamiltonian, OracleGuard};
use crate::rng::{derive_seed, SplitMix64};

/// An ordering `sigma` of the host edges. Step `t` has the first `t`
/// edges of `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphProcess<'h> {
    host: &'h Hypergraph,
    sigma: Vec<usize>,
}

/// Uniformly random edge ordering (Fisher–Yates under [`SplitMix64`]).
pub fn random_process(host: &Hypergraph, seed: u64) -> Result<SubgraphProcess<'_>> {
    if host.edge_count() == 0 {
        return Err(argument!("the subgraph process needs at least one edge"));
    }
    let mut sigma: Vec<usize> = (0..host.edge_count()).collect();
    SplitMix64::new(seed).shuffle(&mut sigma);
    Ok(SubgraphProcess { host, sigma })
}

impl<'h> SubgraphProcess<'h> {
    pub fn from_order(host: &'h Hypergraph, sigma: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; host.edge_count()];
        if sigma.len() != host.edge_count() {
            return Err(argument!("ordering has {} entries for {} edges", sigma.len(), host.edge_count()));
        }
        for &e in &sigma {
            if e >= seen.len() || core::mem::replace(&mut seen[e], true) {
                return Err(argument!("ordering is not a permutation of the edge ids"));
            }
        }
        Ok(Self { host, sigma })
    }

    pub fn host(&self) -> &'h Hypergraph {
        self.host
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// `N`, the number of steps.
    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `H_t`; its edge `i` is host edge `sigma[i]`.
    pub fn prefix(&self, t: usize) -> Hypergraph {
        self.host.sub_hypergraph(&self.sigma[..t.min(self.len())])
    }
}

/// `τ_k`: the first step at which every vertex has degree at least `k`.
pub fn tau_min_degree(proc: &SubgraphProcess<'_>, k: usize) -> Result<usize> {
    let host = proc.host();
    if k == 0 {
        return Ok(0);
    }
    if host.min_degree() < k {
        return Err(Error::NoHit(alloc::format!(
            "host minimum degree {} is below {k}",
            host.min_degree()
        )));
    }
    let mut degree = vec![0usize; host.n()];
    let mut short = host.n();
    for (t, &e) in proc.sigma().iter().enumerate() {
        for &v in host.edge(e) {
            degree[v] += 1;
            if degree[v] == k {
                short -= 1;
            }
        }
        if short == 0 {
            return Ok(t + 1);
        }
    }
    unreachable!("host minimum degree is at least k")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Binary,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hitting {
    Hit { t: usize, probes: usize },
    /// Some probe stayed unknown; the hitting time lies in `lo..=hi`.
    Inconclusive { lo: usize, hi: usize, probes: usize },
}

/// Hitting time of a monotone increasing property. `probe(H_t, t)` may
/// answer [`Verdict::Unknown`], which leaves the result inconclusive.
pub fn tau_property<F>(proc: &SubgraphProcess<'_>, probe: F, strategy: Strategy) -> Result<Hitting>
where
    F: FnMut(&Hypergraph, usize) -> Verdict,
{
    search_range(proc, 0, probe, strategy)
}

/// Like [`tau_property`] when every `t < lo` is known to fail.
fn search_range<F>(proc: &SubgraphProcess<'_>, lo: usize, mut probe: F, strategy: Strategy) -> Result<Hitting>
where
    F: FnMut(&Hypergraph, usize) -> Verdict,
{
    let n = proc.len();
    let mut probes = 0;
    let mut ask = |t: usize, probes: &mut usize| {
        *probes += 1;
        probe(&proc.prefix(t), t)
    };
    let no_hit = || Error::NoHit(alloc::format!("property fails on the whole host ({n} edges)"));
    match strategy {
        Strategy::Linear => {
            let mut first_unknown = None;
            for t in lo..=n {
                match ask(t, &mut probes) {
                    Verdict::Yes => {
                        return Ok(match first_unknown {
                            None => Hitting::Hit { t, probes },
                            Some(u) => Hitting::Inconclusive { lo: u, hi: t, probes },
                        })
                    }
                    Verdict::Unknown => {
                        first_unknown.get_or_insert(t);
                    }
                    Verdict::No => {}
                }
            }
            match first_unknown {
                Some(u) => Ok(Hitting::Inconclusive { lo: u, hi: n, probes }),
                None => Err(no_hit()),
            }
        }
        Strategy::Binary => {
            match ask(n, &mut probes) {
                Verdict::No => return Err(no_hit()),
                Verdict::Unknown => return Ok(Hitting::Inconclusive { lo, hi: n, probes }),
                Verdict::Yes => {}
            }
            let (mut lo, mut hi) = (lo.min(n), n);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                match ask(mid, &mut probes) {
                    Verdict::Yes => hi = mid,
                    Verdict::No => lo = mid + 1,
                    Verdict::Unknown => return Ok(Hitting::Inconclusive { lo, hi, probes }),
                }
            }
            Ok(Hitting::Hit { t: lo, probes })
        }
    }
}

/// How a single Hamiltonicity probe is decided: the engine, then the
/// exact oracle within the guard, then the engine again with budgets
/// multiplied by `growth` up to `escalations` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeConfig {
    pub budget: u64,
    pub escalations: u32,
    pub growth: u64,
    pub fallback_oracle: bool,
    pub guard: OracleGuard,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            budget: 20_000,
            escalations: 2,
            growth: 4,
            fallback_oracle: true,
            guard: OracleGuard::default(),
        }
    }
}

/// Verdict and provenance of one Hamiltonicity probe.
pub fn hamiltonicity_probe(h: &Hypergraph, config: &ProbeConfig, seed: u64) -> (Verdict, Provenance) {
    let mut budget = config.budget;
    let mut round = 0;
    loop {
        let out = decide_with(
            h,
            &DecideConfig {
                budget,
                seed: derive_seed(seed, u64::from(round)),
                fallback: false,
                guard: config.guard,
            },
        );
        if out.verdict != Verdict::Unknown {
            return (out.verdict, out.provenance);
        }
        if round == 0 && config.fallback_oracle && config.guard.admits(h) {
            if let Ok(answer) = exact_hamiltonian(h, &config.guard) {
                let verdict = if answer.is_some() { Verdict::Yes } else { Verdict::No };
                return (verdict, Provenance::Oracle);
            }
        }
        if round >= config.escalations {
            return (Verdict::Unknown, Provenance::Rotation);
        }
        round += 1;
        budget = budget.saturating_mul(config.growth.max(1));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialConfig {
    pub probe: ProbeConfig,
    /// Also locate `τ_BH` when it differs from `τ₂`.
    pub full_tau_bh: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase", tag = "kind"))]
pub enum TauBh {
    Step { t: usize },
    NoHit,
    Inconclusive { lo: usize, hi: usize },
    NotComputed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    /// `None` when the host itself has minimum degree below two.
    pub tau2: Option<usize>,
    pub tau_bh: TauBh,
    /// Whether `H_{τ₂}` is Berge Hamiltonian; `None` when undecided.
    pub coincide: Option<bool>,
    /// Provenance of the probe at `τ₂`.
    pub provenance: Option<Provenance>,
}

/// Trial `index`: ordering seeded with `seed_base ^ index`, `τ₂`, the
/// probe at `τ₂`, and optionally the full `τ_BH`.
pub fn run_trial(host: &Hypergraph, index: u64, seed_base: u64, config: &TrialConfig) -> Result<TrialRecord> {
    let seed = seed_base ^ index;
    let proc = random_process(host, seed)?;
    let mut record = TrialRecord {
        trial: index,
        seed,
        tau2: None,
        tau_bh: TauBh::NotComputed,
        coincide: None,
        provenance: None,
    };
    let probe_seed = derive_seed(seed, 0x7072_6F62);
    let tau2 = match tau_min_degree(&proc, 2) {
        Ok(t) => t,
        Err(Error::NoHit(_)) => {
            record.tau_bh = TauBh::NoHit;
            return Ok(record);
        }
        Err(e) => return Err(e),
    };
    record.tau2 = Some(tau2);
    let (verdict, provenance) = hamiltonicity_probe(&proc.prefix(tau2), &config.probe, derive_seed(probe_seed, tau2 as u64));
    record.provenance = Some(provenance);
    record.coincide = match verdict {
        Verdict::Yes => Some(true),
        Verdict::No => Some(false),
        Verdict::Unknown => None,
    };
    if verdict == Verdict::Yes {
        // Every earlier prefix has a vertex of degree below two.
        record.tau_bh = TauBh::Step { t: tau2 };
    } else if config.full_tau_bh {
        let lo = if verdict == Verdict::No { tau2 + 1 } else { tau2 };
        let probe = |h: &Hypergraph, t: usize| hamiltonicity_probe(h, &config.probe, derive_seed(probe_seed, t as u64)).0;
        record.tau_bh = match search_range(&proc, lo, probe, Strategy::Binary) {
            Ok(Hitting::Hit { t, .. }) => TauBh::Step { t },
            Ok(Hitting::Inconclusive { lo, hi, .. }) => TauBh::Inconclusive { lo, hi },
            Err(Error::NoHit(_)) => TauBh::NoHit,
            Err(e) => return Err(e),
        };
    }
    Ok(record)
}

/// Aggregate over a set of trials; independent of record order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub trials: usize,
    pub coincide: usize,
    pub not_coincide: usize,
    /// Trials whose probe at `τ₂` stayed unknown.
    pub inconclusive: usize,
    /// `coincide / trials`; inconclusive trials count against it.
    pub coincidence_fraction: f64,
    /// Nearest-rank `τ₂` quantiles at 0, 0.25, 0.5, 0.75 and 1.
    pub tau2_quantiles: Option<[usize; 5]>,
    /// Trials with a located `τ_BH` below `τ₂`.
    pub necessity_violations: usize,
}

pub fn summarize(records: &[TrialRecord]) -> Summary {
    let count = |want: Option<bool>| records.iter().filter(|r| r.tau2.is_some() && r.coincide == want).count();
    let coincide = count(Some(true));
    let mut tau2: Vec<usize> = records.iter().filter_map(|r| r.tau2).collect();
    tau2.sort_unstable();
    let tau2_quantiles = (!tau2.is_empty()).then(|| [0.0, 0.25, 0.5, 0.75, 1.0].map(|q| nearest_rank(&tau2, q)));
    let necessity_violations = records
        .iter()
        .filter(|r| matches!((r.tau2, r.tau_bh), (Some(t2), TauBh::Step { t }) if t < t2))
        .count();
    Summary {
        trials: records.len(),
        coincide,
        not_coincide: count(Some(false)),
        inconclusive: count(None),
        coincidence_fraction: if records.is_empty() {
            0.0
        } else {
            coincide as f64 / records.len() as f64
        },
        tau2_quantiles,
        necessity_violations,
    }
}

fn nearest_rank(sorted: &[usize], q: f64) -> usize {
    let rank = libm::ceil(q * sorted.len() as f64) as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Sequential trials `0..trials`.
pub fn run_trials(
    host: &Hypergraph,
    trials: u64,
    seed_base: u64,
    config: &TrialConfig,
) -> Result<(Vec<TrialRecord>, Summary)> {
    if trials == 0 {
        return Err(argument!("at least one trial is required"));
    }
    let records = (0..trials)
        .map(|i| run_trial(host, i, seed_base, config))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records);
    Ok((records, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, two_cliques};

    #[test]
    fn process_basics() {
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(random_process(&single, 5).unwrap().sigma(), [0]);
        assert!(random_process(&Hypergraph::empty(4, 3), 1).is_err());
        let k = complete(7, 3).unwrap();
        assert_eq!(random_process(&k, 3).unwrap(), random_process(&k, 3).unwrap());
        assert!(SubgraphProcess::from_order(&single, vec![1]).is_err());
    }

    #[test]
    fn tau_min_degree_examples() {
        let k4 = complete(4, 3).unwrap();
        let identity = SubgraphProcess::from_order(&k4, (0..4).collect()).unwrap();
        assert_eq!(tau_min_degree(&identity, 2).unwrap(), 3);
        assert_eq!(tau_min_degree(&identity, 0).unwrap(), 0);
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let p = random_process(&single, 0).unwrap();
        assert_eq!(tau_min_degree(&p, 1).unwrap(), 1);
        let loose = Hypergraph::new(4, 3, [[0, 1, 2]]).unwrap();
        let p = random_process(&loose, 0).unwrap();
        assert!(matches!(tau_min_degree(&p, 1), Err(Error::NoHit(_))));
    }

    #[test]
    fn edge_count_predicate() {
        let k = complete(7, 3).unwrap();
        let p = random_process(&k, 1).unwrap();
        let pred = |h: &Hypergraph, _| if h.edge_count() >= 5 { Verdict::Yes } else { Verdict::No };
        for s in [Strategy::Binary, Strategy::Linear] {
            assert!(matches!(tau_property(&p, pred, s).unwrap(), Hitting::Hit { t: 5, .. }));
        }
        let unknown = |_: &Hypergraph, t: usize| if t < 9 { Verdict::No } else if t < 12 { Verdict::Unknown } else { Verdict::Yes };
        assert!(matches!(
            tau_property(&p, unknown, Strategy::Linear).unwrap(),
            Hitting::Inconclusive { lo: 9, hi: 12, .. }
        ));
        match tau_property(&p, unknown, Strategy::Binary).unwrap() {
            Hitting::Inconclusive { lo, hi, .. } => assert!(lo <= 12 && hi >= 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hamiltonicity_no_hit_on_two_cliques() {
        let tc = two_cliques(8, 3).unwrap();
        let p = random_process(&tc, 2).unwrap();
        let probe = |h: &Hypergraph, t: usize| hamiltonicity_probe(h, &ProbeConfig::default(), t as u64).0;
        assert!(matches!(tau_property(&p, probe, Strategy::Binary), Err(Error::NoHit(_))));
    }

    #[test]
    fn trials_on_complete_seven() {
        let k = complete(7, 3).unwrap();
        let config = TrialConfig {
            full_tau_bh: true,
            ..TrialConfig::default()
        };
        let (records, summary) = run_trials(&k, 5, 11, &config).unwrap();
        for r in &records {
            let TauBh::Step { t } = r.tau_bh else { panic!("{r:?}") };
            assert!(t >= r.tau2.unwrap());
        }
        assert_eq!(summary.necessity_violations, 0);
        assert_eq!(run_trials(&k, 5, 11, &config).unwrap().0, records);
        let mut reversed = records.clone();
        reversed.reverse();
        assert_eq!(summarize(&reversed), summary);
    }

    #[test]
    fn quantiles() {
        assert_eq!(nearest_rank(&[1, 2, 3, 4], 0.5), 2);
        assert_eq!(nearest_rank(&[1, 2, 3, 4], 0.0), 1);
        assert_eq!(nearest_rank(&[1, 2, 3, 4], 1.0), 4);
    }
}
