//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure. Tolerances are fixed constants below.

use std::process::Command;
use std::time::{Duration, Instant};

use berge::harness::{run_parallel, summary_of};
use berge_core::engine::{decide_hamiltonian, endpoint_closure, verify_cycle, Provenance};
use berge_core::generators::{binomial, complete, degree_condition_random, two_cliques, two_cliques_matching};
use berge_core::hypergraph::{ExpanderMode, ExpanderVerdict};
use berge_core::oracle::{exact_hamiltonian, exact_longest_path, OracleGuard};
use berge_core::process::{
    hamiltonicity_probe, random_process, run_trial, tau_min_degree, tau_property, Hitting, ProbeConfig, Strategy,
    TauBh, TrialConfig, TrialRecord,
};
use berge_core::thresholds::{basic_thresholds, regular_p0, shifted_thresholds, solve_p0};
use berge_core::{Error, Hypergraph, Ratio, SplitMix64, Verdict};

const C1_MIN_INSTANCES: usize = 500;
const C1_TIME: Duration = Duration::from_secs(120);
const C2_INSTANCES: usize = 500;
const C3_TIME: Duration = Duration::from_secs(60);
const C5_TRIALS: u64 = 200;
const C5_MIN_FRACTION: f64 = 0.90;
const C5_TIME: Duration = Duration::from_secs(600);
const C6_TRIALS: u64 = 200;
const C6_MIN_FRACTION: f64 = 0.90;
const C8_REL_TOL: f64 = 1e-10;
const C8_RESIDUAL: f64 = 1e-9;
const C9_TRIALS: u64 = 200;
const C9_MIN_FRACTION: f64 = 0.95;
const C9_EPS: f64 = 0.3;
const C10_MIN_HOSTS: usize = 100;
const C11_ORDERINGS: usize = 50;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Brute-force Berge Hamiltonicity: every cyclic order and every
/// assignment of distinct edges, with no shared code with the oracle.
fn brute_hamiltonian(h: &Hypergraph) -> bool {
    let n = h.n();
    if n < 3 {
        return false;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut found = false;
    permute(&mut rest, 0, &mut |perm| {
        let order: Vec<usize> = std::iter::once(0).chain(perm.iter().copied()).collect();
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
        found |= assign(h, &pairs, 0, &mut vec![false; h.edge_count()]);
        found
    });
    found
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permute(items, k + 1, visit) {
            items.swap(k, i);
            return true;
        }
        items.swap(k, i);
    }
    false
}

fn assign(h: &Hypergraph, pairs: &[(usize, usize)], i: usize, used: &mut [bool]) -> bool {
    let Some(&(a, b)) = pairs.get(i) else {
        return true;
    };
    for e in 0..h.edge_count() {
        if !used[e] && h.edge_contains(e, a) && h.edge_contains(e, b) {
            used[e] = true;
            if assign(h, pairs, i + 1, used) {
                used[e] = false;
                return true;
            }
            used[e] = false;
        }
    }
    false
}

fn random_subset_host(rng: &mut SplitMix64, n: usize) -> Hypergraph {
    let all = complete(n, 3).unwrap();
    let keep: Vec<usize> = (0..all.edge_count()).filter(|_| rng.below(2) == 1).collect();
    all.sub_hypergraph(&keep)
}

fn c1_oracle_self_consistency() -> Outcome {
    let start = Instant::now();
    let guard = OracleGuard::default();
    let mut rng = SplitMix64::new(1);
    let mut agree = 0;
    let mut total = 0;
    let mut yes = 0;
    for i in 0..C1_MIN_INSTANCES + 100 {
        let n = 3 + i % 4;
        let h = random_subset_host(&mut rng, n);
        let oracle = exact_hamiltonian(&h, &guard).unwrap();
        let spanning = exact_longest_path(&h, &guard).unwrap().len() == n;
        let closes = brute_hamiltonian(&h);
        let consistent = oracle.is_some() == (spanning && closes)
            && oracle.as_ref().is_none_or(|c| verify_cycle(&h, c, false) && c.is_hamiltonian_in(&h));
        agree += usize::from(consistent);
        yes += usize::from(oracle.is_some());
        total += 1;
    }
    let elapsed = start.elapsed();
    outcome(
        agree == total && total >= C1_MIN_INSTANCES && elapsed <= C1_TIME,
        format!("{agree}/{total} agree ({yes} Hamiltonian), {elapsed:.1?}"),
    )
}

fn c2_engine_soundness() -> Outcome {
    let guard = OracleGuard::default();
    let mut rng = SplitMix64::new(2);
    let (mut yes, mut exceptions) = (0, 0);
    for i in 0..C2_INSTANCES {
        let n = 3 + rng.below_usize(6);
        let p = [0.2, 0.4, 0.6][i % 3];
        let h = binomial(n, 3, p, rng.next_u64()).unwrap();
        let out = decide_hamiltonian(&h, 5_000, i as u64, false);
        if out.verdict == Verdict::Yes {
            yes += 1;
            let ok = out.certificate.as_ref().is_some_and(|c| verify_cycle(&h, c, false) && c.is_hamiltonian_in(&h))
                && exact_hamiltonian(&h, &guard).unwrap().is_some();
            exceptions += usize::from(!ok);
        }
        if out.verdict == Verdict::No && exact_hamiltonian(&h, &guard).unwrap().is_some() {
            exceptions += 1;
        }
    }
    outcome(exceptions == 0, format!("{C2_INSTANCES} instances, {yes} engine yes, {exceptions} exceptions"))
}

fn c3_complete_hosts() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 5..=40 {
        let h = complete(n, 3).unwrap();
        let out = decide_hamiltonian(&h, 20_000, n as u64, false);
        let ok = out.verdict == Verdict::Yes
            && out.provenance == Provenance::Rotation
            && out.certificate.as_ref().is_some_and(|c| c.is_hamiltonian_in(&h));
        if !ok {
            failures.push(n);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed <= C3_TIME,
        format!("n = 5..=40, failures {failures:?}, {elapsed:.1?}"),
    )
}

fn full_config() -> TrialConfig {
    TrialConfig {
        probe: ProbeConfig::default(),
        full_tau_bh: true,
    }
}

fn c4_necessity(extra: &[TrialRecord]) -> Outcome {
    let mut records = extra.to_vec();
    let hosts = [
        complete(10, 3).unwrap(),
        binomial(10, 3, 0.5, 4).unwrap(),
        two_cliques_matching(12, 3).unwrap(),
        two_cliques(10, 3).unwrap(),
    ];
    for (k, h) in hosts.iter().enumerate() {
        for i in 0..50 {
            records.push(run_trial(h, i, 100 + k as u64, &full_config()).unwrap());
        }
    }
    let mut compared = 0;
    let mut violations = 0;
    for r in &records {
        if let (Some(t2), TauBh::Step { t }) = (r.tau2, r.tau_bh) {
            compared += 1;
            violations += usize::from(t < t2);
        }
    }
    outcome(
        violations == 0,
        format!("{} trials, {compared} with both times, {violations} with tauBH < tau2", records.len()),
    )
}

fn coincidence(h: &Hypergraph, trials: u64, seed: u64) -> (f64, Vec<TrialRecord>, String) {
    let records = run_parallel(h, trials, seed, &TrialConfig::default(), 0, false).unwrap();
    let summary = summary_of(&records);
    let detail = format!(
        "{}/{} coincide, {} inconclusive, tau2 quantiles {:?}",
        summary.coincide, summary.trials, summary.inconclusive, summary.tau2_quantiles.unwrap_or_default()
    );
    (summary.coincidence_fraction, records.into_iter().map(|t| t.record).collect(), detail)
}

fn c5_complete_coincidence(records: &mut Vec<TrialRecord>) -> Outcome {
    let start = Instant::now();
    let (fraction, mut rs, detail) = coincidence(&complete(40, 3).unwrap(), C5_TRIALS, 5);
    records.append(&mut rs);
    let elapsed = start.elapsed();
    outcome(
        fraction >= C5_MIN_FRACTION && elapsed <= C5_TIME,
        format!("fraction {fraction:.3} >= {C5_MIN_FRACTION} required; {detail}; {elapsed:.1?}"),
    )
}

fn c6_degree_condition_coincidence(records: &mut Vec<TrialRecord>) -> Outcome {
    let (seed, h) = (0..)
        .find_map(|seed| {
            let h = degree_condition_random(40, 3, 0.1, seed).ok()?;
            h.check_theorem_condition(0.1).ok()?.holds().then_some((seed, h))
        })
        .unwrap();
    let (fraction, mut rs, detail) = coincidence(&h, C6_TRIALS, 6);
    records.append(&mut rs);
    outcome(
        fraction >= C6_MIN_FRACTION,
        format!(
            "degree_condition_random(40,3,0.1,{seed}) with {} edges: fraction {fraction:.3} >= {C6_MIN_FRACTION} required; {detail}",
            h.edge_count()
        ),
    )
}

fn c7_two_cliques() -> Outcome {
    let (mut runs, mut no_hit) = (0, 0);
    for n in [8, 10, 12] {
        let h = two_cliques(n, 3).unwrap();
        for seed in 0..20 {
            let proc = random_process(&h, seed).unwrap();
            let probe = |g: &Hypergraph, t: usize| hamiltonicity_probe(g, &ProbeConfig::default(), t as u64).0;
            runs += 1;
            if matches!(tau_property(&proc, probe, Strategy::Binary), Err(Error::NoHit(_))) {
                no_hit += 1;
            }
        }
    }
    outcome(no_hit == runs, format!("{no_hit}/{runs} orderings report no hit"))
}

fn c8_p0() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for n in [30, 60, 100] {
        let h = complete(n, 3).unwrap();
        let root = solve_p0(&h, C8_RESIDUAL).unwrap();
        let closed = regular_p0(n, h.degree(0).unwrap());
        let rel = (root.p0 - closed).abs() / closed;
        pass &= rel <= C8_REL_TOL && root.residual.abs() <= C8_RESIDUAL;
        parts.push(format!("n={n} rel {rel:.1e} residual {:.1e}", root.residual));
    }
    outcome(pass, parts.join("; "))
}

fn c9_bracket() -> Outcome {
    let h = complete(60, 3).unwrap();
    let basic = basic_thresholds(&h, C9_EPS).unwrap();
    let (lo, hi) = (basic.t1.m_rounded as usize, basic.t2.m_rounded as usize);
    let p0 = solve_p0(&h, 1e-9).unwrap().p0;
    let shifted = shifted_thresholds(&h, C9_EPS, 1.0, p0).unwrap();
    let (lo3, hi4) = (shifted.t3.m_rounded as usize, shifted.t4.m_rounded as usize);
    let (mut inside, mut inside34) = (0, 0);
    for seed in 0..C9_TRIALS {
        let tau2 = tau_min_degree(&random_process(&h, 9_000 + seed).unwrap(), 2).unwrap();
        inside += usize::from((lo..=hi).contains(&tau2));
        inside34 += usize::from((lo3..=hi4).contains(&tau2));
    }
    let fraction = inside as f64 / C9_TRIALS as f64;
    outcome(
        fraction >= C9_MIN_FRACTION,
        format!(
            "{inside}/{C9_TRIALS} tau2 in [{lo}, {hi}] (>= {C9_MIN_FRACTION} required); ungated [m3, m4] = [{lo3}, {hi4}] holds {inside34}/{C9_TRIALS}"
        ),
    )
}

fn c10_rotation_endpoints() -> Outcome {
    let guard = OracleGuard::default();
    let mut rng = SplitMix64::new(10);
    let (mut hosts, mut violations, mut draws) = (0, 0, 0);
    let mut per_k = [0usize; 2];
    while hosts < C10_MIN_HOSTS && draws < 20_000 {
        draws += 1;
        let (n, p) = match draws % 3 {
            0 => (5 + rng.below_usize(6), 0.15 + 0.5 * rng.next_f64()),
            1 => (9 + rng.below_usize(2), 0.5 + 0.4 * rng.next_f64()),
            _ => (10, 0.97 + 0.03 * rng.next_f64()),
        };
        let h = binomial(n, 3, p, rng.next_u64()).unwrap();
        if !h.is_connected() {
            continue;
        }
        let mut counted = false;
        for k in [2, 3] {
            let verdict = h.is_expander(k, Ratio::integer(2), ExpanderMode::Exhaustive { max_n: 10 }).unwrap();
            if verdict != ExpanderVerdict::Expander {
                continue;
            }
            counted = true;
            per_k[k - 2] += 1;
            let p = exact_longest_path(&h, &guard).unwrap();
            let closure = endpoint_closure(&h, &p, u64::MAX).unwrap();
            violations += usize::from(closure.len() < k);
        }
        hosts += usize::from(counted);
    }
    outcome(
        hosts >= C10_MIN_HOSTS && violations == 0,
        format!("{hosts} expander hosts, {} checks at k=2, {} at k=3, {violations} violations", per_k[0], per_k[1]),
    )
}

fn c11_binary_search() -> Outcome {
    let h = complete(7, 3).unwrap();
    let guard = OracleGuard::default();
    let probe = |g: &Hypergraph, _: usize| {
        if exact_hamiltonian(g, &guard).unwrap().is_some() {
            Verdict::Yes
        } else {
            Verdict::No
        }
    };
    let mut agree = 0;
    for seed in 0..C11_ORDERINGS as u64 {
        let proc = random_process(&h, seed).unwrap();
        let a = tau_property(&proc, probe, Strategy::Binary).unwrap();
        let b = tau_property(&proc, probe, Strategy::Linear).unwrap();
        if let (Hitting::Hit { t: x, .. }, Hitting::Hit { t: y, .. }) = (a, b) {
            agree += usize::from(x == y);
        }
    }
    outcome(agree == C11_ORDERINGS, format!("{agree}/{C11_ORDERINGS} orderings agree"))
}

fn c12_reproducibility() -> Outcome {
    let dir = std::env::temp_dir().join(format!("berge-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let host = dir.join("host.txt");
    let host = host.to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_berge");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    run(&["gen", "--family", "degree-condition", "--n", "20", "--eps", "0.1", "--seed", "3", "--out", host]);
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "binomial", "--n", "15", "--p", "0.3", "--seed", "11"],
        vec!["oracle", "--family", "binomial", "--n", "8", "--p", "0.4", "--seed", "2"],
        vec!["decide", "--host", host, "--seed", "4"],
        vec!["absorb", "--host", host, "--seed", "4", "--d0", "2"],
        vec!["thresholds", "--host", host, "--eps", "0.3"],
        vec!["props", "--host", host, "--mode", "sampled", "--trials", "100", "--seed", "8"],
        vec!["rotate-trace", "--host", host],
        vec!["tau", "--host", host, "--trials", "40", "--seed", "7", "--jobs", "1"],
    ];
    let mut identical = 0;
    for args in &commands {
        let (a, b) = (run(args), run(args));
        identical += usize::from(a.stdout == b.stdout && a.stderr == b.stderr && a.status.code() != Some(2));
    }
    let tau = |jobs: &str, out: &str| {
        let out = dir.join(out);
        run(&["tau", "--host", host, "--trials", "40", "--seed", "7", "--full-tau-bh", "--jobs", jobs, "--out", out.to_str().unwrap()]);
        (std::fs::read(out.join("trials.csv")).ok(), std::fs::read(out.join("summary.json")).ok())
    };
    let (one, many) = (tau("1", "j1"), tau("8", "j8"));
    let jobs_ok = one.0.is_some() && one == many;
    outcome(
        identical == commands.len() && jobs_ok,
        format!(
            "{identical}/{} invocations byte-identical on repeat; tau output identical for --jobs 1 and 8: {jobs_ok}",
            commands.len()
        ),
    )
}

fn main() {
    let mut records = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id, name, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        println!("[{}] {id:>2} {name}: {} [{took:.1?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    record(1, "oracle self-consistency", &mut c1_oracle_self_consistency);
    record(2, "engine soundness", &mut c2_engine_soundness);
    record(3, "engine on complete hosts", &mut c3_complete_hosts);
    record(5, "coincidence on complete(40,3)", &mut || c5_complete_coincidence(&mut records));
    record(6, "coincidence on a degree-condition host", &mut || c6_degree_condition_coincidence(&mut records));
    record(4, "deterministic necessity", &mut || c4_necessity(&records));
    record(7, "two-clique counterexamples", &mut c7_two_cliques);
    record(8, "p0 solver", &mut c8_p0);
    record(9, "tau2 threshold bracket", &mut c9_bracket);
    record(10, "rotation endpoints on expanders", &mut c10_rotation_endpoints);
    record(11, "binary search consistency", &mut c11_binary_search);
    record(12, "CLI reproducibility", &mut c12_reproducibility);
    let failed: Vec<u32> = results.iter().filter(|(_, _, o)| !o.pass).map(|(id, _, _)| *id).collect();
    println!("acceptance: {} passed, {} failed", results.len() - failed.len(), failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
