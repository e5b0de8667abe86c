//! Parallel Monte Carlo trials with job-count independent output.

use std::io::Write;
use std::time::Instant;

use anyhow::Context;
use berge_core::process::{run_trial, summarize, Summary, TauBh, TrialConfig, TrialRecord};
use berge_core::Hypergraph;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedRecord {
    pub record: TrialRecord,
    pub millis: Option<u64>,
}

/// Runs trials `0..trials` on a pool of `jobs` threads (0 = all cores).
/// Records come back in trial order whatever the scheduling.
pub fn run_parallel(
    host: &Hypergraph,
    trials: u64,
    seed_base: u64,
    config: &TrialConfig,
    jobs: usize,
    timing: bool,
) -> anyhow::Result<Vec<TimedRecord>> {
    anyhow::ensure!(trials >= 1, "at least one trial is required");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("cannot build the worker pool")?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let start = Instant::now();
                let record = run_trial(host, i, seed_base, config)?;
                let millis = timing.then(|| start.elapsed().as_millis() as u64);
                Ok(TimedRecord { record, millis })
            })
            .collect::<berge_core::Result<Vec<_>>>()
            .map_err(anyhow::Error::from)
    })
}

fn tau_bh_cell(t: &TauBh) -> String {
    match *t {
        TauBh::Step { t } => t.to_string(),
        TauBh::NoHit => "none".into(),
        TauBh::Inconclusive { lo, hi } => format!("inconclusive:{lo}-{hi}"),
        TauBh::NotComputed => String::new(),
    }
}

/// Columns `trial,seed,tau2,tauBH,coincide,provenance,millis`.
pub fn write_csv<W: Write>(out: W, records: &[TimedRecord]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "seed", "tau2", "tauBH", "coincide", "provenance", "millis"])?;
    for TimedRecord { record: r, millis } in records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.tau2.map(|t| t.to_string()).unwrap_or_default(),
            tau_bh_cell(&r.tau_bh),
            match r.coincide {
                Some(true) => "true".into(),
                Some(false) => "false".into(),
                None => "unknown".into(),
            },
            r.provenance.map(|p| p.as_str().to_string()).unwrap_or_default(),
            millis.map(|m| m.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Summary document written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryDoc<'a> {
    pub seed_base: u64,
    pub trial_seed_rule: &'static str,
    pub host: HostInfo,
    pub config: &'a TrialConfig,
    pub summary: Summary,
    pub log_base: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HostInfo {
    pub n: usize,
    pub r: usize,
    pub edges: usize,
}

impl HostInfo {
    pub fn of(h: &Hypergraph) -> Self {
        Self {
            n: h.n(),
            r: h.r(),
            edges: h.edge_count(),
        }
    }
}

pub fn summary_of(records: &[TimedRecord]) -> Summary {
    let plain: Vec<TrialRecord> = records.iter().map(|t| t.record.clone()).collect();
    summarize(&plain)
}
