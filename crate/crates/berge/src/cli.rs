//! The `berge` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use berge_core::engine::{
    absorption_run, decide_with, default_d0, endpoint_closure, extend_or_close, AbsorbConfig, DecideConfig,
    ExtendOutcome,
};
use berge_core::generators::{Family, GenSpec};
use berge_core::oracle::{exact_hamiltonian, exact_longest_path, OracleGuard};
use berge_core::process::{ProbeConfig, TrialConfig};
use berge_core::properties::{property_report, PropertyConfig, PropertyMode};
use berge_core::thresholds::threshold_report;
use berge_core::{BergePath, Hypergraph, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::format::{json_lines, read_host, serialize_host, Certificate};
use crate::harness::{run_parallel, summary_of, write_csv, HostInfo, SummaryDoc};

#[derive(Debug, Parser)]
#[command(name = "berge", version, about = "Berge Hamiltonicity experiments on random hypergraph processes")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Complete,
    TwoCliques,
    TwoCliquesMatching,
    Binomial,
    DegreeCondition,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Complete => Family::Complete,
            FamilyArg::TwoCliques => Family::TwoCliques,
            FamilyArg::TwoCliquesMatching => Family::TwoCliquesMatching,
            FamilyArg::Binomial => Family::Binomial,
            FamilyArg::DegreeCondition => Family::DegreeConditionRandom,
        }
    }
}

/// Where the host comes from: a file, or a generator.
#[derive(Debug, Clone, Args)]
struct HostArgs {
    /// Host file ("n r m" header, then one edge per line).
    #[arg(long, conflicts_with = "family")]
    host: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Edge probability of the binomial family.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Epsilon of the degree-condition family and of threshold and property checks.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generator seed; defaults to --seed.
    #[arg(long)]
    gen_seed: Option<u64>,
}

impl HostArgs {
    fn spec(&self) -> anyhow::Result<Option<GenSpec>> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let Some(n) = self.n else {
            bail!("--family needs --n");
        };
        Ok(Some(GenSpec {
            family: family.into(),
            n,
            r: self.r,
            p: self.p,
            eps: self.eps,
            seed: self.gen_seed.unwrap_or(self.seed),
        }))
    }

    fn load(&self) -> anyhow::Result<Hypergraph> {
        match (&self.host, self.spec()?) {
            (Some(path), _) => read_host(path),
            (None, Some(spec)) => spec.generate().context("cannot generate host"),
            (None, None) => bail!("give either --host FILE or --family with --n"),
        }
    }

    /// Seeds and generator settings echoed into every output.
    fn header(&self) -> serde_json::Value {
        let generated = self.spec().ok().flatten();
        json!({
            "seed": self.seed,
            "host_file": self.host.as_ref().map(|p| p.display().to_string()),
            "generator": generated.map(|g| json!({
                "family": g.family, "n": g.n, "r": g.r, "p": g.p, "eps": g.eps, "seed": g.seed,
            })),
        })
    }
}

#[derive(Debug, Clone, Args)]
struct GuardArgs {
    /// Largest n the exact oracle accepts.
    #[arg(long, default_value_t = OracleGuard::default().max_n)]
    max_n: usize,
    #[arg(long, default_value_t = OracleGuard::default().max_edges)]
    max_edges: usize,
}

impl GuardArgs {
    fn guard(&self) -> OracleGuard {
        OracleGuard {
            max_n: self.max_n,
            max_edges: self.max_edges,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated host file.
    Gen {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Berge Hamiltonicity (exit 1 when not Hamiltonian).
    Oracle {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        guard: GuardArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotation-extension decision (exit 1 on a "no" verdict).
    Decide {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
        /// Ask the exact oracle when the search gives up.
        #[arg(long)]
        fallback: bool,
        #[command(flatten)]
        guard: GuardArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expander extraction and booster absorption, as JSON lines.
    Absorb {
        #[command(flatten)]
        host: HostArgs,
        /// Per-vertex edge quota; defaults to max(2, ceil(eps^8 ln n)).
        #[arg(long)]
        d0: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        fallback: bool,
        #[command(flatten)]
        guard: GuardArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo hitting times: trials.csv and summary.json.
    Tau {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Rotation budget of one probe before escalation.
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Locate tauBH by binary search when it differs from tau2.
        #[arg(long)]
        full_tau_bh: bool,
        /// Never consult the exact oracle.
        #[arg(long)]
        no_fallback: bool,
        /// Fill the millis column (makes output time dependent).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        guard: GuardArgs,
        /// Output directory; without it the CSV goes to stdout and the summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold probabilities, step counts and the three exponential inequalities.
    Thresholds {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 1.0)]
        c_gamma: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property checks P1 to P7.
    Props {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1_000)]
        trials: u64,
        /// Largest n for exact subset enumeration.
        #[arg(long, default_value_t = 12)]
        guard: usize,
        /// Degree bound of SMALL; defaults to eps^8 ln n.
        #[arg(long)]
        d0: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotation closure from a long path, as JSON lines.
    RotateTrace {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[command(flatten)]
        guard: GuardArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::No {
        1
    } else {
        0
    }
}

/// Greedy extension from the vertex of largest degree.
fn greedy_path(h: &Hypergraph) -> anyhow::Result<BergePath> {
    let start = (0..h.n())
        .max_by_key(|&v| (h.incident(v).len(), usize::MAX - v))
        .context("host has no vertices")?;
    let mut p = BergePath::single(start);
    while let ExtendOutcome::Extended(q) = extend_or_close(h, &p)? {
        p = q;
    }
    Ok(p)
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Gen { host, out } => {
            let Some(spec) = host.spec()? else {
                bail!("gen needs --family and --n");
            };
            let h = spec.generate()?;
            let header = format!(
                "# family={} n={} r={} p={} eps={} seed={}\n",
                serde_json::to_value(spec.family)?.as_str().unwrap_or_default(),
                spec.n,
                spec.r,
                spec.p,
                spec.eps,
                spec.seed
            );
            emit(out.as_deref(), &(header + &serialize_host(&h)))?;
            Ok(0)
        }
        Command::Oracle { host, guard, out } => {
            let h = host.load()?;
            let guard = guard.guard();
            let cycle = exact_hamiltonian(&h, &guard)?;
            let verdict = if cycle.is_some() { Verdict::Yes } else { Verdict::No };
            let longest = match &cycle {
                Some(_) => None,
                None if h.n() > 0 => Some(Certificate::from(&exact_longest_path(&h, &guard)?)),
                None => None,
            };
            let doc = json!({
                "header": host.header(),
                "host": HostInfo::of(&h),
                "verdict": verdict,
                "certificate": cycle.as_ref().map(Certificate::from),
                "longest_path": longest,
            });
            emit(out.as_deref(), &pretty(&doc)?)?;
            Ok(verdict_code(verdict))
        }
        Command::Decide {
            host,
            budget,
            fallback,
            guard,
            out,
        } => {
            let h = host.load()?;
            let cfg = DecideConfig {
                budget,
                seed: host.seed,
                fallback,
                guard: guard.guard(),
            };
            let outcome = decide_with(&h, &cfg);
            let doc = json!({
                "header": host.header(),
                "host": HostInfo::of(&h),
                "budget": budget,
                "verdict": outcome.verdict,
                "provenance": outcome.provenance,
                "certificate": outcome.certificate.as_ref().map(Certificate::from),
                "effort": outcome.effort,
            });
            emit(out.as_deref(), &pretty(&doc)?)?;
            Ok(verdict_code(outcome.verdict))
        }
        Command::Absorb {
            host,
            d0,
            budget,
            fallback,
            guard,
            out,
        } => {
            let h = host.load()?;
            let d0 = d0.unwrap_or_else(|| default_d0(host.eps, h.n()));
            let cfg = AbsorbConfig {
                d0,
                budget,
                seed: host.seed,
                fallback,
                guard: guard.guard(),
            };
            let run = absorption_run(&h, &cfg);
            let mut lines = vec![json!({
                "header": host.header(),
                "host": HostInfo::of(&h),
                "d0": d0,
                "budget": budget,
                "extracted_edges": run.extracted_edges,
                "connected_edges": run.connected_edges,
            })];
            lines.extend(run.trace.iter().map(|s| json!({ "booster": s })));
            lines.push(json!({
                "verdict": run.outcome.verdict,
                "provenance": run.outcome.provenance,
                "certificate": run.outcome.certificate.as_ref().map(Certificate::from),
                "effort": run.outcome.effort,
            }));
            emit(out.as_deref(), &json_lines(lines)?)?;
            Ok(0)
        }
        Command::Tau {
            host,
            trials,
            budget,
            jobs,
            full_tau_bh,
            no_fallback,
            timing,
            guard,
            out,
        } => {
            let h = host.load()?;
            let config = TrialConfig {
                probe: ProbeConfig {
                    budget,
                    fallback_oracle: !no_fallback,
                    guard: guard.guard(),
                    ..ProbeConfig::default()
                },
                full_tau_bh,
            };
            let records = run_parallel(&h, trials, host.seed, &config, jobs, timing)?;
            let summary = json!({
                "header": host.header(),
                "run": SummaryDoc {
                    seed_base: host.seed,
                    trial_seed_rule: "seed_base xor trial",
                    host: HostInfo::of(&h),
                    config: &config,
                    summary: summary_of(&records),
                    log_base: "e",
                },
            });
            let mut csv = Vec::new();
            write_csv(&mut csv, &records)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
                    fs::write(dir.join("trials.csv"), &csv)?;
                    fs::write(dir.join("summary.json"), pretty(&summary)?)?;
                }
                None => {
                    std::io::stdout().lock().write_all(&csv)?;
                    eprint!("{}", pretty(&summary)?);
                }
            }
            Ok(0)
        }
        Command::Thresholds {
            host,
            c_gamma,
            tol,
            out,
        } => {
            let h = host.load()?;
            let report = threshold_report(&h, host.eps, c_gamma, tol)?;
            let doc = json!({ "header": host.header(), "log_base": "e", "report": report });
            emit(out.as_deref(), &pretty(&doc)?)?;
            Ok(0)
        }
        Command::Props {
            host,
            mode,
            trials,
            guard,
            d0,
            out,
        } => {
            let h = host.load()?;
            let mut config = PropertyConfig::new(host.eps, h.n());
            if let Some(d0) = d0 {
                config.d0 = d0;
            }
            config.mode = match mode {
                ModeArg::Exact => PropertyMode::Exact { guard },
                ModeArg::Sampled => PropertyMode::Sampled {
                    trials,
                    seed: host.seed,
                },
            };
            let results = property_report(&h, &config)?;
            let doc = json!({
                "header": host.header(),
                "log_base": "e",
                "eps": config.eps,
                "d0": config.d0,
                "mode": match mode { ModeArg::Exact => "exact", ModeArg::Sampled => "sampled" },
                "results": results,
            });
            emit(out.as_deref(), &pretty(&doc)?)?;
            Ok(0)
        }
        Command::RotateTrace {
            host,
            budget,
            guard,
            out,
        } => {
            let h = host.load()?;
            let guard = guard.guard();
            let (start, source) = if guard.admits(&h) && h.n() > 0 {
                (exact_longest_path(&h, &guard)?, "oracle")
            } else {
                (greedy_path(&h)?, "greedy")
            };
            let closure = endpoint_closure(&h, &start, budget)?;
            let mut lines = vec![json!({
                "header": host.header(),
                "host": HostInfo::of(&h),
                "start": Certificate::from(&start),
                "start_source": source,
            })];
            lines.extend(
                closure
                    .paths
                    .iter()
                    .map(|(end, p)| json!({ "endpoint": end, "path": Certificate::from(p) })),
            );
            lines.push(json!({
                "fixed": closure.fixed,
                "endpoints": closure.len(),
                "rotations": closure.rotations,
                "exhausted": closure.exhausted,
            }));
            emit(out.as_deref(), &json_lines(lines)?)?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs the command. Exit codes: 0 success, 1 a "no"
/// verdict from `decide` or `oracle`, 2 usage and runtime errors.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
