//! Berge paths and cycles, Pósa rotations and the constructive search.
//!
//! A Berge path alternates distinct vertices and distinct edges, each edge
//! containing its two neighbouring vertices. Rotations keep the first
//! vertex fixed and change the last one; together with greedy extension
//! and cycle re-opening they drive [`decide_hamiltonian`]. The absorption
//! loop in [`absorb`] works inside a sparse spanning subgraph and grows it
//! by booster edges.

pub mod absorb;
mod path;
mod rotation;
mod search;

pub use absorb::{
    absorption_run, connect_components, default_d0, extract_expander, AbsorbConfig, AbsorptionRun,
    BoosterStep, ComponentSplit,
};
pub use path::{verify_cycle, verify_path, BergeCycle, BergePath};
pub use rotation::{endpoint_closure, rotate, rotate_at, rotation_moves, RotationClosure};
pub use search::{decide_hamiltonian, decide_with, extend_or_close, DecideConfig, ExtendOutcome};

/// Answer of a Hamiltonicity decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Which method produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Provenance {
    /// Rotation-extension search found a certificate (or gave up).
    Rotation,
    /// Exact exhaustive search.
    Oracle,
    /// Exact necessary condition failed: fewer than 3 vertices, a vertex of
    /// degree below 2, or a disconnected host.
    Structural,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Rotation => "rotation",
            Provenance::Oracle => "oracle",
            Provenance::Structural => "structural",
        }
    }
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Effort {
    pub rotations: u64,
    pub extensions: u64,
    pub reopenings: u64,
    pub restarts: u64,
    pub oracle_calls: u64,
}

impl Effort {
    pub fn add(&mut self, other: &Effort) {
        self.rotations += other.rotations;
        self.extensions += other.extensions;
        self.reopenings += other.reopenings;
        self.restarts += other.restarts;
        self.oracle_calls += other.oracle_calls;
    }
}

/// Verdict plus certificate. `Yes` always carries a verified Hamilton
/// cycle; `No` only comes from an exact method.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecisionOutcome {
    pub verdict: Verdict,
    pub certificate: Option<BergeCycle>,
    pub provenance: Provenance,
    pub effort: Effort,
}

impl DecisionOutcome {
    pub(crate) fn structural_no(effort: Effort) -> Self {
        Self {
            verdict: Verdict::No,
            certificate: None,
            provenance: Provenance::Structural,
            effort,
        }
    }
}

/// Exact necessary conditions for a Berge Hamilton cycle.
pub(crate) fn structurally_excluded(h: &crate::Hypergraph) -> bool {
    h.n() < 3 || h.min_degree() < 2 || !h.is_connected()
}
