//! Energy-distribution protocols over shared multipartite states.
//!
//! Every classical branch of a protocol is enumerated exhaustively with its
//! probability; nothing in this module draws random numbers except the
//! explicit [`sample_branches`] demo helper and the seeded channel generator
//! used by the parity checks.

mod bell;
mod ghz;
mod parity;

use std::collections::BTreeMap;

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{partial_trace, shannon_entropy, DensityMatrix};
use crate::thermo::{extractable_work, ThermalContext, WorkReport};

pub use bell::{bell_protocol, bell_state, classical_pair_protocol};
pub use ghz::{ghz_state, ghz_unlock};
pub use parity::{
    even_parity_state, parity_no_information_check, parity_unlock, random_parity_channel,
    ParityCheckReport, ParityState,
};

/// A user and the subsystems it holds when work is extracted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Party {
    pub id: String,
    pub held_subsystems: Vec<usize>,
}

impl Party {
    pub fn new(id: impl Into<String>, held_subsystems: Vec<usize>) -> Self {
        Self {
            id: id.into(),
            held_subsystems,
        }
    }
}

/// Parties must hold disjoint subsystem sets that together cover `0..n`.
pub fn check_partition(parties: &[Party], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for p in parties {
        for &s in &p.held_subsystems {
            if s >= n {
                return Err(Error::argument(format!(
                    "party {} holds subsystem {s} of {n}",
                    p.id
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::argument(format!("subsystem {s} is held twice")));
            }
        }
    }
    if let Some(missing) = seen.iter().position(|&b| !b) {
        return Err(Error::argument(format!(
            "subsystem {missing} is held by nobody"
        )));
    }
    Ok(())
}

/// One entry of the reliable, ordered classical broadcast channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Broadcast {
    pub party: String,
    pub subsystem: usize,
    pub outcome: usize,
}

/// One classical history of a protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub probability: f64,
    pub broadcast_log: Vec<Broadcast>,
    pub per_party_work: BTreeMap<String, WorkReport>,
}

impl Branch {
    pub fn total_work(&self) -> f64 {
        self.per_party_work.values().map(|w| w.work).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolOutcome {
    pub protocol: String,
    /// Holdings at extraction time, interceptor included when present.
    pub parties: Vec<Party>,
    /// What each legitimate party could extract from its own share before any
    /// transmission or broadcast.
    pub baseline_work: BTreeMap<String, WorkReport>,
    pub branches: Vec<Branch>,
    /// Computed from the in-flight subsystem's reduced state alone.
    pub interceptor_work: WorkReport,
    /// Shannon entropy of the broadcast record, bits.
    pub broadcast_entropy_bits: f64,
}

impl ProtocolOutcome {
    pub(crate) fn assemble(
        protocol: &str,
        parties: Vec<Party>,
        baseline_work: BTreeMap<String, WorkReport>,
        branches: Vec<Branch>,
        interceptor_work: WorkReport,
    ) -> Self {
        let probs: Vec<f64> = branches.iter().map(|b| b.probability).collect();
        Self {
            protocol: protocol.to_owned(),
            parties,
            baseline_work,
            branches,
            interceptor_work,
            broadcast_entropy_bits: shannon_entropy(&probs),
        }
    }

    /// Probability-weighted work of one party over all branches.
    pub fn expected_work(&self, party: &str) -> f64 {
        self.branches
            .iter()
            .filter_map(|b| b.per_party_work.get(party).map(|w| b.probability * w.work))
            .sum()
    }

    /// Probability-weighted total work.
    pub fn expected_total_work(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.probability * b.total_work())
            .sum()
    }

    /// No party extracts more than one energy unit per held qubit.
    pub fn check_work_bounds(&self, ctx: &ThermalContext) -> Result<()> {
        let held: BTreeMap<&str, usize> = self
            .parties
            .iter()
            .map(|p| (p.id.as_str(), p.held_subsystems.len()))
            .collect();
        for branch in &self.branches {
            for (id, w) in &branch.per_party_work {
                let qubits = held.get(id.as_str()).copied().unwrap_or(0);
                if w.work > ctx.energy(qubits as f64) + 1e-12 * ctx.unit_factor() {
                    return Err(Error::argument(format!(
                        "party {id} extracts {} from {qubits} qubits",
                        w.work
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Draw `shots` branch indices according to the branch probabilities and
/// return the tally per branch.
pub fn sample_branches<R: Rng + ?Sized>(
    outcome: &ProtocolOutcome,
    shots: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let weights: Vec<f64> = outcome.branches.iter().map(|b| b.probability).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::argument(format!("cannot sample branches: {e}")))?;
    let mut counts = vec![0usize; weights.len()];
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    Ok(counts)
}

/// Work a party can extract from the marginal on `subsystems`.
pub(crate) fn marginal_work(
    rho: &DensityMatrix,
    subsystems: &[usize],
    ctx: &ThermalContext,
) -> Result<WorkReport> {
    extractable_work(&partial_trace(rho, subsystems)?, ctx)
}

/// `A1`, `A2`, ... labels for qubit holders.
pub(crate) fn label(index: usize) -> String {
    format!("A{}", index + 1)
}
