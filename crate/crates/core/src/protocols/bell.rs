use std::collections::BTreeMap;

use super::{marginal_work, Branch, Party, ProtocolOutcome};
use crate::error::Result;
use crate::qcore::{DensityMatrix, PureState};
use crate::thermo::{extractable_work, ThermalContext, WorkReport};

/// `(|00> + |11>)/√2`.
pub fn bell_state() -> PureState {
    super::ghz_state(2).expect("two qubits always fit")
}

/// A and B share a Bell pair; A sends its half to B through a channel that an
/// eavesdropper may intercept.
///
/// Undisturbed, B reassembles the pure pair and extracts two bits of work. The
/// in-flight qubit alone is maximally mixed and worth nothing.
pub fn bell_protocol(ctx: &ThermalContext, intercepted: bool) -> Result<ProtocolOutcome> {
    let pair = bell_state().to_density();
    distribute_pair("bell", &pair, ctx, intercepted)
}

/// Same transmission with a perfectly correlated classical random bit pair.
pub fn classical_pair_protocol(ctx: &ThermalContext) -> Result<ProtocolOutcome> {
    let pair = super::even_parity_state(2)?.rho;
    distribute_pair("classical", &pair, ctx, false)
}

fn distribute_pair(
    protocol: &str,
    pair: &DensityMatrix,
    ctx: &ThermalContext,
    intercepted: bool,
) -> Result<ProtocolOutcome> {
    // subsystem 0 is A's half (in flight), subsystem 1 stays with B
    let mut baseline = BTreeMap::new();
    baseline.insert("A".to_owned(), marginal_work(pair, &[0], ctx)?);
    baseline.insert("B".to_owned(), marginal_work(pair, &[1], ctx)?);

    let interceptor_work = marginal_work(pair, &[0], ctx)?;
    let mut per_party_work = BTreeMap::new();
    per_party_work.insert("A".to_owned(), WorkReport::zero(ctx));
    let parties = if intercepted {
        per_party_work.insert("B".to_owned(), marginal_work(pair, &[1], ctx)?);
        vec![
            Party::new("A", vec![]),
            Party::new("B", vec![1]),
            Party::new("E", vec![0]),
        ]
    } else {
        per_party_work.insert("B".to_owned(), extractable_work(pair, ctx)?);
        vec![Party::new("A", vec![]), Party::new("B", vec![0, 1])]
    };
    let branch = Branch {
        probability: 1.0,
        broadcast_log: Vec::new(),
        per_party_work,
    };
    Ok(ProtocolOutcome::assemble(
        protocol,
        parties,
        baseline,
        vec![branch],
        interceptor_work,
    ))
}
