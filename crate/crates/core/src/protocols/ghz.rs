use std::collections::BTreeMap;

use super::{label, marginal_work, Branch, Broadcast, Party, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::qcore::{check_capacity, measure_computational, CVector, PureState, C64};
use crate::thermo::{extractable_work, ThermalContext};

/// `(|0...0> + |1...1>)/√2` on `n >= 2` qubits.
pub fn ghz_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::argument(format!("GHZ state needs n >= 2, got {n}")));
    }
    let d = 1usize.checked_shl(n as u32).ok_or(Error::Capacity {
        requested: usize::MAX,
        limit: crate::qcore::max_dimension(),
    })?;
    check_capacity(d)?;
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = CVector::zeros(d);
    v[0] = amp;
    v[d - 1] = amp;
    PureState::new(v, vec![2; n])
}

/// Party `initiator` measures its GHZ qubit and broadcasts the outcome; every
/// other party then holds a known pure qubit.
///
/// Both outcomes are returned as branches. The initiator's measured qubit is
/// not counted: its value sits in the broadcast record, whose reset costs what
/// the qubit could yield.
pub fn ghz_unlock(n: usize, initiator: usize, ctx: &ThermalContext) -> Result<ProtocolOutcome> {
    let rho = ghz_state(n)?.to_density();
    if initiator >= n {
        return Err(Error::argument(format!(
            "initiator {initiator} out of range for {n} parties"
        )));
    }
    let parties: Vec<Party> = (0..n).map(|i| Party::new(label(i), vec![i])).collect();
    let baseline = (0..n)
        .map(|i| Ok((label(i), marginal_work(&rho, &[i], ctx)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;

    let mut branches = Vec::new();
    for record in measure_computational(&rho, initiator)? {
        let Some(post) = record.post_state else {
            continue;
        };
        let mut per_party_work = BTreeMap::new();
        for party in (0..n).filter(|&p| p != initiator) {
            // measured qubit removed: later qubits shift down by one
            let index = if party < initiator { party } else { party - 1 };
            let marginal = crate::qcore::partial_trace(&post, &[index])?;
            per_party_work.insert(label(party), extractable_work(&marginal, ctx)?);
        }
        branches.push(Branch {
            probability: record.probability,
            broadcast_log: vec![Broadcast {
                party: label(initiator),
                subsystem: initiator,
                outcome: record.outcome,
            }],
            per_party_work,
        });
    }

    let in_flight = (initiator + 1) % n;
    let interceptor_work = marginal_work(&rho, &[in_flight], ctx)?;
    Ok(ProtocolOutcome::assemble(
        "ghz",
        parties,
        baseline,
        branches,
        interceptor_work,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{partial_trace, DensityMatrix};

    #[test]
    fn two_qubit_ghz_is_bell() {
        let rho = ghz_state(2).unwrap().to_density();
        let half = DensityMatrix::maximally_mixed(&[2]).unwrap();
        for k in 0..2 {
            assert!(
                partial_trace(&rho, &[k])
                    .unwrap()
                    .max_deviation(half.matrix())
                    < 1e-15
            );
        }
    }

    #[test]
    fn three_qubit_pair_marginals_carry_one_bit() {
        // hand-computed: Tr_k |GHZ3><GHZ3| = (|00><00| + |11><11|)/2
        let rho = ghz_state(3).unwrap().to_density();
        let expected = DensityMatrix::diagonal(&[2, 2], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        for keep in [[0, 1], [0, 2], [1, 2]] {
            let pair = partial_trace(&rho, &keep).unwrap();
            assert!(pair.max_deviation(expected.matrix()) < 1e-15);
            assert!((pair.entropy().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_small_n_and_capacity() {
        assert!(matches!(ghz_state(1), Err(Error::Argument(_))));
        assert!(matches!(ghz_state(40), Err(Error::Capacity { .. })));
    }

    #[test]
    fn unlock_three_parties() {
        let ctx = ThermalContext::natural();
        let out = ghz_unlock(3, 0, &ctx).unwrap();
        assert_eq!(out.branches.len(), 2);
        for b in &out.branches {
            assert!((b.probability - 0.5).abs() < 1e-15);
            assert_eq!(b.per_party_work.len(), 2);
            for w in b.per_party_work.values() {
                assert_eq!(w.work, 1.0);
            }
        }
        for w in out.baseline_work.values() {
            assert!(w.work.abs() < 1e-12);
        }
        assert!((out.broadcast_entropy_bits - 1.0).abs() < 1e-15);
        out.check_work_bounds(&ctx).unwrap();
    }

    #[test]
    fn unlock_two_parties_is_bell_reduction() {
        let ctx = ThermalContext::natural();
        let out = ghz_unlock(2, 1, &ctx).unwrap();
        for b in &out.branches {
            assert_eq!(b.per_party_work["A1"].work, 1.0);
        }
    }

    #[test]
    fn bad_initiator() {
        assert!(ghz_unlock(3, 3, &ThermalContext::natural()).is_err());
    }
}
