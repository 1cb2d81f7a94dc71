use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{label, marginal_work, Branch, Broadcast, Party, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::qcore::channel::apply_unnormalized;
use crate::qcore::linalg::identity;
use crate::qcore::ops::reduce;
use crate::qcore::{apply_channel, check_capacity, CMatrix, DensityMatrix, QuantumChannel, C64};
use crate::thermo::ThermalContext;

/// Uniform mixture of all even-parity computational basis strings of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityState {
    pub n: usize,
    pub rho: DensityMatrix,
}

impl ParityState {
    /// Largest violation of the structural invariants: odd-parity diagonal
    /// entries zero, even-parity ones `2^(1-n)`, no off-diagonal weight.
    pub fn structure_defect(&self) -> f64 {
        let weight = 2f64.powi(1 - self.n as i32);
        let m = self.rho.matrix();
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let expected = if i == j && i.count_ones() % 2 == 0 {
                    weight
                } else {
                    0.0
                };
                worst = worst.max((m[(i, j)] - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }
}

fn qubit_dimension(n: usize) -> Result<usize> {
    let d = 1usize.checked_shl(n as u32).ok_or(Error::Capacity {
        requested: usize::MAX,
        limit: crate::qcore::max_dimension(),
    })?;
    check_capacity(d)?;
    Ok(d)
}

pub fn even_parity_state(n: usize) -> Result<ParityState> {
    if n < 2 {
        return Err(Error::argument(format!(
            "parity state needs n >= 2, got {n}"
        )));
    }
    let d = qubit_dimension(n)?;
    let weight = 2f64.powi(1 - n as i32);
    let probs: Vec<f64> = (0..d)
        .map(|i: usize| if i.count_ones() % 2 == 0 { weight } else { 0.0 })
        .collect();
    Ok(ParityState {
        n,
        rho: DensityMatrix::diagonal(&vec![2; n], &probs)?,
    })
}

/// Trace-preserving Haar-isometry channel with `kraus_count` operators on
/// qubits `2..n`.
pub fn random_parity_channel<R: Rng + ?Sized>(
    n: usize,
    kraus_count: usize,
    rng: &mut R,
) -> Result<QuantumChannel> {
    if n < 3 {
        return Err(Error::argument("the parity theorem needs n >= 3"));
    }
    QuantumChannel::random(1 << (n - 2), kraus_count, 2..n, rng)
}

/// Result of applying an operation on qubits `2..n` of the even-parity state
/// and inspecting qubits 0 and 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityCheckReport {
    pub n: usize,
    /// Kraus column weight over even-parity inputs of the operated register.
    pub c_even: f64,
    /// Same over odd-parity inputs.
    pub c_odd: f64,
    /// Trace of the unnormalized post-operation state.
    pub normalization: f64,
    pub trace_preserving: bool,
    /// `max |ρ'_1 / Tr ρ'_1 - I/2|`.
    pub rho1_deviation: f64,
    /// `max |ρ'_1 - 2^(1-n) (C_E + C_O) I|`, unnormalized.
    pub rho1_formula_deviation: f64,
    /// `max |ρ'_12 - 2^(1-n) (C_E (σ00 + σ11) + C_O (σ01 + σ10))|`, unnormalized.
    pub rho12_formula_deviation: f64,
}

impl ParityCheckReport {
    pub fn max_deviation(&self) -> f64 {
        self.rho1_deviation
            .max(self.rho1_formula_deviation)
            .max(self.rho12_formula_deviation)
    }
}

/// Apply `ch` to the even-parity state and compare the first qubit's reduced
/// state with the maximally mixed state, both directly and through the
/// column-weight sums `C_E`, `C_O`.
///
/// The channel must act only on qubits `2..n` (0-based).
pub fn parity_no_information_check(n: usize, ch: &QuantumChannel) -> Result<ParityCheckReport> {
    if n < 3 {
        return Err(Error::argument("the parity theorem needs n >= 3"));
    }
    let target = ch.target();
    if target.start < 2 || target.end > n {
        return Err(Error::argument(format!(
            "channel target {target:?} must lie within qubits 2..{n}"
        )));
    }
    let state = even_parity_state(n)?;
    let dims = state.rho.dims().to_vec();
    let (rho_prime, normalization) = apply_unnormalized(&state.rho, ch)?;

    // Kraus operators on the whole operated register 2..n
    let left = identity(1 << (target.start - 2));
    let right = identity(1 << (n - target.end));
    let register: Vec<CMatrix> = ch
        .kraus()
        .iter()
        .map(|k| left.kronecker(k).kronecker(&right))
        .collect();
    let (mut c_even, mut c_odd) = (0.0, 0.0);
    for k in &register {
        for (i, column) in k.column_iter().enumerate() {
            let weight = column.norm_squared();
            if i.count_ones() % 2 == 0 {
                c_even += weight;
            } else {
                c_odd += weight;
            }
        }
    }

    let scale = 2f64.powi(1 - n as i32);
    let (rho12, _) = reduce(&rho_prime, &dims, &[0, 1])?;
    let (rho1, _) = reduce(&rho_prime, &dims, &[0])?;

    let mut predicted12 = CMatrix::zeros(4, 4);
    for (idx, c) in [(0, c_even), (1, c_odd), (2, c_odd), (3, c_even)] {
        predicted12[(idx, idx)] = C64::new(scale * c, 0.0);
    }
    let predicted1 = identity(2).scale(scale * (c_even + c_odd));

    let tr1 = rho1.trace().re;
    if tr1 < crate::tolerance::NULL_TRACE {
        return Err(Error::NullOutcome { norm: tr1 });
    }
    let half = identity(2).scale(0.5);
    Ok(ParityCheckReport {
        n,
        c_even,
        c_odd,
        normalization,
        trace_preserving: ch.is_trace_preserving(),
        rho1_deviation: crate::qcore::linalg::max_abs_diff(&rho1.unscale(tr1), &half),
        rho1_formula_deviation: crate::qcore::linalg::max_abs_diff(&rho1, &predicted1),
        rho12_formula_deviation: crate::qcore::linalg::max_abs_diff(&rho12, &predicted12),
    })
}

/// Parties holding qubits in `revealed` measure them and broadcast the
/// outcomes; each remaining party then works with its conditioned qubit.
///
/// With `n - 1` revelations the last qubit is fixed by parity and yields one
/// bit. With fewer, every unrevealed qubit stays maximally mixed. Revealing
/// all `n` qubits unlocks nothing but checks the record against the parity
/// constraint.
pub fn parity_unlock(
    n: usize,
    revealed: &[(usize, usize)],
    ctx: &ThermalContext,
) -> Result<ProtocolOutcome> {
    let state = even_parity_state(n)?;
    let mut seen = vec![false; n];
    for &(q, b) in revealed {
        if q >= n {
            return Err(Error::argument(format!(
                "qubit {q} out of range for {n} qubits"
            )));
        }
        if b > 1 {
            return Err(Error::argument(format!(
                "outcome {b} on qubit {q} is not a bit"
            )));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::argument(format!("qubit {q} revealed twice")));
        }
    }

    let parties: Vec<Party> = (0..n).map(|i| Party::new(label(i), vec![i])).collect();
    let baseline = (0..n)
        .map(|i| Ok((label(i), marginal_work(&state.rho, &[i], ctx)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;

    let mut rho = state.rho.clone();
    let mut probability = 1.0;
    let mut broadcast_log = Vec::with_capacity(revealed.len());
    for &(q, b) in revealed {
        let projector = QuantumChannel::projector(2, q, b)?;
        let (next, p) = apply_channel(&rho, &projector).map_err(|e| match e {
            Error::NullOutcome { .. } => Error::ImpossibleEvidence(format!(
                "outcome {b} on qubit {q} has probability zero given the earlier revelations"
            )),
            other => other,
        })?;
        rho = next;
        probability *= p;
        broadcast_log.push(Broadcast {
            party: label(q),
            subsystem: q,
            outcome: b,
        });
    }

    let mut per_party_work = BTreeMap::new();
    for q in (0..n).filter(|&q| !seen[q]) {
        per_party_work.insert(label(q), marginal_work(&rho, &[q], ctx)?);
    }
    let interceptor_work = marginal_work(&state.rho, &[n - 1], ctx)?;
    let branch = Branch {
        probability,
        broadcast_log,
        per_party_work,
    };
    Ok(ProtocolOutcome::assemble(
        "parity",
        parties,
        baseline,
        vec![branch],
        interceptor_work,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{measure_computational, partial_trace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_qubit_parity_state_is_classical_pair() {
        let s = even_parity_state(2).unwrap();
        let expected = DensityMatrix::diagonal(&[2, 2], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(s.rho.max_deviation(expected.matrix()) < 1e-15);
    }

    #[test]
    fn three_qubit_support() {
        let s = even_parity_state(3).unwrap();
        let m = s.rho.matrix();
        // 000, 011, 101, 110
        for i in 0..8 {
            let expected = if [0, 3, 5, 6].contains(&i) { 0.25 } else { 0.0 };
            assert_eq!(m[(i, i)].re, expected);
        }
        assert_eq!(s.structure_defect(), 0.0);
    }

    #[test]
    fn single_qubit_marginals_are_maximally_mixed() {
        let half = DensityMatrix::maximally_mixed(&[2]).unwrap();
        for n in 2..=5 {
            let s = even_parity_state(n).unwrap();
            for q in 0..n {
                assert!(
                    partial_trace(&s.rho, &[q])
                        .unwrap()
                        .max_deviation(half.matrix())
                        < 1e-15
                );
            }
        }
    }

    #[test]
    fn last_qubit_is_fixed_once_others_are_measured() {
        // condition on qubit 0 = 1 and qubit 1 = 0, then measure qubit 2
        let s = even_parity_state(3).unwrap();
        let first = measure_computational(&s.rho, 0).unwrap();
        let after_first = first[1].post_state.clone().unwrap();
        let second = measure_computational(&after_first, 0).unwrap();
        let after_second = second[0].post_state.clone().unwrap();
        let last = measure_computational(&after_second, 0).unwrap();
        assert_eq!(last[0].probability, 0.0);
        assert_eq!(last[1].probability, 1.0);
    }

    #[test]
    fn identity_channel_leaves_first_qubit_mixed() {
        let ch = QuantumChannel::identity(2, 2..3).unwrap();
        let r = parity_no_information_check(3, &ch).unwrap();
        assert_eq!(r.rho1_deviation, 0.0);
        assert_eq!(r.c_even, 1.0);
        assert_eq!(r.c_odd, 1.0);
    }

    #[test]
    fn selective_projection_on_third_qubit() {
        // hand computation: k = |0><0| on qubit 2 gives C_E = 1, C_O = 0, so
        // ρ'_12 = (σ00 + σ11)/4 before normalization
        let ch = QuantumChannel::projector(2, 2, 0).unwrap();
        let r = parity_no_information_check(3, &ch).unwrap();
        assert_eq!(r.c_even, 1.0);
        assert_eq!(r.c_odd, 0.0);
        assert!((r.normalization - 0.5).abs() < 1e-15);
        assert!(r.rho1_deviation < 1e-10);
        assert!(r.rho12_formula_deviation < 1e-10);
    }

    #[test]
    fn random_channels_reveal_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let ch = random_parity_channel(4, 4, &mut rng).unwrap();
            let r = parity_no_information_check(4, &ch).unwrap();
            assert!(r.max_deviation() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn channel_touching_first_two_qubits_is_rejected() {
        let ch = QuantumChannel::dephasing(2, 1).unwrap();
        assert!(matches!(
            parity_no_information_check(3, &ch),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn unlock_examples() {
        let ctx = ThermalContext::natural();
        let out = parity_unlock(3, &[(0, 0), (1, 1)], &ctx).unwrap();
        let b = &out.branches[0];
        assert_eq!(b.per_party_work.len(), 1);
        assert_eq!(b.per_party_work["A3"].work, 1.0);
        assert!((b.probability - 0.25).abs() < 1e-15);

        let partial = parity_unlock(3, &[(1, 0)], &ctx).unwrap();
        assert!(partial.branches[0].per_party_work["A1"].work.abs() < 1e-12);

        let pair = parity_unlock(2, &[(0, 0)], &ctx).unwrap();
        assert_eq!(pair.branches[0].per_party_work["A2"].work, 1.0);
    }

    #[test]
    fn unlock_rejects_bad_revelations() {
        let ctx = ThermalContext::natural();
        assert!(matches!(
            parity_unlock(3, &[(0, 0), (0, 1)], &ctx),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            parity_unlock(3, &[(0, 2)], &ctx),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            parity_unlock(3, &[(3, 0)], &ctx),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn odd_parity_record_is_impossible_evidence() {
        let ctx = ThermalContext::natural();
        let err = parity_unlock(3, &[(0, 1), (1, 0), (2, 0)], &ctx);
        assert!(matches!(err, Err(Error::ImpossibleEvidence(_))));
        let ok = parity_unlock(3, &[(0, 1), (1, 0), (2, 1)], &ctx).unwrap();
        assert!(ok.branches[0].per_party_work.is_empty());
    }
}
