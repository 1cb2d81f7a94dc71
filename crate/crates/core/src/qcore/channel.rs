use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Invariant, Result};
use crate::tolerance;

use super::linalg::{
    haar_isometry, hermitian_eigenvalues, hermitian_part, identity, max_abs_diff, trace,
};
use super::{CMatrix, DensityMatrix, C64};

/// Kraus operators acting on a contiguous range of subsystems.
///
/// Trace-non-increasing sets (`Σ K†K <= I`) are allowed; [`apply_channel`]
/// renormalizes their output and returns the normalization factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<CMatrix>,
    target: Range<usize>,
    trace_preserving: bool,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>, target: Range<usize>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::argument("a channel needs at least one Kraus operator"))?;
        let d = first.nrows();
        if target.is_empty() {
            return Err(Error::argument("channel target range is empty"));
        }
        for k in &kraus {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::argument(format!(
                    "Kraus operators must all be {d}x{d}, found {}x{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        let completeness = kraus
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let largest = hermitian_eigenvalues(&completeness)
            .last()
            .copied()
            .unwrap_or(0.0);
        if largest > 1.0 + tolerance::STATE {
            return Err(Error::validation(
                Invariant::KrausCompleteness,
                largest - 1.0,
            ));
        }
        let trace_preserving = max_abs_diff(&completeness, &identity(d)) <= tolerance::STATE;
        Ok(Self {
            kraus,
            target,
            trace_preserving,
        })
    }

    pub fn identity(dim: usize, target: Range<usize>) -> Result<Self> {
        Self::new(vec![identity(dim)], target)
    }

    /// Complete computational-basis dephasing of one subsystem.
    pub fn dephasing(dim: usize, subsystem: usize) -> Result<Self> {
        let kraus = (0..dim).map(|b| basis_projector(dim, b)).collect();
        Self::new(kraus, subsystem..subsystem + 1)
    }

    /// Selective projective branch `|outcome><outcome|` on one subsystem.
    pub fn projector(dim: usize, subsystem: usize, outcome: usize) -> Result<Self> {
        if outcome >= dim {
            return Err(Error::argument(format!(
                "outcome {outcome} out of range for dimension {dim}"
            )));
        }
        Self::new(
            vec![basis_projector(dim, outcome)],
            subsystem..subsystem + 1,
        )
    }

    /// Trace-preserving channel from a Haar-random isometry `V: C^d -> C^{K d}`,
    /// cut into `kraus_count` consecutive `d x d` row blocks.
    pub fn random<R: Rng + ?Sized>(
        dim: usize,
        kraus_count: usize,
        target: Range<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        if kraus_count == 0 {
            return Err(Error::argument("kraus_count must be positive"));
        }
        let v = haar_isometry(kraus_count * dim, dim, rng);
        let kraus = (0..kraus_count)
            .map(|j| v.rows(j * dim, dim).into_owned())
            .collect();
        Self::new(kraus, target)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn target(&self) -> Range<usize> {
        self.target.clone()
    }

    /// Dimension the Kraus operators act on.
    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Kraus operators lifted to the full space `I_left ⊗ k ⊗ I_right`.
    pub fn embedded(&self, dims: &[usize]) -> Result<Vec<CMatrix>> {
        if self.target.end > dims.len() {
            return Err(Error::argument(format!(
                "channel target {:?} exceeds {} subsystems",
                self.target,
                dims.len()
            )));
        }
        let slice: usize = dims[self.target.clone()].iter().product();
        if slice != self.dim() {
            return Err(Error::argument(format!(
                "channel acts on dimension {} but target subsystems {:?} have dimension {slice}",
                self.dim(),
                self.target
            )));
        }
        let left: usize = dims[..self.target.start].iter().product();
        let right: usize = dims[self.target.end..].iter().product();
        Ok(self
            .kraus
            .iter()
            .map(|k| identity(left).kronecker(k).kronecker(&identity(right)))
            .collect())
    }
}

fn basis_projector(dim: usize, b: usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    p[(b, b)] = C64::new(1.0, 0.0);
    p
}

/// `Σ K rho K†` with the Kraus operators embedded on the channel's target,
/// renormalized. Returns the state and the pre-normalization trace.
pub fn apply_channel(rho: &DensityMatrix, ch: &QuantumChannel) -> Result<(DensityMatrix, f64)> {
    let (out, norm) = apply_unnormalized(rho, ch)?;
    if norm < tolerance::NULL_TRACE {
        return Err(Error::NullOutcome { norm });
    }
    let data = out.unscale(norm);
    Ok((
        DensityMatrix::from_parts_unchecked(data, rho.dims().to_vec()),
        norm,
    ))
}

/// `Σ K rho K†` without renormalization, and its trace.
pub(crate) fn apply_unnormalized(
    rho: &DensityMatrix,
    ch: &QuantumChannel,
) -> Result<(CMatrix, f64)> {
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in ch.embedded(rho.dims())? {
        out += &k * rho.matrix() * k.adjoint();
    }
    let out = hermitian_part(&out);
    let norm = trace(&out).re;
    Ok((out, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{partial_trace, CVector, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_vec(vec![
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
        ]);
        PureState::new(v, vec![2, 2]).unwrap().to_density()
    }

    #[test]
    fn identity_channel_is_noop() {
        let rho = bell();
        let ch = QuantumChannel::identity(2, 1..2).unwrap();
        let (out, norm) = apply_channel(&rho, &ch).unwrap();
        assert!((norm - 1.0).abs() < 1e-15);
        assert!(out.max_deviation(rho.matrix()) < 1e-15);
    }

    #[test]
    fn dephasing_half_of_bell_pair_gives_classical_correlations() {
        let ch = QuantumChannel::dephasing(2, 1).unwrap();
        let (out, norm) = apply_channel(&bell(), &ch).unwrap();
        // hand-computed: diag(1/2, 0, 0, 1/2), coherences removed
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = C64::new(0.5, 0.0);
        expected[(3, 3)] = C64::new(0.5, 0.0);
        assert!((norm - 1.0).abs() < 1e-15);
        assert!(out.max_deviation(&expected) < 1e-15);
    }

    #[test]
    fn random_trace_preserving_channels_preserve_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let rho = DensityMatrix::random(&[2, 2], &mut rng).unwrap();
            let ch = QuantumChannel::random(2, 3, 0..1, &mut rng).unwrap();
            assert!(ch.is_trace_preserving());
            let (out, norm) = apply_channel(&rho, &ch).unwrap();
            assert!((norm - 1.0).abs() < 1e-10);
            assert!((out.trace() - 1.0).abs() < 1e-10);
            // action on one half leaves the other marginal alone
            let before = partial_trace(&rho, &[1]).unwrap();
            let after = partial_trace(&out, &[1]).unwrap();
            assert!(after.max_deviation(before.matrix()) < 1e-12);
        }
    }

    #[test]
    fn selective_branch_reports_normalization() {
        let ch = QuantumChannel::projector(2, 0, 1).unwrap();
        assert!(!ch.is_trace_preserving());
        let (out, norm) = apply_channel(&bell(), &ch).unwrap();
        assert!((norm - 0.5).abs() < 1e-15);
        let expected = DensityMatrix::basis(&[2, 2], 3).unwrap();
        assert!(out.max_deviation(expected.matrix()) < 1e-15);
    }

    #[test]
    fn null_outcome_is_an_error() {
        let zero = DensityMatrix::basis(&[2], 0).unwrap();
        let ch = QuantumChannel::projector(2, 0, 1).unwrap();
        assert!(matches!(
            apply_channel(&zero, &ch),
            Err(Error::NullOutcome { .. })
        ));
    }

    #[test]
    fn over_complete_kraus_set_is_rejected() {
        let k = identity(2).scale(1.1);
        assert!(matches!(
            QuantumChannel::new(vec![k], 0..1),
            Err(Error::Validation {
                invariant: Invariant::KrausCompleteness,
                ..
            })
        ));
    }

    #[test]
    fn target_dimension_mismatch_is_rejected() {
        let ch = QuantumChannel::identity(4, 0..1).unwrap();
        assert!(matches!(
            apply_channel(&bell(), &ch),
            Err(Error::Argument(_))
        ));
    }
}
