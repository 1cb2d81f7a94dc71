use crate::error::{Error, Invariant, Result};
use crate::tolerance;

use super::linalg::{hermitian_eigenvalues, hermiticity_defect, trace};
use super::{check_capacity, CMatrix, CVector, C64};

/// Hermitian, positive semidefinite, unit-trace matrix with a subsystem signature.
///
/// Every public constructor validates all invariants eagerly. Values are
/// immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    dims: Vec<usize>,
}

/// Normalized state vector with a subsystem signature.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

/// Input accepted by [`make_density`].
#[derive(Debug, Clone)]
pub enum StateSpec {
    Pure(PureState),
    /// Convex combination of states sharing one signature.
    Mixture(Vec<(f64, DensityMatrix)>),
    Explicit {
        data: CMatrix,
        dims: Vec<usize>,
    },
}

pub fn make_density(spec: StateSpec) -> Result<DensityMatrix> {
    match spec {
        StateSpec::Pure(psi) => Ok(psi.to_density()),
        StateSpec::Mixture(parts) => DensityMatrix::mixture(&parts),
        StateSpec::Explicit { data, dims } => DensityMatrix::new(data, dims),
    }
}

fn check_dims(dims: &[usize], d: usize) -> Result<()> {
    if dims.contains(&0) {
        return Err(Error::argument("subsystem dimensions must be positive"));
    }
    let product = dims
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k))
        .ok_or(Error::Capacity {
            requested: usize::MAX,
            limit: super::max_dimension(),
        })?;
    if product != d {
        return Err(Error::validation(
            Invariant::DimensionProduct,
            (product as f64 - d as f64).abs(),
        ));
    }
    Ok(())
}

impl DensityMatrix {
    /// Validate an explicit matrix against every density-matrix invariant.
    pub fn new(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::validation(
                Invariant::Square,
                (data.nrows() as f64 - data.ncols() as f64).abs(),
            ));
        }
        check_dims(&dims, data.nrows())?;
        check_capacity(data.nrows())?;

        let herm = hermiticity_defect(&data);
        if herm > tolerance::STATE {
            return Err(Error::validation(Invariant::Hermitian, herm));
        }
        let tr = trace(&data);
        let trace_err = (tr - C64::new(1.0, 0.0)).norm();
        if trace_err > tolerance::STATE {
            return Err(Error::validation(Invariant::UnitTrace, trace_err));
        }
        let min_eig = hermitian_eigenvalues(&data).first().copied().unwrap_or(0.0);
        if min_eig < -tolerance::EIGEN_CLAMP {
            return Err(Error::validation(Invariant::PositiveSemidefinite, -min_eig));
        }
        Ok(Self { data, dims })
    }

    /// Matrix known to be a valid state by construction.
    pub(crate) fn from_parts_unchecked(data: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), data.nrows());
        Self { data, dims }
    }

    /// Computational basis projector `|index><index|`.
    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        Ok(PureState::basis(dims, index)?.to_density())
    }

    /// `I/d` on the given signature.
    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let d: usize = dims.iter().product();
        check_dims(dims, d)?;
        check_capacity(d)?;
        let data = CMatrix::identity(d, d).scale(1.0 / d as f64);
        Ok(Self::from_parts_unchecked(data, dims.to_vec()))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(dims: &[usize], probs: &[f64]) -> Result<Self> {
        let d: usize = dims.iter().product();
        if probs.len() != d {
            return Err(Error::argument(format!(
                "expected {d} diagonal entries, got {}",
                probs.len()
            )));
        }
        let data = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(probs[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::new(data, dims.to_vec())
    }

    /// Weighted mixture; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::argument("mixture needs at least one component"))?;
        let mut total = 0.0;
        let mut data = CMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::validation(Invariant::NegativeProbability, -w));
            }
            if rho.dims != first.dims {
                return Err(Error::argument(format!(
                    "mixture components disagree on dimensions: {:?} vs {:?}",
                    rho.dims, first.dims
                )));
            }
            total += w;
            data += rho.data.scale(*w);
        }
        if (total - 1.0).abs() > tolerance::STATE {
            return Err(Error::validation(
                Invariant::ProbabilitySum,
                (total - 1.0).abs(),
            ));
        }
        Ok(Self::from_parts_unchecked(data, first.dims.clone()))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> f64 {
        trace(&self.data).re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        super::von_neumann_entropy(self)
    }

    /// `log2 d`.
    pub fn capacity_bits(&self) -> f64 {
        (self.dim() as f64).log2()
    }

    /// `U rho U†` for a unitary `u` of matching dimension.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.shape() != self.data.shape() {
            return Err(Error::argument(format!(
                "unitary shape {:?} does not match state dimension {}",
                u.shape(),
                self.dim()
            )));
        }
        let residual = super::linalg::unitarity_residual(u);
        if residual > tolerance::STATE {
            return Err(Error::validation(Invariant::Unitarity, residual));
        }
        let data = super::linalg::hermitian_part(&(u * &self.data * u.adjoint()));
        Ok(Self::from_parts_unchecked(data, self.dims.clone()))
    }

    /// Largest entry-wise distance to another matrix of the same size.
    pub fn max_deviation(&self, other: &CMatrix) -> f64 {
        super::linalg::max_abs_diff(&self.data, other)
    }

    /// Random mixed state `G G† / Tr(G G†)` from a Ginibre matrix.
    pub fn random<R: rand::Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<Self> {
        let d: usize = dims.iter().product();
        check_dims(dims, d)?;
        check_capacity(d)?;
        let g = super::linalg::ginibre(d, d, rng);
        let m = &g * g.adjoint();
        let tr = trace(&m).re;
        let data = super::linalg::hermitian_part(&m.unscale(tr));
        Ok(Self::from_parts_unchecked(data, dims.to_vec()))
    }
}

impl PureState {
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        check_capacity(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tolerance::PURE_NORM {
            return Err(Error::validation(
                Invariant::Normalization,
                (norm - 1.0).abs(),
            ));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Computational basis state `|index>`.
    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(Error::argument(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut amplitudes = CVector::zeros(d);
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::new(amplitudes, dims.to_vec())
    }

    /// Haar-random pure state.
    pub fn random<R: rand::Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<Self> {
        let d: usize = dims.iter().product();
        check_dims(dims, d)?;
        check_capacity(d)?;
        let g = super::linalg::ginibre(d, 1, rng);
        let v = g.column(0).into_owned();
        let norm = v.norm();
        Self::new(v.unscale(norm), dims.to_vec())
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|psi><psi|`.
    pub fn to_density(&self) -> DensityMatrix {
        let data = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_parts_unchecked(data, self.dims.clone())
    }
}
