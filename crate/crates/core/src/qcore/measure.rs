use crate::error::{Error, Invariant, Result};
use crate::tolerance;

use super::ops::{digit, reduce};
use super::{CMatrix, DensityMatrix, C64};

/// One branch of a computational-basis measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome: usize,
    pub probability: f64,
    /// Conditioned state of the remaining subsystems; `None` for a
    /// zero-probability outcome.
    pub post_state: Option<DensityMatrix>,
}

/// Measure `subsystem` in the computational basis.
///
/// Returns one record per basis outcome. The measured subsystem is removed
/// from each post-state; measuring the only subsystem leaves the trivial
/// one-dimensional state.
pub fn measure_computational(
    rho: &DensityMatrix,
    subsystem: usize,
) -> Result<Vec<MeasurementRecord>> {
    let dims = rho.dims();
    if subsystem >= dims.len() {
        return Err(Error::argument(format!(
            "subsystem {subsystem} out of range for {} subsystems",
            dims.len()
        )));
    }
    let d = rho.dim();
    let digits: Vec<usize> = (0..d).map(|i| digit(dims, i, subsystem)).collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|&k| k != subsystem).collect();

    let mut records = Vec::with_capacity(dims[subsystem]);
    for outcome in 0..dims[subsystem] {
        let projected = CMatrix::from_fn(d, d, |i, j| {
            if digits[i] == outcome && digits[j] == outcome {
                rho.matrix()[(i, j)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let probability = (0..d)
            .filter(|&i| digits[i] == outcome)
            .map(|i| rho.matrix()[(i, i)].re)
            .sum::<f64>()
            .max(0.0);
        let post_state = if probability < tolerance::NULL_TRACE {
            None
        } else {
            let (m, kept) = reduce(&projected, dims, &rest)?;
            Some(DensityMatrix::from_parts_unchecked(
                m.unscale(probability),
                kept,
            ))
        };
        records.push(MeasurementRecord {
            outcome,
            probability,
            post_state,
        });
    }

    let total: f64 = records.iter().map(|r| r.probability).sum();
    if (total - 1.0).abs() > tolerance::STATE {
        return Err(Error::validation(
            Invariant::ProbabilitySum,
            (total - 1.0).abs(),
        ));
    }
    Ok(records)
}
