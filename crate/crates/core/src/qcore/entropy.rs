use crate::error::{Error, Invariant, Result};
use crate::tolerance;

use super::DensityMatrix;

/// Von Neumann entropy in bits.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative
/// is a positivity violation.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = rho.eigenvalues();
    if let Some(&min) = eig.first() {
        if min < -tolerance::EIGEN_CLAMP {
            return Err(Error::validation(Invariant::PositiveSemidefinite, -min));
        }
    }
    Ok(spectrum_entropy(&eig))
}

/// `-Σ λ log2 λ` over a clamped spectrum. Results within
/// [`tolerance::ENTROPY_SNAP`] of an integer are rounded to it.
pub(crate) fn spectrum_entropy(eig: &[f64]) -> f64 {
    let s = eig.iter().map(|&l| entropy_term(l)).sum::<f64>().max(0.0);
    let r = s.round();
    if (s - r).abs() <= tolerance::ENTROPY_SNAP {
        r
    } else {
        s
    }
}

fn entropy_term(l: f64) -> f64 {
    if l <= tolerance::EIGEN_SNAP || (1.0 - l).abs() <= tolerance::EIGEN_SNAP {
        0.0
    } else {
        -l * l.log2()
    }
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        + 0.0 // no -0.0 for a certain outcome
}

/// `h(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}
