//! Typical subspace of `ρ_L = ρ_B^{⊗L}`.
//!
//! `Λ` is spanned by the eigenvectors of `ρ_L` whose eigenvalues lie in
//! `[2^{-L(S+δ)}, 2^{-L(S-δ)}]`, with `S = S(ρ_B)`. Two routes compute it:
//!
//! - dense: build `ρ_L`, diagonalize, and form the projector (bounded by the
//!   capacity knob);
//! - type classes: the spectrum of `ρ_L` is the multiset of products of
//!   `ρ_B`'s eigenvalues, so eigenvalues are grouped by occupation numbers and
//!   weighted by multinomial counts. No matrix of size `d^L` is built.

use serde::Serialize;

use crate::error::{Error, Invariant, Result};
use crate::qcore::linalg::{hermitian_eigen, identity, max_abs_diff};
use crate::qcore::{capacity, max_dimension, tensor_power, CMatrix, DensityMatrix};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypicalMethod {
    Dense,
    TypeClasses,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSubspace {
    pub block_length: usize,
    pub delta: f64,
    /// `S(ρ_B)` in bits.
    pub source_entropy: f64,
    /// `d_Λ`, when it fits in 128 bits.
    pub dim: Option<u128>,
    /// `log2 d_Λ`; `-inf` for an empty subspace.
    pub log2_dim: f64,
    /// `Tr(Π ρ_L)`.
    pub capture_probability: f64,
    /// Orthogonal projector `Π` (dense route only).
    pub projector: Option<CMatrix>,
    /// Orthonormal basis of `Λ` as columns (dense route only).
    pub basis: Option<CMatrix>,
    pub method: TypicalMethod,
}

impl TypicalSubspace {
    /// `L (S + δ)`, the exponent bounding `log2 d_Λ`.
    pub fn dimension_bound_bits(&self) -> f64 {
        self.block_length as f64 * (self.source_entropy + self.delta)
    }

    pub fn epsilon(&self) -> f64 {
        1.0 - self.capture_probability
    }

    fn check_dimension_bound(&self) -> Result<()> {
        let excess = self.log2_dim - self.dimension_bound_bits();
        if excess > 0.0 {
            return Err(Error::validation(Invariant::DimensionBound, excess));
        }
        Ok(())
    }
}

struct Window {
    low: f64,
    high: f64,
}

impl Window {
    fn new(block_length: usize, entropy: f64, delta: f64) -> Self {
        let l = block_length as f64;
        Self {
            low: -l * (entropy + delta),
            high: -l * (entropy - delta),
        }
    }

    fn contains(&self, log2_eigenvalue: f64) -> bool {
        log2_eigenvalue >= self.low && log2_eigenvalue <= self.high
    }
}

fn check_args(block_length: usize, delta: f64) -> Result<()> {
    if block_length == 0 {
        return Err(Error::argument("block length L must be at least 1"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::argument(format!(
            "typicality slack delta must be positive, got {delta}"
        )));
    }
    Ok(())
}

/// Dense route when `d^L` fits the capacity, type classes otherwise.
pub fn typical_subspace(
    rho_b: &DensityMatrix,
    block_length: usize,
    delta: f64,
) -> Result<TypicalSubspace> {
    check_args(block_length, delta)?;
    match capacity::checked_power(rho_b.dim(), block_length, max_dimension()) {
        Ok(_) => typical_subspace_dense(rho_b, block_length, delta),
        Err(Error::Capacity { .. }) => typical_subspace_by_types(rho_b, block_length, delta),
        Err(e) => Err(e),
    }
}

/// Diagonalize `ρ_L` and build `Π` explicitly.
pub fn typical_subspace_dense(
    rho_b: &DensityMatrix,
    block_length: usize,
    delta: f64,
) -> Result<TypicalSubspace> {
    check_args(block_length, delta)?;
    let entropy = rho_b.entropy()?;
    let rho_l = tensor_power(rho_b, block_length)?;
    let d = rho_l.dim();
    let window = Window::new(block_length, entropy, delta);
    // eigenvalues at this level are solver noise on an exact zero
    let noise = 64.0 * f64::EPSILON * d as f64;

    let (values, vectors) = hermitian_eigen(rho_l.matrix());
    let typical: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l > noise && window.contains(l.log2()))
        .map(|(i, _)| i)
        .collect();
    let basis = CMatrix::from_fn(d, typical.len(), |r, c| vectors[(r, typical[c])]);
    // Π² = Π  ⇔  B†B = I for Π = B B†
    let gram = basis.adjoint() * &basis;
    let defect = max_abs_diff(&gram, &identity(typical.len()));
    if defect > tolerance::IDEMPOTENT {
        return Err(Error::validation(Invariant::Idempotence, defect));
    }
    let projector = &basis * basis.adjoint();
    let capture = (basis.adjoint() * rho_l.matrix() * &basis)
        .diagonal()
        .iter()
        .map(|z| z.re)
        .sum::<f64>();

    let dim = typical.len() as u128;
    let out = TypicalSubspace {
        block_length,
        delta,
        source_entropy: entropy,
        dim: Some(dim),
        log2_dim: (dim as f64).log2(),
        capture_probability: capture.clamp(0.0, 1.0),
        projector: Some(projector),
        basis: Some(basis),
        method: TypicalMethod::Dense,
    };
    out.check_dimension_bound()?;
    Ok(out)
}

/// Enumerate occupation-number classes of `ρ_B`'s spectrum.
pub fn typical_subspace_by_types(
    rho_b: &DensityMatrix,
    block_length: usize,
    delta: f64,
) -> Result<TypicalSubspace> {
    check_args(block_length, delta)?;
    let entropy = rho_b.entropy()?;
    let positive: Vec<f64> = rho_b
        .eigenvalues()
        .into_iter()
        .filter(|&l| l > tolerance::EIGEN_SNAP)
        .collect();
    let window = Window::new(block_length, entropy, delta);
    let ln_fact = log_factorials(block_length);
    let ln_lambda: Vec<f64> = positive.iter().map(|l| l.ln()).collect();
    let log2_lambda: Vec<f64> = positive.iter().map(|l| l.log2()).collect();

    let mut acc = Accumulator::default();
    let mut counts = vec![0usize; positive.len()];
    visit_compositions(&mut counts, 0, block_length, &mut |k| {
        let rate: f64 = k
            .iter()
            .zip(&log2_lambda)
            .map(|(&ki, &l)| ki as f64 * l)
            .sum();
        if !window.contains(rate) {
            return;
        }
        let ln_count = ln_fact[block_length] - k.iter().map(|&ki| ln_fact[ki]).sum::<f64>();
        let exact = if acc.dim.is_some() && ln_count < 127.0 * std::f64::consts::LN_2 {
            multinomial(k)
        } else {
            None
        };
        let probability = match exact {
            Some(m) if m < (1u128 << 100) => {
                let product: f64 = k
                    .iter()
                    .zip(&positive)
                    .map(|(&ki, &l)| l.powi(ki as i32))
                    .product();
                m as f64 * product
            }
            _ => {
                let ln_product: f64 = k
                    .iter()
                    .zip(&ln_lambda)
                    .map(|(&ki, &ll)| ki as f64 * ll)
                    .sum();
                (ln_count + ln_product).exp()
            }
        };
        acc.add(exact, ln_count, probability);
    });

    let out = TypicalSubspace {
        block_length,
        delta,
        source_entropy: entropy,
        dim: acc.dim,
        log2_dim: acc.log2_dim(),
        capture_probability: acc.capture.clamp(0.0, 1.0),
        projector: None,
        basis: None,
        method: TypicalMethod::TypeClasses,
    };
    out.check_dimension_bound()?;
    Ok(out)
}

struct Accumulator {
    dim: Option<u128>,
    ln_terms: Vec<f64>,
    capture: f64,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self {
            dim: Some(0),
            ln_terms: Vec::new(),
            capture: 0.0,
        }
    }
}

impl Accumulator {
    fn add(&mut self, exact: Option<u128>, ln_count: f64, probability: f64) {
        self.dim = match (self.dim, exact) {
            (Some(a), Some(b)) => a.checked_add(b),
            _ => None,
        };
        self.ln_terms.push(ln_count);
        self.capture += probability;
    }

    fn log2_dim(&self) -> f64 {
        if let Some(d) = self.dim {
            return (d as f64).log2();
        }
        let max = self
            .ln_terms
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self.ln_terms.iter().map(|t| (t - max).exp()).sum();
        (max + sum.ln()) / std::f64::consts::LN_2
    }
}

/// `ln k!` for `k = 0..=n`.
fn log_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Exact multinomial coefficient, `None` on overflow.
fn multinomial(k: &[usize]) -> Option<u128> {
    // the largest part contributes a factor of 1; start after it
    let largest = (0..k.len()).max_by_key(|&i| k[i])?;
    let mut total = k[largest] as u128;
    let mut result = 1u128;
    for (_, &ki) in k.iter().enumerate().filter(|&(i, _)| i != largest) {
        for i in 1..=ki as u128 {
            total += 1;
            // result * total / i stays integral at every step
            result = result.checked_mul(total)? / i;
        }
    }
    Some(result)
}

fn visit_compositions(
    counts: &mut [usize],
    index: usize,
    remaining: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if counts.is_empty() {
        return;
    }
    if index == counts.len() - 1 {
        counts[index] = remaining;
        f(counts);
        return;
    }
    for k in 0..=remaining {
        counts[index] = k;
        visit_compositions(counts, index + 1, remaining - k, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{CVector, PureState, C64};

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    /// Independent binomial-sum capture for `diag(1-p, p)`.
    fn binomial_capture(p: f64, l: usize, delta: f64) -> (f64, u64) {
        let s = -(1.0 - p) * (1.0 - p).log2() - p * p.log2();
        let lf = l as f64;
        let (mut capture, mut dim) = (0.0, 0u64);
        for k in 0..=l {
            let lambda = (1.0 - p).powi((l - k) as i32) * p.powi(k as i32);
            if lambda >= 2f64.powf(-lf * (s + delta)) && lambda <= 2f64.powf(-lf * (s - delta)) {
                capture += binom(l as u64, k as u64) * lambda;
                dim += binom(l as u64, k as u64) as u64;
            }
        }
        (capture, dim)
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[2, 1]), Some(3));
        assert_eq!(multinomial(&[2, 2, 1]), Some(30));
        assert_eq!(multinomial(&[0, 5]), Some(1));
        assert_eq!(multinomial(&[30, 30]), Some(118_264_581_564_861_424));
        assert_eq!(multinomial(&[200, 200]), None);
        assert_eq!(
            multinomial(&[3, 1_000_000]),
            Some(1_000_003 * 1_000_002 * 1_000_001 / 6)
        );
    }

    #[test]
    fn pure_source_has_one_dimensional_typical_space() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(
            CVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]),
            vec![2],
        )
        .unwrap()
        .to_density();
        for l in [1, 3, 6] {
            for method in [
                typical_subspace_dense(&plus, l, 0.1).unwrap(),
                typical_subspace_by_types(&plus, l, 0.1).unwrap(),
            ] {
                assert_eq!(method.dim, Some(1));
                assert!((method.capture_probability - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flat_source_is_entirely_typical() {
        let half = DensityMatrix::maximally_mixed(&[2]).unwrap();
        let t = typical_subspace_dense(&half, 6, 1e-3).unwrap();
        assert_eq!(t.dim, Some(64));
        assert!((t.capture_probability - 1.0).abs() < 1e-12);
        assert!(t.log2_dim <= t.dimension_bound_bits());
        let fast = typical_subspace_by_types(&half, 40, 1e-3).unwrap();
        assert_eq!(fast.dim, Some(1u128 << 40));
        assert!((fast.capture_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn biased_source_matches_binomial_sum() {
        let rho = DensityMatrix::diagonal(&[2], &[0.9, 0.1]).unwrap();
        for l in [1, 4, 6, 8] {
            let (oracle, dim) = binomial_capture(0.1, l, 0.2);
            let dense = typical_subspace_dense(&rho, l, 0.2).unwrap();
            let fast = typical_subspace_by_types(&rho, l, 0.2).unwrap();
            assert!((dense.capture_probability - oracle).abs() < 1e-12, "L={l}");
            assert!((fast.capture_probability - oracle).abs() < 1e-12, "L={l}");
            assert_eq!(dense.dim, Some(dim as u128));
            assert_eq!(fast.dim, Some(dim as u128));
        }
        for l in [12, 20, 40] {
            let (oracle, _) = binomial_capture(0.1, l, 0.2);
            let fast = typical_subspace_by_types(&rho, l, 0.2).unwrap();
            assert!((fast.capture_probability - oracle).abs() < 1e-12, "L={l}");
        }
    }

    #[test]
    fn projector_is_idempotent_with_matching_trace() {
        let rho = DensityMatrix::diagonal(&[2], &[0.7, 0.3]).unwrap();
        let t = typical_subspace_dense(&rho, 6, 0.15).unwrap();
        let p = t.projector.as_ref().unwrap();
        assert!(max_abs_diff(&(p * p), p) < 1e-9);
        let tr: f64 = p.diagonal().iter().map(|z| z.re).sum();
        assert!((tr - t.dim.unwrap() as f64).abs() < 0.5);
    }

    #[test]
    fn non_diagonal_source_agrees_across_routes() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(12);
        let rho = DensityMatrix::random(&[2], &mut rng).unwrap();
        let dense = typical_subspace_dense(&rho, 8, 0.25).unwrap();
        let fast = typical_subspace_by_types(&rho, 8, 0.25).unwrap();
        assert_eq!(dense.dim, fast.dim);
        assert!((dense.capture_probability - fast.capture_probability).abs() < 1e-10);
    }

    #[test]
    fn qutrit_source_by_types() {
        let rho = DensityMatrix::diagonal(&[3], &[0.5, 0.3, 0.2]).unwrap();
        let dense = typical_subspace_dense(&rho, 5, 0.2).unwrap();
        let fast = typical_subspace_by_types(&rho, 5, 0.2).unwrap();
        assert_eq!(dense.dim, fast.dim);
        assert!((dense.capture_probability - fast.capture_probability).abs() < 1e-12);
    }

    #[test]
    fn argument_and_capacity_errors() {
        let rho = DensityMatrix::diagonal(&[2], &[0.9, 0.1]).unwrap();
        assert!(matches!(
            typical_subspace(&rho, 4, 0.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            typical_subspace(&rho, 0, 0.1),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            typical_subspace_dense(&rho, 20, 0.1),
            Err(Error::Capacity { .. })
        ));
        // the automatic route falls back to type classes
        let t = typical_subspace(&rho, 20, 0.1).unwrap();
        assert_eq!(t.method, TypicalMethod::TypeClasses);
    }

    #[test]
    fn very_long_blocks_via_types() {
        let rho = DensityMatrix::diagonal(&[2], &[0.9, 0.1]).unwrap();
        let t = typical_subspace_by_types(&rho, 20_000, 0.05).unwrap();
        assert!(t.capture_probability > 0.99);
        assert!(t.dim.is_none());
        assert!(t.log2_dim <= t.dimension_bound_bits());
        let t = typical_subspace_by_types(&rho, 1_000_000, 0.01).unwrap();
        assert!(t.capture_probability > 1.0 - 1e-9);
        assert!(t.log2_dim <= t.dimension_bound_bits());
    }
}
