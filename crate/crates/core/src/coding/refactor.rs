//! Work ledger for using the same codewords for communication and work.
//!
//! A codeword of `L` letters is padded with an ancilla `D` of dimension `d_Λ`
//! prepared in `|0>_D`. A unitary maps `Γ = Λ ⊗ |0>_D` onto `|0>_L ⊗ H_D`;
//! when the codeword lies in `Λ` the `H_L` register is then pure and yields
//! `L M` bits of work, otherwise at worst `-L M`. Restoring the ancilla costs
//! `log2 d_Λ` bits.

use serde::Serialize;

use super::alphabet::{ensemble_state, Alphabet};
use super::typical::{typical_subspace_by_types, typical_subspace_dense};
use crate::error::{Error, Result};
use crate::qcore::linalg::{complete_orthonormal_basis, unitarity_residual};
use crate::qcore::{capacity, CMatrix, CVector, C64};
use crate::thermo::{ThermalContext, Units};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefactorizationLedger {
    pub block_length: usize,
    pub delta: f64,
    pub capacity_bits: f64,
    pub source_entropy: f64,
    pub log2_typical_dim: f64,
    /// `Tr(Π ρ_L)`.
    pub success_probability: f64,
    /// `1 - success_probability`.
    pub epsilon: f64,
    /// Work from the purified `H_L` register on success: `k_B T ln2 L M`.
    pub w1: f64,
    /// `w1 (1 - 2ε)`: failures counted at `-w1`.
    pub average_work: f64,
    /// Ancilla reset: `k_B T ln2 log2 d_Λ`.
    pub w_ancilla: f64,
    /// `k_B T ln2 L (S + δ)`, the bound on `w_ancilla`.
    pub w_ancilla_bound: f64,
    /// `(average_work - w_ancilla) / L`.
    pub net_per_letter: f64,
    /// `k_B T ln2 (M (1 - 2ε) - S (1 + δ))`.
    pub lower_bound: f64,
    /// `k_B T ln2 (M - S)`.
    pub upper_bound: f64,
    pub within_bracket: bool,
    pub units: Units,
    pub unit_factor: f64,
}

pub fn refactorization_ledger(
    a: &Alphabet,
    block_length: usize,
    delta: f64,
    ctx: &ThermalContext,
) -> Result<RefactorizationLedger> {
    let rho_b = ensemble_state(a);
    let typical = typical_subspace_by_types(&rho_b, block_length, delta)?;
    if typical.dim == Some(0) {
        return Err(Error::argument(format!(
            "typical subspace is empty for L = {block_length}, delta = {delta}"
        )));
    }
    let m = a.capacity_bits();
    let s = typical.source_entropy;
    let l = block_length as f64;
    let eps = typical.epsilon();
    let unit = ctx.unit_factor();

    let w1 = unit * l * m;
    let average_work = w1 * (1.0 - 2.0 * eps);
    let w_ancilla = unit * typical.log2_dim;
    let net_per_letter = (average_work - w_ancilla) / l;
    let lower_bound = unit * (m * (1.0 - 2.0 * eps) - s * (1.0 + delta));
    let upper_bound = unit * (m - s);
    let slack = 1e-12 * unit;
    Ok(RefactorizationLedger {
        block_length,
        delta,
        capacity_bits: m,
        source_entropy: s,
        log2_typical_dim: typical.log2_dim,
        success_probability: typical.capture_probability,
        epsilon: eps,
        w1,
        average_work,
        w_ancilla,
        w_ancilla_bound: unit * l * (s + delta),
        net_per_letter,
        lower_bound,
        upper_bound,
        within_bracket: net_per_letter >= lower_bound - slack
            && net_per_letter <= upper_bound + slack,
        units: ctx.units(),
        unit_factor: unit,
    })
}

/// Explicit construction of the refactorizing unitary for short blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitaryCheck {
    pub block_length: usize,
    pub codeword_dim: usize,
    pub ancilla_dim: usize,
    /// `max |U†U - I|`.
    pub unitarity_residual: f64,
    /// `max_i |U (v_i ⊗ |0>_D) - |0>_L ⊗ |i>_D|` over the typical basis.
    pub mapping_residual: f64,
    /// Population of `|0>_L` after applying `U` to `ρ_L ⊗ |0><0|_D`.
    pub zero_register_population: f64,
    pub capture_probability: f64,
}

/// Largest block length accepted by [`verify_refactorization_unitary`].
pub const MAX_VERIFY_BLOCK: usize = 3;

/// Build `U` by completing `{v_i ⊗ |0>_D}` and `{|0>_L ⊗ |i>_D}` to full
/// orthonormal bases and pairing them up.
pub fn verify_refactorization_unitary(
    a: &Alphabet,
    block_length: usize,
    delta: f64,
) -> Result<UnitaryCheck> {
    if block_length > MAX_VERIFY_BLOCK {
        return Err(Error::argument(format!(
            "explicit unitary construction supports L <= {MAX_VERIFY_BLOCK}, got {block_length}"
        )));
    }
    let rho_b = ensemble_state(a);
    let typical = typical_subspace_dense(&rho_b, block_length, delta)?;
    let lambda = typical.basis.expect("dense route returns a basis");
    let d_l = lambda.nrows();
    let d_anc = lambda.ncols();
    if d_anc == 0 {
        return Err(Error::argument("typical subspace is empty"));
    }
    let total = d_l * d_anc;
    capacity::check_capacity(total)?;

    let zero = |dim: usize| {
        let mut v = CVector::zeros(dim);
        v[0] = C64::new(1.0, 0.0);
        v
    };
    let zero_anc = zero(d_anc);
    let zero_l = zero(d_l);
    let sources: Vec<CVector> = (0..d_anc)
        .map(|i| lambda.column(i).into_owned().kronecker(&zero_anc))
        .collect();
    let targets: Vec<CVector> = (0..d_anc)
        .map(|i| {
            let mut e = CVector::zeros(d_anc);
            e[i] = C64::new(1.0, 0.0);
            zero_l.kronecker(&e)
        })
        .collect();
    let sources = complete_orthonormal_basis(&sources, total);
    let targets = complete_orthonormal_basis(&targets, total);
    if sources.len() != total || targets.len() != total {
        return Err(Error::argument("basis completion failed"));
    }

    let mut u = CMatrix::zeros(total, total);
    for (s, t) in sources.iter().zip(&targets) {
        u += t * s.adjoint();
    }

    let mapping_residual = (0..d_anc)
        .map(|i| (&u * &sources[i] - &targets[i]).camax())
        .fold(0.0, f64::max);

    // ρ_L ⊗ |0><0|_D, rotated; weight on |0>_L ⊗ H_D
    let rho_l = crate::qcore::tensor_power(&rho_b, block_length)?;
    let mut anc = CMatrix::zeros(d_anc, d_anc);
    anc[(0, 0)] = C64::new(1.0, 0.0);
    let rotated = &u * rho_l.matrix().kronecker(&anc) * u.adjoint();
    let zero_register_population = (0..d_anc).map(|j| rotated[(j, j)].re).sum();

    Ok(UnitaryCheck {
        block_length,
        codeword_dim: d_l,
        ancilla_dim: d_anc,
        unitarity_residual: unitarity_residual(&u),
        mapping_residual,
        zero_register_population,
        capture_probability: typical.capture_probability,
    })
}
