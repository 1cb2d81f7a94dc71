//! Communication and work extraction from the same stream of letters.
//!
//! An alphabet `{ρ_a, p_a}` of `d`-dimensional letters splits its `M = log2 d`
//! bits per letter three ways: work `E / (k_B T ln2) = M - S(ρ_B)`, classical
//! communication `C = χ = S(ρ_B) - <S_a>`, and the useless remainder `<S_a>`.

mod alphabet;
mod refactor;
mod tradeoff;
mod typical;

pub use alphabet::{avg_letter_entropy, ensemble_state, holevo_chi, Alphabet, AlphabetFile};
pub use refactor::{
    refactorization_ledger, verify_refactorization_unitary, RefactorizationLedger, UnitaryCheck,
};
pub use tradeoff::{
    block_alphabet, blocking_sequence, tradeoff_curve, tradeoff_point, BlockingPoint, CurvePoint,
    TradeoffCurve, TradeoffPoint,
};
pub use typical::{
    typical_subspace, typical_subspace_by_types, typical_subspace_dense, TypicalMethod,
    TypicalSubspace,
};
