use serde::Serialize;

use super::alphabet::{avg_letter_entropy, ensemble_state, Alphabet};
use crate::error::{Error, Invariant, Result};
use crate::qcore::{capacity, tensor_power};
use crate::thermo::{ThermalContext, Units};

/// Per-letter split of an alphabet's capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffPoint {
    /// `E / (k_B T ln2)`.
    pub energy_bits: f64,
    pub comm_bits: f64,
    pub avg_letter_entropy: f64,
    /// `M = log2 d`.
    pub capacity_bits: f64,
    /// `E` in the context's units.
    pub energy: f64,
    pub units: Units,
    /// `E_bits + C + <S_a> - M` as evaluated numerically.
    pub identity_residual: f64,
}

/// Work and communication at the Holevo point: `C = χ`, `E = M - S(ρ_B)`.
pub fn tradeoff_point(a: &Alphabet, ctx: &ThermalContext) -> Result<TradeoffPoint> {
    let s_b = ensemble_state(a).entropy()?;
    let avg = avg_letter_entropy(a)?;
    let m = a.capacity_bits();
    let energy_bits = m - s_b;
    let comm_bits = s_b - avg;
    Ok(TradeoffPoint {
        energy_bits,
        comm_bits,
        avg_letter_entropy: avg,
        capacity_bits: m,
        energy: ctx.energy(energy_bits),
        units: ctx.units(),
        identity_residual: energy_bits + comm_bits + avg - m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub comm_bits: f64,
    pub energy_bits: f64,
}

/// End points of the achievable boundary, a segment of slope -1.
///
/// The achievable region is everything with `0 <= C <= χ`, `E >= 0` and
/// `E + C <= M - <S_a>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffCurve {
    /// `(χ, M - S(ρ_B))`.
    pub max_comm: CurvePoint,
    /// `(0, M - <S_a>)`.
    pub max_energy: CurvePoint,
}

impl TradeoffCurve {
    pub fn is_achievable(&self, comm_bits: f64, energy_bits: f64) -> bool {
        const SLACK: f64 = 1e-12;
        comm_bits >= -SLACK
            && energy_bits >= -SLACK
            && comm_bits <= self.max_comm.comm_bits + SLACK
            && comm_bits + energy_bits <= self.max_energy.energy_bits + SLACK
    }

    /// Points evenly spaced along the boundary segment, `steps + 1` of them.
    pub fn boundary(&self, steps: usize) -> Vec<CurvePoint> {
        let steps = steps.max(1);
        (0..=steps)
            .map(|i| {
                let t = i as f64 / steps as f64;
                CurvePoint {
                    comm_bits: t * self.max_comm.comm_bits,
                    energy_bits: self.max_energy.energy_bits
                        + t * (self.max_comm.energy_bits - self.max_energy.energy_bits),
                }
            })
            .collect()
    }
}

pub fn tradeoff_curve(a: &Alphabet, ctx: &ThermalContext) -> Result<TradeoffCurve> {
    let p = tradeoff_point(a, ctx)?;
    Ok(TradeoffCurve {
        max_comm: CurvePoint {
            comm_bits: p.comm_bits,
            energy_bits: p.energy_bits,
        },
        max_energy: CurvePoint {
            comm_bits: 0.0,
            energy_bits: p.capacity_bits - p.avg_letter_entropy,
        },
    })
}

/// Alphabet of `n`-fold repeated letters `ρ_a^{⊗n}` with the original
/// probabilities. Checks `S(ρ_a^{⊗n}) = n S(ρ_a)` for every letter.
pub fn block_alphabet(a: &Alphabet, n: usize) -> Result<Alphabet> {
    if n == 0 {
        return Err(Error::argument("block length must be at least 1"));
    }
    capacity::checked_power(a.dim(), n, crate::qcore::max_dimension())?;
    let letters = a
        .letters()
        .iter()
        .map(|l| tensor_power(l, n))
        .collect::<Result<Vec<_>>>()?;
    for (orig, blocked) in a.letters().iter().zip(&letters) {
        let defect = (blocked.entropy()? - n as f64 * orig.entropy()?).abs();
        if defect > 1e-9 {
            return Err(Error::validation(Invariant::EntropyAdditivity, defect));
        }
    }
    Alphabet::new(letters, a.probs().to_vec())
}

/// Per-original-letter figures after agreeing to send blocks of `n` copies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockingPoint {
    pub n: usize,
    /// `C' / n`.
    pub comm_bits_per_letter: f64,
    /// `E' / n` in bits.
    pub energy_bits_per_letter: f64,
    pub avg_letter_entropy: f64,
    pub capacity_bits: f64,
}

/// Blocking points for `n = 1..=max_n`.
pub fn blocking_sequence(a: &Alphabet, max_n: usize) -> Result<Vec<BlockingPoint>> {
    let avg = avg_letter_entropy(a)?;
    let m = a.capacity_bits();
    (1..=max_n)
        .map(|n| {
            let blocked = block_alphabet(a, n)?;
            let p = tradeoff_point(&blocked, &ThermalContext::natural())?;
            let nf = n as f64;
            Ok(BlockingPoint {
                n,
                comm_bits_per_letter: p.comm_bits / nf,
                energy_bits_per_letter: p.energy_bits / nf,
                avg_letter_entropy: avg,
                capacity_bits: m,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::holevo_chi;
    use crate::qcore::{CVector, DensityMatrix, PureState, C64};

    fn basis(i: usize) -> DensityMatrix {
        DensityMatrix::basis(&[2], i).unwrap()
    }

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            CVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]),
            vec![2],
        )
        .unwrap()
        .to_density()
    }

    fn close(p: &TradeoffPoint, e: f64, c: f64, s: f64, m: f64) {
        assert!((p.energy_bits - e).abs() < 1e-12, "{p:?}");
        assert!((p.comm_bits - c).abs() < 1e-12, "{p:?}");
        assert!((p.avg_letter_entropy - s).abs() < 1e-12, "{p:?}");
        assert!((p.capacity_bits - m).abs() < 1e-12, "{p:?}");
        assert!(p.identity_residual.abs() < 1e-12);
    }

    #[test]
    fn tradeoff_examples() {
        let ctx = ThermalContext::natural();
        let orth = Alphabet::uniform(vec![basis(0), basis(1)]).unwrap();
        close(&tradeoff_point(&orth, &ctx).unwrap(), 0.0, 1.0, 0.0, 1.0);
        let single = Alphabet::uniform(vec![basis(0)]).unwrap();
        close(&tradeoff_point(&single, &ctx).unwrap(), 1.0, 0.0, 0.0, 1.0);
        let useless =
            Alphabet::uniform(vec![DensityMatrix::maximally_mixed(&[2]).unwrap()]).unwrap();
        close(&tradeoff_point(&useless, &ctx).unwrap(), 0.0, 0.0, 1.0, 1.0);
    }

    #[test]
    fn curve_examples() {
        let ctx = ThermalContext::natural();
        let orth = Alphabet::uniform(vec![basis(0), basis(1)]).unwrap();
        let c = tradeoff_curve(&orth, &ctx).unwrap();
        assert!((c.max_comm.comm_bits - 1.0).abs() < 1e-12 && c.max_comm.energy_bits.abs() < 1e-12);
        assert_eq!(
            (c.max_energy.comm_bits, c.max_energy.energy_bits),
            (0.0, 1.0)
        );

        let same = Alphabet::uniform(vec![plus(), plus()]).unwrap();
        let c = tradeoff_curve(&same, &ctx).unwrap();
        assert!(c.max_comm.comm_bits.abs() < 1e-12 && (c.max_comm.energy_bits - 1.0).abs() < 1e-12);

        let mixed = Alphabet::uniform(vec![basis(0), plus()]).unwrap();
        let c = tradeoff_curve(&mixed, &ctx).unwrap();
        let chi = holevo_chi(&mixed).unwrap();
        assert!((c.max_comm.comm_bits - chi).abs() < 1e-15);
        assert!((c.max_comm.energy_bits - (1.0 - chi)).abs() < 1e-12);
        assert!(c.is_achievable(0.3, 0.5));
        assert!(!c.is_achievable(0.3, 0.8));
        assert!(!c.is_achievable(0.7, 0.0));
        let boundary = c.boundary(4);
        assert_eq!(boundary.len(), 5);
        for p in boundary {
            assert!(c.is_achievable(p.comm_bits, p.energy_bits));
        }
    }

    #[test]
    fn blocking_orthogonal_pair() {
        let orth = Alphabet::uniform(vec![basis(0), basis(1)]).unwrap();
        let once = block_alphabet(&orth, 1).unwrap();
        assert_eq!(once, orth);
        let twice = block_alphabet(&orth, 2).unwrap();
        let chi2 = holevo_chi(&twice).unwrap();
        assert!((chi2 - 1.0).abs() < 1e-12);
        assert!(chi2 < 2.0 * holevo_chi(&orth).unwrap());
        assert!((twice.capacity_bits() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn blocking_improves_work_per_letter() {
        let a = Alphabet::uniform(vec![basis(0), plus()]).unwrap();
        let seq = blocking_sequence(&a, 4).unwrap();
        for w in seq.windows(2) {
            assert!(w[1].energy_bits_per_letter >= w[0].energy_bits_per_letter - 1e-12);
        }
        for p in &seq {
            assert!(p.energy_bits_per_letter <= p.capacity_bits - p.avg_letter_entropy + 1e-12);
            // E'/n = M - C'/n - <S_a>
            let rhs = p.capacity_bits - p.comm_bits_per_letter - p.avg_letter_entropy;
            assert!((p.energy_bits_per_letter - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn blocking_respects_capacity() {
        let a = Alphabet::uniform(vec![basis(0), plus()]).unwrap();
        assert!(matches!(
            block_alphabet(&a, 20),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(block_alphabet(&a, 0), Err(Error::Argument(_))));
    }
}
