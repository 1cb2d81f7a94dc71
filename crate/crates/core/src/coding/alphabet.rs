use serde::{Deserialize, Serialize};

use crate::error::{Error, Invariant, Result};
use crate::qcore::serial::MatrixRepr;
use crate::qcore::{CMatrix, DensityMatrix};
use crate::tolerance;

/// Ensemble of equal-dimension letters and their usage probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    letters: Vec<DensityMatrix>,
    probs: Vec<f64>,
}

impl Alphabet {
    pub fn new(letters: Vec<DensityMatrix>, probs: Vec<f64>) -> Result<Self> {
        let first = letters
            .first()
            .ok_or_else(|| Error::argument("an alphabet needs at least one letter"))?;
        if letters.len() != probs.len() {
            return Err(Error::argument(format!(
                "{} letters but {} probabilities",
                letters.len(),
                probs.len()
            )));
        }
        if let Some(bad) = letters.iter().find(|l| l.dims() != first.dims()) {
            return Err(Error::argument(format!(
                "letters disagree on dimensions: {:?} vs {:?}",
                bad.dims(),
                first.dims()
            )));
        }
        if let Some(&p) = probs.iter().find(|&&p| p < 0.0 || p.is_nan()) {
            return Err(Error::validation(Invariant::NegativeProbability, -p));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tolerance::STATE {
            return Err(Error::validation(
                Invariant::ProbabilitySum,
                (total - 1.0).abs(),
            ));
        }
        Ok(Self { letters, probs })
    }

    /// Letters used with equal frequency.
    pub fn uniform(letters: Vec<DensityMatrix>) -> Result<Self> {
        let n = letters.len().max(1);
        Self::new(letters, vec![1.0 / n as f64; n])
    }

    pub fn letters(&self) -> &[DensityMatrix] {
        &self.letters
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter dimension `d`.
    pub fn dim(&self) -> usize {
        self.letters[0].dim()
    }

    pub fn dims(&self) -> &[usize] {
        self.letters[0].dims()
    }

    /// `M = log2 d`; not necessarily an integer.
    pub fn capacity_bits(&self) -> f64 {
        (self.dim() as f64).log2()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: AlphabetFile = serde_json::from_str(text)?;
        file.into_alphabet()
    }

    pub fn to_file(&self) -> AlphabetFile {
        AlphabetFile {
            dims: DimsRepr::Subsystems(self.dims().to_vec()),
            letters: self
                .letters
                .iter()
                .map(|l| MatrixRepr::from(l.matrix()))
                .collect(),
            probs: self.probs.clone(),
        }
    }
}

/// On-disk alphabet: `{"dims": d, "letters": [matrix, ...], "probs": [...]}`.
///
/// `dims` is either the total letter dimension or the list of subsystem
/// dimensions; matrices use [`MatrixRepr`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphabetFile {
    pub dims: DimsRepr,
    pub letters: Vec<MatrixRepr>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DimsRepr {
    Total(usize),
    Subsystems(Vec<usize>),
}

impl AlphabetFile {
    pub fn into_alphabet(self) -> Result<Alphabet> {
        let dims = match self.dims {
            DimsRepr::Total(d) => vec![d],
            DimsRepr::Subsystems(v) => v,
        };
        let letters = self
            .letters
            .iter()
            .map(|repr| DensityMatrix::new(CMatrix::try_from(repr)?, dims.clone()))
            .collect::<Result<Vec<_>>>()?;
        Alphabet::new(letters, self.probs)
    }
}

/// `ρ_B = Σ p_a ρ_a`, the average state leaving the emitter.
pub fn ensemble_state(a: &Alphabet) -> DensityMatrix {
    let d = a.dim();
    let data = a
        .letters
        .iter()
        .zip(&a.probs)
        .fold(CMatrix::zeros(d, d), |acc, (l, &p)| {
            acc + l.matrix().scale(p)
        });
    DensityMatrix::from_parts_unchecked(data, a.dims().to_vec())
}

/// `<S_a> = Σ p_a S(ρ_a)`.
pub fn avg_letter_entropy(a: &Alphabet) -> Result<f64> {
    a.letters
        .iter()
        .zip(&a.probs)
        .map(|(l, &p)| Ok(p * l.entropy()?))
        .sum()
}

/// Holevo information `χ = S(ρ_B) - <S_a>`, bits.
pub fn holevo_chi(a: &Alphabet) -> Result<f64> {
    Ok(ensemble_state(a).entropy()? - avg_letter_entropy(a)?)
}
