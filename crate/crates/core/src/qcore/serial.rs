//! JSON representation of complex matrices: an array of rows, each row an
//! array of `[re, im]` pairs of IEEE-754 doubles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRepr(pub Vec<Vec<[f64; 2]>>);

impl From<&CMatrix> for MatrixRepr {
    fn from(m: &CMatrix) -> Self {
        MatrixRepr(
            m.row_iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        )
    }
}

impl TryFrom<&MatrixRepr> for CMatrix {
    type Error = Error;

    fn try_from(repr: &MatrixRepr) -> Result<Self> {
        let rows = repr.0.len();
        let cols = repr.0.first().map_or(0, Vec::len);
        if let Some(bad) = repr.0.iter().position(|r| r.len() != cols) {
            return Err(Error::argument(format!(
                "ragged matrix: row {bad} has {} entries, expected {cols}",
                repr.0[bad].len()
            )));
        }
        Ok(CMatrix::from_fn(rows, cols, |r, c| {
            let [re, im] = repr.0[r][c];
            C64::new(re, im)
        }))
    }
}

pub fn matrix_to_json(m: &CMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixRepr::from(m)).expect("matrix serializes")
}

pub fn matrix_from_json(value: &serde_json::Value) -> Result<CMatrix> {
    let repr: MatrixRepr = serde_json::from_value(value.clone())?;
    CMatrix::try_from(&repr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout_is_row_major_pairs() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.6, 0.0),
                C64::new(0.0, 0.2),
                C64::new(0.0, -0.2),
                C64::new(0.4, 0.0),
            ],
        );
        let json = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        assert_eq!(json, "[[[0.6,0.0],[0.0,0.2]],[[0.0,-0.2],[0.4,0.0]]]");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let v = serde_json::json!([[[1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]);
        assert!(matrix_from_json(&v).is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip_is_bit_exact(entries in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 9)) {
            let m = CMatrix::from_fn(3, 3, |r, c| {
                let (re, im) = entries[r * 3 + c];
                C64::new(re, im)
            });
            let text = serde_json::to_string(&matrix_to_json(&m)).unwrap();
            let back = matrix_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
