use crate::error::{Error, Result};

use super::capacity::{check_against, max_dimension};
use super::{CMatrix, DensityMatrix, C64};

/// `a ⊗ b` with the global capacity.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    tensor_with_capacity(a, b, max_dimension())
}

pub fn tensor_with_capacity(
    a: &DensityMatrix,
    b: &DensityMatrix,
    limit: usize,
) -> Result<DensityMatrix> {
    let d = a.dim().checked_mul(b.dim()).ok_or(Error::Capacity {
        requested: usize::MAX,
        limit,
    })?;
    check_against(d, limit)?;
    let data = a.matrix().kronecker(b.matrix());
    let dims = a.dims().iter().chain(b.dims()).copied().collect();
    Ok(DensityMatrix::from_parts_unchecked(data, dims))
}

/// `rho^{⊗n}` for `n >= 1`.
pub fn tensor_power(rho: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::argument("tensor power needs n >= 1"));
    }
    super::capacity::checked_power(rho.dim(), n, max_dimension())?;
    let mut acc = rho.clone();
    for _ in 1..n {
        acc = tensor(&acc, rho)?;
    }
    Ok(acc)
}

/// Reduced state on the subsystems listed in `keep` (order-insensitive; the
/// result follows the original subsystem order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::argument("partial trace needs a nonempty keep set"));
    }
    let (data, dims) = reduce(rho.matrix(), rho.dims(), keep)?;
    Ok(DensityMatrix::from_parts_unchecked(data, dims))
}

/// Partial trace on a raw matrix; an empty keep set yields the 1x1 full trace.
pub(crate) fn reduce(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<(CMatrix, Vec<usize>)> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::argument(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let kept_offsets = offsets(dims, &keep);
    let traced_offsets = offsets(dims, &traced);
    let dk = kept_offsets.len();

    let mut out = CMatrix::zeros(dk, dk);
    for (r, &row) in kept_offsets.iter().enumerate() {
        for (c, &col) in kept_offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += m[(row + t, col + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok((out, keep.iter().map(|&k| dims[k]).collect()))
}

/// Row-major strides of each subsystem.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Full-space offsets of every joint basis state of `subsystems`, enumerated
/// with the first listed subsystem as the most significant digit.
pub(crate) fn offsets(dims: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &s in subsystems {
        let stride = st[s];
        out = out
            .iter()
            .flat_map(|&base| (0..dims[s]).map(move |digit| base + digit * stride))
            .collect();
    }
    out
}

/// Digit of `subsystem` in the joint basis index `index`.
pub(crate) fn digit(dims: &[usize], index: usize, subsystem: usize) -> usize {
    (index / strides(dims)[subsystem]) % dims[subsystem]
}
