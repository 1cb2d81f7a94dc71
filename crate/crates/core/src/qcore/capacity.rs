use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Largest dense Hilbert-space dimension accepted by default (2^14).
pub const DEFAULT_MAX_DIMENSION: usize = 1 << 14;

static MAX_DIMENSION: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIMENSION);

/// Current process-wide capacity for dense representations.
pub fn max_dimension() -> usize {
    MAX_DIMENSION.load(Ordering::Relaxed)
}

/// Replace the process-wide capacity. Values below 4 are raised to 4.
pub fn set_max_dimension(limit: usize) {
    MAX_DIMENSION.store(limit.max(4), Ordering::Relaxed);
}

pub fn check_capacity(requested: usize) -> Result<()> {
    check_against(requested, max_dimension())
}

pub(crate) fn check_against(requested: usize, limit: usize) -> Result<()> {
    if requested > limit {
        Err(Error::Capacity { requested, limit })
    } else {
        Ok(())
    }
}

/// `base^exp` with overflow mapped to a capacity error against `limit`.
pub(crate) fn checked_power(base: usize, exp: usize, limit: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(Error::Capacity {
            requested: usize::MAX,
            limit,
        })?;
        check_against(acc, limit)?;
    }
    Ok(acc)
}
