use alloc::vec;
use alloc::vec::Vec;

use super::{Operator, ZERO};
use crate::error::{Error, Result};

/// Subsystem split of an `n`-qubit register into single qubits.
pub fn qubit_dims(n: usize) -> Vec<usize> {
    vec![2; n]
}

/// Traces out every subsystem not listed in `keep`.
///
/// `dims` lists subsystem dimensions with subsystem 0 most significant. The
/// kept subsystems appear in the result in their original relative order,
/// whatever the order of `keep`.
pub fn partial_trace(rho: &Operator, dims: &[usize], keep: &[usize]) -> Result<Operator> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: total });
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::OutOfRange { what: "subsystem index", value: bad as i64 });
    }
    let kept: Vec<bool> = (0..dims.len()).map(|s| keep.contains(&s)).collect();
    let kept_dim: usize = dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let traced_dim = total / kept_dim;

    // (full index, kept index) grouped by traced index.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
    for full in 0..total {
        let (mut rem, mut k_idx, mut t_idx) = (full, 0usize, 0usize);
        let (mut k_stride, mut t_stride) = (1usize, 1usize);
        for s in (0..dims.len()).rev() {
            let digit = rem % dims[s];
            rem /= dims[s];
            if kept[s] {
                k_idx += digit * k_stride;
                k_stride *= dims[s];
            } else {
                t_idx += digit * t_stride;
                t_stride *= dims[s];
            }
        }
        groups[t_idx].push((full, k_idx));
    }

    let mut out = vec![ZERO; kept_dim * kept_dim];
    for group in &groups {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[ki * kept_dim + kj] += rho.get(i, j);
            }
        }
    }
    let op = Operator::from_vec(kept_dim, out)?;
    Ok(if rho.is_hermitian() { op.assume_hermitian() } else { op })
}
