//! Permutations of qubit wires.
//!
//! A permutation `perm` moves the qubit on wire `k` to wire `perm[k]`, so
//! applying `first` and then `second` equals applying `compose(second, first)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numkit::{Operator, StateVector, C64};

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = alloc::vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// `outer ∘ inner`: wire `k` goes to `outer[inner[k]]`.
pub fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&k| outer[k]).collect()
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = alloc::vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// All `n!` permutations in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let pivot = i - 1;
        let j = (pivot + 1..n).rev().find(|&j| cur[j] > cur[pivot]).expect("successor exists");
        cur.swap(pivot, j);
        cur[i..].reverse();
    }
    out
}

/// Moves the bits of an `n`-bit index (qubit 0 most significant) according
/// to `perm`.
#[inline]
pub fn permute_index(index: usize, n: usize, perm: &[usize]) -> usize {
    let mut out = 0;
    for (k, &target) in perm.iter().enumerate() {
        let bit = (index >> (n - 1 - k)) & 1;
        out |= bit << (n - 1 - target);
    }
    out
}

pub fn permute_register(state: &StateVector, perm: &[usize]) -> Result<StateVector> {
    let n = state.n_qubits();
    if perm.len() != n || !is_permutation(perm) {
        return Err(Error::InvalidPermutation(perm.len()));
    }
    let mut out = StateVector::zeros(n).with_layout(state.layout())?;
    let amps = out.amplitudes_mut();
    for (i, a) in state.amplitudes().iter().enumerate() {
        amps[permute_index(i, n, perm)] = *a;
    }
    Ok(out)
}

/// Unitary matrix of a wire permutation on an `n`-qubit register.
pub fn permutation_operator(n: usize, perm: &[usize]) -> Result<Operator> {
    if perm.len() != n || !is_permutation(perm) {
        return Err(Error::InvalidPermutation(perm.len()));
    }
    let dim = 1 << n;
    let mut data = alloc::vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        data[permute_index(i, n, perm) * dim + i] = C64::new(1.0, 0.0);
    }
    Operator::from_vec(dim, data)
}
