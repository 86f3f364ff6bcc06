//! Collective spin operators on qubit registers, each qubit a spin-½ with
//! `|1⟩` as the `m = +½` state.

use alloc::vec;
use alloc::vec::Vec;

use crate::numkit::{cabs, StateVector, C64, ZERO};

/// `S_-`: lowers one `|1⟩` to `|0⟩`, summed over qubits.
pub fn lower(v: &StateVector) -> StateVector {
    flip(v, true)
}

/// `S_+`.
pub fn raise(v: &StateVector) -> StateVector {
    flip(v, false)
}

fn flip(v: &StateVector, lowering: bool) -> StateVector {
    let n = v.n_qubits();
    let mut out = vec![ZERO; v.dim()];
    for (i, a) in v.amplitudes().iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        for b in 0..n {
            let set = (i >> b) & 1 == 1;
            if set == lowering {
                out[i ^ (1 << b)] += *a;
            }
        }
    }
    StateVector::new(out).expect("same dimension")
}

/// `S_z |v⟩`.
pub fn sz(v: &StateVector) -> StateVector {
    let n = v.n_qubits() as f64;
    let out: Vec<C64> = v.amplitudes().iter().enumerate().map(|(i, a)| a * (i.count_ones() as f64 - n / 2.0)).collect();
    StateVector::new(out).expect("same dimension")
}

/// `S² |v⟩ = (S_z² + (S_+S_- + S_-S_+)/2) |v⟩`.
pub fn spin_squared(v: &StateVector) -> StateVector {
    let mut out = sz(&sz(v));
    let pm = raise(&lower(v));
    let mp = lower(&raise(v));
    out.add_scaled(C64::new(0.5, 0.0), &pm);
    out.add_scaled(C64::new(0.5, 0.0), &mp);
    out
}

/// Largest entry of `|S² v - j(j+1) v|` and `|S_z v - m v|`.
pub fn eigen_residual(v: &StateVector, j: usize, m: i32) -> f64 {
    let jj = (j * (j + 1)) as f64;
    let mut s2 = spin_squared(v);
    s2.add_scaled(C64::new(-jj, 0.0), v);
    let mut z = sz(v);
    z.add_scaled(C64::new(-(m as f64), 0.0), v);
    s2.amplitudes().iter().chain(z.amplitudes()).map(|a| cabs(*a)).fold(0.0, f64::max)
}
