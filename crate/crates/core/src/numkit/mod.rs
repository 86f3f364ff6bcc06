//! Dense complex linear algebra over qubit registers.
//!
//! Everything here is deliberately small and dependency free: row-major
//! complex matrices, a cyclic Jacobi eigensolver for Hermitian operators,
//! partial traces over arbitrary subsystem splits, and the entropies built on
//! top of them. All logarithms are base 2.

mod eig;
mod entropy;
mod operator;
mod partial;
mod state;

pub use eig::{hermitian_eig, Spectrum};
pub use entropy::{relative_entropy, shannon_entropy, von_neumann_entropy, xlog2x};
pub use operator::Operator;
pub use partial::{partial_trace, qubit_dims};
pub use state::{interleaved_to_blocks, Layout, StateVector};

pub type C64 = num_complex::Complex<f64>;

/// Tensor (Kronecker) product; the left factor supplies the most significant
/// index digits.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

// libm keeps results bit-identical across targets, which the reproducibility
// contract of the CLI relies on.
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

#[inline]
pub(crate) fn cabs(z: C64) -> f64 {
    hypot(z.re, z.im)
}

/// Returns `log2(n)` when `n` is a power of two.
pub(crate) fn qubits_for(n: usize) -> Option<usize> {
    if n.is_power_of_two() {
        Some(n.trailing_zeros() as usize)
    } else {
        None
    }
}
