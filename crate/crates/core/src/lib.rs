//! Entanglement left over after the pairing order of shared qubit pairs is
//! lost.
//!
//! Alice and Bob hold `N = 2J` pairs `α|00⟩ + β|11⟩`. When Bob's qubits are
//! shuffled by an unknown permutation the joint state becomes a mixture that
//! is block diagonal in the coupled angular-momentum basis of each side. This
//! crate builds that basis, the shuffled state both by brute-force
//! permutation averaging and in closed form, simulates the local
//! measure-and-rotate distillation protocol, constructs the matching
//! separable reference state, and evaluates the entropic quantities that
//! compare entanglement lost with classical information lost.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod coupled_basis;
pub mod distill;
pub mod error;
pub mod numkit;
pub mod permutation;
pub mod quantities;
pub mod states;

pub use error::{Error, Result};
