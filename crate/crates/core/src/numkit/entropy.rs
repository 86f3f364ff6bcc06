use super::{hermitian_eig, log2, Operator, Spectrum};
use crate::error::{Error, Result};

/// Eigenvalues in `[CLAMP, 0)` are roundoff and count as zero.
const CLAMP: f64 = -1e-10;
/// Eigenvalues of the reference state at or below this are its kernel.
const SUPPORT: f64 = 1e-12;
/// Weight of sigma allowed on the kernel of rho before the relative entropy
/// is declared infinite.
const LEAKAGE: f64 = 1e-10;

/// `x log2 x` with the `0 log 0 = 0` convention.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * log2(x)
    }
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

fn clamped(spec: &Spectrum) -> Result<impl Iterator<Item = f64> + '_> {
    if let Some(&low) = spec.eigenvalues.first() {
        if low < CLAMP {
            return Err(Error::NegativeEigenvalue(low));
        }
    }
    Ok(spec.eigenvalues.iter().map(|&l| l.max(0.0)))
}

fn check_trace(rho: &Operator) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::InvalidDensity("trace differs from 1"));
    }
    Ok(())
}

/// Von Neumann entropy `-tr rho log2 rho` in bits.
pub fn von_neumann_entropy(rho: &Operator) -> Result<f64> {
    check_trace(rho)?;
    let spec = hermitian_eig(rho)?;
    let s = -clamped(&spec)?.map(xlog2x).sum::<f64>();
    Ok(s.max(0.0))
}

/// Relative entropy `S(sigma || rho) = tr sigma log2 sigma - tr sigma log2 rho`.
///
/// Returns [`Error::InfiniteRelativeEntropy`] when sigma has weight on the
/// kernel of rho.
pub fn relative_entropy(sigma: &Operator, rho: &Operator) -> Result<f64> {
    if sigma.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: sigma.dim(), found: rho.dim() });
    }
    check_trace(sigma)?;
    check_trace(rho)?;
    let s_spec = hermitian_eig(sigma)?;
    let r_spec = hermitian_eig(rho)?;
    let neg_entropy: f64 = clamped(&s_spec)?.map(xlog2x).sum();
    let r_vals: alloc::vec::Vec<f64> = clamped(&r_spec)?.collect();

    let mut cross = 0.0;
    let mut leakage = 0.0;
    for (k, &mu) in r_vals.iter().enumerate() {
        let w = r_spec.column(k);
        let weight = expectation_raw(sigma, &w);
        if mu <= SUPPORT {
            leakage += weight.max(0.0);
        } else {
            cross += weight * log2(mu);
        }
    }
    if leakage > LEAKAGE {
        return Err(Error::InfiniteRelativeEntropy { leakage });
    }
    let d = neg_entropy - cross;
    Ok(if d < 0.0 && d > -1e-10 { 0.0 } else { d })
}

fn expectation_raw(op: &Operator, w: &[super::C64]) -> f64 {
    let n = op.dim();
    let mut acc = super::ZERO;
    for i in 0..n {
        let row = op.row(i);
        let s: super::C64 = row.iter().zip(w).map(|(a, b)| a * b).sum();
        acc += w[i].conj() * s;
    }
    acc.re
}
