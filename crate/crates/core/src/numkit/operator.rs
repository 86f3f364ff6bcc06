use alloc::vec;
use alloc::vec::Vec;

use super::{cabs, hermitian_eig, qubits_for, StateVector, Tensor, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense square complex matrix, row-major.
///
/// `hermitian` is a promise made by the constructor: outer products,
/// projectors and sums or conjugations of Hermitian operators keep it, and
/// [`Operator::into_hermitian`] sets it after checking.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: Vec<C64>,
    dim: usize,
    hermitian: bool,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self { data: vec![ZERO; dim * dim], dim, hermitian: true }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Self { data, dim, hermitian: false })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { data, dim, hermitian: false }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = C64::new(v, 0.0);
        }
        m
    }

    /// `|a><b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Self {
        let dim = a.dim();
        let mut data = Vec::with_capacity(dim * dim);
        for x in a.amplitudes() {
            data.extend(b.amplitudes().iter().map(|y| x * y.conj()));
        }
        let hermitian = a == b;
        Self { data, dim, hermitian }
    }

    /// Adds `weight |v><v|` in place.
    pub fn add_projector(&mut self, weight: f64, v: &StateVector) {
        let dim = self.dim;
        let amps = v.amplitudes();
        for (i, x) in amps.iter().enumerate() {
            if *x == ZERO {
                continue;
            }
            let wx = x * weight;
            let row = &mut self.data[i * dim..(i + 1) * dim];
            for (r, y) in row.iter_mut().zip(amps) {
                *r += wx * y.conj();
            }
        }
    }

    /// Checks Hermiticity to [`HERMITIAN_TOL`] and sets the flag.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let deviation = self.hermitian_deviation();
        if deviation >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub(crate) fn assume_hermitian(mut self) -> Self {
        self.hermitian = true;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        qubits_for(self.dim)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.hermitian = false;
        self.data[i * self.dim + j] = value;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Result<StateVector> {
        StateVector::new((0..self.dim).map(|i| self.get(i, j)).collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::from_fn(self.dim, |i, j| self.get(j, i).conj());
        m.hermitian = self.hermitian;
        m
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max(cabs(self.get(i, j) - self.get(j, i).conj()));
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| cabs(a - b)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|&a| cabs(a)).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        super::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let dst = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for (d, b) in dst.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *d += a * b;
                }
            }
        }
        Ok(Self { data: out, dim: n, hermitian: false })
    }

    /// `U self U^dag`; keeps the Hermitian flag.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        let mut out = u.matmul(self)?.matmul(&u.adjoint())?;
        out.hermitian = self.hermitian;
        Ok(out)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        let amps = v.amplitudes();
        let out = (0..self.dim).map(|i| self.row(i).iter().zip(amps).map(|(a, b)| a * b).sum()).collect();
        StateVector::new(out)
    }

    /// `<v|self|v>`.
    pub fn expectation(&self, v: &StateVector) -> C64 {
        let amps = v.amplitudes();
        (0..self.dim).map(|i| amps[i].conj() * self.row(i).iter().zip(amps).map(|(a, b)| a * b).sum::<C64>()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { data: self.data.iter().map(|a| a * factor).collect(), dim: self.dim, hermitian: self.hermitian }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            dim: self.dim,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    pub fn add_assign_scaled(&mut self, factor: f64, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
        self.hermitian &= other.hermitian;
        Ok(())
    }

    /// Half the trace norm of `self - other`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?;
        if !diff.hermitian {
            return Err(Error::NotHermitian { deviation: diff.hermitian_deviation() });
        }
        let spec = hermitian_eig(&diff)?;
        Ok(0.5 * spec.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Checks the density-operator invariants: Hermitian flag, unit trace and
    /// spectrum above `-1e-10`.
    pub fn check_density(&self) -> Result<()> {
        if !self.hermitian {
            return Err(Error::NotHermitian { deviation: self.hermitian_deviation() });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity("trace differs from 1"));
        }
        let spec = hermitian_eig(self)?;
        if let Some(&low) = spec.eigenvalues.first() {
            if low < -1e-10 {
                return Err(Error::NegativeEigenvalue(low));
            }
        }
        Ok(())
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + j * m + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Self { data, dim, hermitian: self.hermitian && other.hermitian }
    }
}
