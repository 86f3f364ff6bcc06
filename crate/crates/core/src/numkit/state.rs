use alloc::vec;
use alloc::vec::Vec;

use super::{cabs, qubits_for, sqrt, Operator, Tensor, C64, ZERO};
use crate::error::{Error, Result};

/// Qubit ordering of a register.
///
/// Qubit 0 is the most significant bit of the computational index. A
/// bipartite layout places Alice's `alice` qubits first, then Bob's `bob`
/// qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Register,
    Bipartite { alice: usize, bob: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    n_qubits: usize,
    layout: Layout,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for(amps.len()).ok_or(Error::NotPowerOfTwo(amps.len()))?;
        Ok(Self { amps, n_qubits, layout: Layout::Register })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps, n_qubits, layout: Layout::Register }
    }

    pub fn zeros(n_qubits: usize) -> Self {
        Self { amps: vec![ZERO; 1 << n_qubits], n_qubits, layout: Layout::Register }
    }

    pub fn with_layout(mut self, layout: Layout) -> Result<Self> {
        if let Layout::Bipartite { alice, bob } = layout {
            if alice + bob != self.n_qubits {
                return Err(Error::DimensionMismatch { expected: self.n_qubits, found: alice + bob });
            }
        }
        self.layout = layout;
        Ok(self)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    /// Scales to unit norm and returns the norm it had. A zero vector is
    /// left untouched.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
        n
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|`, the quantity used for phase-insensitive comparison.
    pub fn overlap(&self, other: &Self) -> f64 {
        cabs(self.inner(other))
    }

    pub fn scale(&mut self, factor: C64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    pub fn add_scaled(&mut self, factor: C64, other: &Self) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| cabs(a - b)).fold(0.0, f64::max)
    }

    /// `|self><self|`.
    pub fn density(&self) -> Operator {
        Operator::outer(self, self)
    }

    /// Applies `op` to the Alice half of a bipartite register, `(op ⊗ I)|self>`.
    pub fn apply_alice(&self, op: &Operator) -> Result<Self> {
        let (alice, bob) = self.split()?;
        let (da, db) = (1usize << alice, 1usize << bob);
        if op.dim() != da {
            return Err(Error::DimensionMismatch { expected: da, found: op.dim() });
        }
        let mut out = vec![ZERO; self.amps.len()];
        for a in 0..da {
            for a2 in 0..da {
                let m = op.get(a, a2);
                if m == ZERO {
                    continue;
                }
                let src = &self.amps[a2 * db..(a2 + 1) * db];
                for (o, s) in out[a * db..(a + 1) * db].iter_mut().zip(src) {
                    *o += m * s;
                }
            }
        }
        Ok(Self { amps: out, n_qubits: self.n_qubits, layout: self.layout })
    }

    /// Applies `op` to the Bob half of a bipartite register, `(I ⊗ op)|self>`.
    pub fn apply_bob(&self, op: &Operator) -> Result<Self> {
        let (alice, bob) = self.split()?;
        let (da, db) = (1usize << alice, 1usize << bob);
        if op.dim() != db {
            return Err(Error::DimensionMismatch { expected: db, found: op.dim() });
        }
        let mut out = vec![ZERO; self.amps.len()];
        for a in 0..da {
            let src = &self.amps[a * db..(a + 1) * db];
            let dst = &mut out[a * db..(a + 1) * db];
            for (b, d) in dst.iter_mut().enumerate() {
                *d = (0..db).map(|b2| op.get(b, b2) * src[b2]).sum();
            }
        }
        Ok(Self { amps: out, n_qubits: self.n_qubits, layout: self.layout })
    }

    fn split(&self) -> Result<(usize, usize)> {
        match self.layout {
            Layout::Bipartite { alice, bob } => Ok((alice, bob)),
            Layout::Register => Err(Error::InvalidDensity("state has no Alice/Bob layout")),
        }
    }
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Self { amps, n_qubits: self.n_qubits + other.n_qubits, layout: Layout::Register }
    }
}

/// Reorders a state written with interleaved pair labels (qubit `2k` is
/// Alice's half of pair `k`, qubit `2k+1` is Bob's) into the block layout
/// `[Alice 0..N][Bob 0..N]`.
pub fn interleaved_to_blocks(state: &StateVector) -> Result<StateVector> {
    let n = state.n_qubits();
    if !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: n + 1, found: n });
    }
    let pairs = n / 2;
    let mut out = vec![ZERO; state.dim()];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let mut target = 0usize;
        for k in 0..pairs {
            let a = (idx >> (n - 1 - 2 * k)) & 1;
            let b = (idx >> (n - 2 - 2 * k)) & 1;
            target |= a << (n - 1 - k);
            target |= b << (n - 1 - pairs - k);
        }
        out[target] = *amp;
    }
    StateVector::new(out)?.with_layout(Layout::Bipartite { alice: pairs, bob: pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> usize {
        usize::from_str_radix(s, 2).unwrap()
    }

    #[test]
    fn basis_tensor_product() {
        let ket = StateVector::basis(1, 0).tensor(&StateVector::basis(1, 1));
        assert_eq!(ket, StateVector::basis(2, 1));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(StateVector::from_real(&[1.0, 0.0, 0.0]), Err(Error::NotPowerOfTwo(3)));
    }

    #[test]
    fn normalize_reaches_unit_norm() {
        let mut v = StateVector::from_real(&[3.0, 4.0]).unwrap();
        assert_eq!(v.normalize(), 5.0);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_of_bell_pairs_matches_hand_expansion() {
        // (a|00> + b|11>)^{⊗2} in pair-major order is a^2|0000> + ab|0011>
        // + ab|1100> + b^2|1111>; in block layout the middle terms move to
        // |0101> and |1010>.
        let (a, b) = (0.6, 0.8);
        let pair = StateVector::from_real(&[a, 0.0, 0.0, b]).unwrap();
        let two = pair.tensor(&pair);
        let mut expected = [0.0; 16];
        expected[bits("0000")] = a * a;
        expected[bits("0011")] = a * b;
        expected[bits("1100")] = a * b;
        expected[bits("1111")] = b * b;
        assert!(two.max_abs_diff(&StateVector::from_real(&expected).unwrap()) < 1e-15);

        let blocks = interleaved_to_blocks(&two).unwrap();
        assert!((blocks.amplitudes()[bits("0101")].re - a * b).abs() < 1e-15);
        assert!((blocks.amplitudes()[bits("1010")].re - a * b).abs() < 1e-15);
        assert_eq!(blocks.layout(), Layout::Bipartite { alice: 2, bob: 2 });
    }

    #[test]
    fn interleaved_map_moves_bob_qubits_back() {
        // q1 q2 q3 q4 = 0 1 1 0 -> Alice (q1,q3) = 01, Bob (q2,q4) = 10
        let v = StateVector::basis(4, bits("0110"));
        let w = interleaved_to_blocks(&v).unwrap();
        assert_eq!(w.amplitudes()[bits("0110")].re, 1.0);
        let v = StateVector::basis(4, bits("0011"));
        let w = interleaved_to_blocks(&v).unwrap();
        assert_eq!(w.amplitudes()[bits("0101")].re, 1.0);
    }

    #[test]
    fn local_application_acts_on_one_side() {
        let x = Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = StateVector::basis(2, 0).with_layout(Layout::Bipartite { alice: 1, bob: 1 }).unwrap();
        assert_eq!(v.apply_alice(&x).unwrap().amplitudes()[2].re, 1.0);
        assert_eq!(v.apply_bob(&x).unwrap().amplitudes()[1].re, 1.0);
        assert!(StateVector::basis(2, 0).apply_alice(&x).is_err());
    }
}
