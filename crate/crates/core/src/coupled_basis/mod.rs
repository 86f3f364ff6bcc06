//! Coupled angular-momentum basis `{|j, m, α⟩}` of a register of `2J` qubits.
//!
//! The register splits into orthogonal sectors `H_{j,α}`, one spin-`j`
//! multiplet per multiplicity label `α = 1..=d_j`. Multiplets are generated
//! by Clebsch–Gordan coupling one qubit at a time; a coupling path is the
//! sequence of intermediate total spins, and the number of paths that end at
//! `j` is the multiplicity `d_j`.
//!
//! Label `α = 1` is pinned to the multiplet whose highest-weight member is
//! the Dicke state `|j, j⟩` on the first `2j` qubits followed by `J - j`
//! singlets. That state is a superposition of coupling paths rather than a
//! single path, so the remaining labels are the coupling paths (in
//! lexicographic order of their spin sequence) orthogonalized against it,
//! keeping the first `d_j - 1` independent ones.
//!
//! Phase convention: the highest-weight vector of every multiplet has its
//! first nonzero computational amplitude positive, and the rest of the
//! multiplet follows by repeated `S_-` with positive normalization. All
//! vectors are real, and `|j, m, α⟩` for different `m` share the same
//! multiplicity label consistently, which the block states of the shuffled
//! density operator rely on.

pub mod spin;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numkit::{sqrt, Operator, StateVector, Tensor, C64};

/// Largest supported `J` (16 qubits per side would make the basis 2^16-dim).
pub const MAX_BASIS_PAIRS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoupledLabel {
    pub j: usize,
    pub m: i32,
    /// Multiplicity label, `1..=d_j`.
    pub alpha: usize,
}

/// Where the multiplet with a given label came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathOrigin {
    /// Dicke block followed by singlets.
    Representative,
    /// Coupling path as doubled intermediate spins, one entry per qubit.
    Coupling(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct CoupledBasis {
    pairs: usize,
    /// Ordered by `j`, then `alpha`, then `m` ascending.
    vectors: Vec<(CoupledLabel, StateVector)>,
    sector_offsets: Vec<usize>,
    degeneracies: Vec<usize>,
    path_table: Vec<(usize, usize, PathOrigin)>,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Multiplicity `d_j = (2j+1)/(2J+1) · C(2J+1, J-j)` of spin `j` among `2J`
/// qubits, in exact integer arithmetic.
pub fn degeneracy(pairs: usize, j: usize) -> Result<u64> {
    if j > pairs {
        return Err(Error::OutOfRange { what: "j", value: j as i64 });
    }
    let (big, j) = (pairs as u64, j as u64);
    let num = (2 * j + 1) as u128 * binomial(2 * big + 1, big - j);
    Ok((num / (2 * big + 1) as u128) as u64)
}

/// Counts Clebsch–Gordan coupling paths of `n` spin-½ that end at doubled
/// spin `twice_j`, by walking the coupling tree.
pub fn count_coupling_paths(n: usize, twice_j: usize) -> u64 {
    // counts[t] = number of paths reaching doubled spin t after k qubits
    let mut counts = vec![0u64; n + 2];
    if n == 0 {
        return u64::from(twice_j == 0);
    }
    counts[1] = 1;
    for _ in 1..n {
        let mut next = vec![0u64; n + 2];
        for (t, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            next[t + 1] += c;
            if t >= 1 {
                next[t - 1] += c;
            }
        }
        counts = next;
    }
    counts.get(twice_j).copied().unwrap_or(0)
}

/// Symmetric Dicke state `|j, m⟩` on `2j` qubits: uniform superposition of
/// the strings with `j + m` ones.
pub fn dicke_block(j: usize, m: i32) -> Result<StateVector> {
    if m.unsigned_abs() as usize > j {
        return Err(Error::OutOfRange { what: "m", value: m as i64 });
    }
    let n = 2 * j;
    let ones = (j as i32 + m) as u32;
    let amp = 1.0 / sqrt(binomial(n as u64, ones as u64) as f64);
    let amps = (0..1usize << n)
        .map(|i| if i.count_ones() == ones { C64::new(amp, 0.0) } else { C64::new(0.0, 0.0) })
        .collect();
    StateVector::new(amps)
}

/// `(|01⟩ - |10⟩)/√2`.
pub fn singlet() -> StateVector {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_real(&[0.0, h, -h, 0.0]).expect("4 amplitudes")
}

/// `|j, m⟩ ⊗ singlet^{⊗(J-j)}` on `2J` qubits.
pub fn representative(pairs: usize, j: usize, m: i32) -> Result<StateVector> {
    if j > pairs {
        return Err(Error::OutOfRange { what: "j", value: j as i64 });
    }
    let mut v = dicke_block(j, m)?;
    let s = singlet();
    for _ in j..pairs {
        v = v.tensor(&s);
    }
    Ok(v)
}

struct Multiplet {
    twice_j: usize,
    path: Vec<usize>,
    /// Index `k` holds doubled `m = 2k - twice_j`.
    members: Vec<Vec<f64>>,
}

/// All coupled multiplets of `n` qubits, one per coupling path.
fn couple_all(n: usize) -> Vec<Multiplet> {
    let mut level = vec![Multiplet { twice_j: 1, path: vec![1], members: vec![vec![1.0, 0.0], vec![0.0, 1.0]] }];
    for _ in 1..n {
        let mut next = Vec::new();
        for mult in &level {
            let tj1 = mult.twice_j;
            let targets: &[usize] = if tj1 == 0 { &[1] } else { &[tj1 + 1, tj1 - 1] };
            for &tj in targets {
                next.push(couple_one(mult, tj));
            }
        }
        level = next;
    }
    level
}

/// Couples multiplet `j1` with one more spin-½ (appended as the least
/// significant qubit) to doubled spin `tj`, Condon–Shortley phases.
fn couple_one(mult: &Multiplet, tj: usize) -> Multiplet {
    let tj1 = mult.twice_j as i64;
    let dim = mult.members[0].len() * 2;
    let denom = 2.0 * (tj1 + 1) as f64;
    let mut members = Vec::with_capacity(tj + 1);
    for k in 0..=tj {
        let tm = 2 * k as i64 - tj as i64;
        let (up, down) = if tj as i64 == tj1 + 1 {
            (sqrt((tj1 + tm + 1) as f64 / denom), sqrt((tj1 - tm + 1) as f64 / denom))
        } else {
            (-sqrt((tj1 - tm + 1) as f64 / denom), sqrt((tj1 + tm + 1) as f64 / denom))
        };
        let mut v = vec![0.0; dim];
        // |j1, m - ½⟩|1⟩
        let tm1 = tm - 1;
        if tm1.abs() <= tj1 {
            let src = &mult.members[((tm1 + tj1) / 2) as usize];
            for (i, &a) in src.iter().enumerate() {
                v[2 * i + 1] += up * a;
            }
        }
        // |j1, m + ½⟩|0⟩
        let tm1 = tm + 1;
        if tm1.abs() <= tj1 {
            let src = &mult.members[((tm1 + tj1) / 2) as usize];
            for (i, &a) in src.iter().enumerate() {
                v[2 * i] += down * a;
            }
        }
        members.push(v);
    }
    let mut path = mult.path.clone();
    path.push(tj);
    Multiplet { twice_j: tj, path, members }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn real_lower(v: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (i, &a) in v.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for b in 0..n {
            if (i >> b) & 1 == 1 {
                out[i ^ (1 << b)] += a;
            }
        }
    }
    out
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = sqrt(dot(v, v));
    v.iter_mut().for_each(|x| *x /= n);
    n
}

fn to_state(v: &[f64]) -> StateVector {
    StateVector::from_real(v).expect("power of two")
}

/// Builds the coupled basis of `2J` qubits.
pub fn build_basis(pairs: usize) -> Result<CoupledBasis> {
    if pairs == 0 || pairs > MAX_BASIS_PAIRS {
        return Err(Error::OutOfRange { what: "J", value: pairs as i64 });
    }
    let n = 2 * pairs;
    let mut multiplets = couple_all(n);
    multiplets.sort_by(|a, b| a.path.cmp(&b.path));

    let mut vectors = Vec::with_capacity(1 << n);
    let mut sector_offsets = Vec::with_capacity(pairs + 1);
    let mut degeneracies = Vec::with_capacity(pairs + 1);
    let mut path_table = Vec::new();

    for j in 0..=pairs {
        sector_offsets.push(vectors.len());
        let d = degeneracy(pairs, j)? as usize;
        degeneracies.push(d);

        let rep: Vec<f64> = representative(pairs, j, j as i32)?.amplitudes().iter().map(|a| a.re).collect();
        let mut tops: Vec<(Vec<f64>, PathOrigin)> = vec![(rep, PathOrigin::Representative)];
        for mult in multiplets.iter().filter(|m| m.twice_j == 2 * j) {
            if tops.len() == d {
                break;
            }
            let mut r = mult.members[2 * j].clone();
            for (t, _) in &tops {
                let c = dot(t, &r);
                r.iter_mut().zip(t).for_each(|(x, y)| *x -= c * y);
            }
            // reorthogonalize once for stability
            for (t, _) in &tops {
                let c = dot(t, &r);
                r.iter_mut().zip(t).for_each(|(x, y)| *x -= c * y);
            }
            if normalize(&mut r) > 1e-8 {
                tops.push((r, PathOrigin::Coupling(mult.path.clone())));
            }
        }
        debug_assert_eq!(tops.len(), d);

        for (a, (mut top, origin)) in tops.into_iter().enumerate() {
            let alpha = a + 1;
            if let Some(first) = top.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    top.iter_mut().for_each(|x| *x = -*x);
                }
            }
            let mut ladder = vec![top];
            for _ in 0..2 * j {
                let mut next = real_lower(ladder.last().expect("non-empty"), n);
                normalize(&mut next);
                ladder.push(next);
            }
            // ladder runs m = j, j-1, ..., -j
            for (k, v) in ladder.iter().rev().enumerate() {
                let m = k as i32 - j as i32;
                vectors.push((CoupledLabel { j, m, alpha }, to_state(v)));
            }
            path_table.push((j, alpha, origin));
        }
    }

    Ok(CoupledBasis { pairs, vectors, sector_offsets, degeneracies, path_table })
}

impl CoupledBasis {
    /// `J`; the register has `2J` qubits.
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.pairs
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn degeneracy(&self, j: usize) -> usize {
        self.degeneracies.get(j).copied().unwrap_or(0)
    }

    pub fn path_table(&self) -> &[(usize, usize, PathOrigin)] {
        &self.path_table
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoupledLabel, &StateVector)> {
        self.vectors.iter().map(|(l, v)| (l, v))
    }

    pub fn labels(&self) -> impl Iterator<Item = CoupledLabel> + '_ {
        self.vectors.iter().map(|(l, _)| *l)
    }

    fn check(&self, j: usize, alpha: usize) -> Result<()> {
        if j > self.pairs {
            return Err(Error::OutOfRange { what: "j", value: j as i64 });
        }
        if alpha == 0 || alpha > self.degeneracies[j] {
            return Err(Error::OutOfRange { what: "alpha", value: alpha as i64 });
        }
        Ok(())
    }

    pub fn index_of(&self, label: CoupledLabel) -> Result<usize> {
        self.check(label.j, label.alpha)?;
        if label.m.unsigned_abs() as usize > label.j {
            return Err(Error::OutOfRange { what: "m", value: label.m as i64 });
        }
        let width = 2 * label.j + 1;
        Ok(self.sector_offsets[label.j] + (label.alpha - 1) * width + (label.m + label.j as i32) as usize)
    }

    pub fn vector(&self, j: usize, m: i32, alpha: usize) -> Result<&StateVector> {
        let idx = self.index_of(CoupledLabel { j, m, alpha })?;
        Ok(&self.vectors[idx].1)
    }

    /// The `2j + 1` members of multiplet `(j, alpha)`, `m` ascending.
    pub fn multiplet(&self, j: usize, alpha: usize) -> Result<&[(CoupledLabel, StateVector)]> {
        let start = self.index_of(CoupledLabel { j, m: -(j as i32), alpha })?;
        Ok(&self.vectors[start..start + 2 * j + 1])
    }
}

/// Projector onto sector `H_{j,alpha}`, rank `2j + 1`.
pub fn sector_projector(basis: &CoupledBasis, j: usize, alpha: usize) -> Result<Operator> {
    let mut p = Operator::zeros(basis.dim());
    for (_, v) in basis.multiplet(j, alpha)? {
        p.add_projector(1.0, v);
    }
    Ok(p)
}

/// Unitary exchanging `|j, m, alpha⟩ ↔ |j, m, 1⟩` for every `m`, identity on
/// the rest of the register.
pub fn label_swap_unitary(basis: &CoupledBasis, j: usize, alpha: usize) -> Result<Operator> {
    basis.check(j, alpha)?;
    let mut u = Operator::identity(basis.dim());
    if alpha == 1 {
        return Ok(u);
    }
    let target = basis.multiplet(j, alpha)?;
    let home = basis.multiplet(j, 1)?;
    for ((_, a), (_, h)) in target.iter().zip(home) {
        u.add_assign_scaled(-1.0, &a.density())?;
        u.add_assign_scaled(-1.0, &h.density())?;
        u.add_assign_scaled(1.0, &Operator::outer(h, a))?;
        u.add_assign_scaled(1.0, &Operator::outer(a, h))?;
    }
    u.into_hermitian()
}
