//! Initial pair states, the order-destroying channel on Bob's side, and the
//! closed-form block decomposition of its output.

use alloc::vec;
use alloc::vec::Vec;

use crate::coupled_basis::{degeneracy, CoupledBasis};
use crate::error::{Error, Result};
use crate::numkit::{
    partial_trace, shannon_entropy, sqrt, von_neumann_entropy, Layout, Operator, StateVector, Tensor, C64, ZERO,
};
use crate::permutation::{all_permutations, is_permutation, permute_index};

/// Largest `J` handled by the closed-form routes.
pub const MAX_CLOSED_FORM_PAIRS: usize = 16;

/// Upper bound on the number of qubits of fully materialized density
/// matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimit {
    pub max_qubits: usize,
}

impl SizeLimit {
    /// `4J <= 8`, i.e. `J <= 2`.
    pub const DEFAULT: Self = Self { max_qubits: 8 };
    /// `4J <= 12`; a 4096-dim complex matrix takes 256 MiB.
    pub const BIG: Self = Self { max_qubits: 12 };

    pub fn check(&self, qubits: usize) -> Result<()> {
        if qubits > self.max_qubits {
            return Err(Error::SizeGuard { qubits, limit: self.max_qubits });
        }
        Ok(())
    }

    pub fn check_pairs(&self, pairs: usize) -> Result<()> {
        self.check(4 * pairs)
    }
}

impl Default for SizeLimit {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Schmidt coefficients of `α|00⟩ + β|11⟩`, stored through `α²` so that
/// `α² + β² = 1` holds exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchmidtParam {
    alpha_sq: f64,
}

impl SchmidtParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidSchmidt(alpha));
        }
        Ok(Self { alpha_sq: alpha * alpha })
    }

    pub fn from_alpha_squared(alpha_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return Err(Error::InvalidSchmidt(alpha_sq));
        }
        Ok(Self { alpha_sq })
    }

    /// `α = β = 1/√2`.
    pub fn maximal() -> Self {
        Self { alpha_sq: 0.5 }
    }

    pub fn alpha(&self) -> f64 {
        sqrt(self.alpha_sq)
    }

    pub fn beta(&self) -> f64 {
        sqrt(self.beta_sq())
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }

    pub fn beta_sq(&self) -> f64 {
        1.0 - self.alpha_sq
    }

    /// `α^{zeros} β^{ones}`.
    fn amplitude(&self, zeros: u32, ones: u32) -> f64 {
        crate::numkit::powi(self.alpha(), zeros) * crate::numkit::powi(self.beta(), ones)
    }
}

fn check_pairs(pairs: usize) -> Result<()> {
    if pairs == 0 {
        return Err(Error::OutOfRange { what: "J", value: 0 });
    }
    Ok(())
}

/// `⊗^{2J} (α|0⟩_A|0⟩_B + β|1⟩_A|1⟩_B)` in `[Alice | Bob]` layout.
pub fn initial_state(pairs: usize, s: SchmidtParam) -> Result<StateVector> {
    check_pairs(pairs)?;
    let n = 2 * pairs;
    let side = 1usize << n;
    let mut v = StateVector::zeros(2 * n);
    let amps = v.amplitudes_mut();
    for x in 0..side {
        let ones = x.count_ones();
        amps[x * side + x] = C64::new(s.amplitude(n as u32 - ones, ones), 0.0);
    }
    v.with_layout(Layout::Bipartite { alice: n, bob: n })
}

fn bob_split(layout: Layout, perm_len: usize) -> Result<(usize, usize)> {
    match layout {
        Layout::Bipartite { alice, bob } if bob == perm_len => Ok((alice, bob)),
        Layout::Bipartite { .. } => Err(Error::InvalidPermutation(perm_len)),
        Layout::Register => Err(Error::InvalidDensity("state has no Alice/Bob layout")),
    }
}

/// Index map of a Bob-side wire permutation on the full register.
fn bob_index_map(alice: usize, bob: usize, perm: &[usize]) -> Vec<usize> {
    let db = 1usize << bob;
    let local: Vec<usize> = (0..db).map(|b| permute_index(b, bob, perm)).collect();
    let mut map = Vec::with_capacity((1 << alice) * db);
    for a in 0..1usize << alice {
        map.extend(local.iter().map(|&b| a * db + b));
    }
    map
}

/// Permutes Bob's qubit wires; wire `k` moves to `perm[k]`.
pub fn permute_bob(psi: &StateVector, perm: &[usize]) -> Result<StateVector> {
    if !is_permutation(perm) {
        return Err(Error::InvalidPermutation(perm.len()));
    }
    let (alice, bob) = bob_split(psi.layout(), perm.len())?;
    let map = bob_index_map(alice, bob, perm);
    let mut out = StateVector::zeros(psi.n_qubits()).with_layout(psi.layout())?;
    let amps = out.amplitudes_mut();
    for (i, a) in psi.amplitudes().iter().enumerate() {
        amps[map[i]] = *a;
    }
    Ok(out)
}

/// Uniform average of `(I ⊗ P_π) ρ (I ⊗ P_π)^†` over all `(2J)!`
/// permutations of Bob's qubits; `ρ` is in `[Alice | Bob]` layout on `4J`
/// qubits.
pub fn shuffle_channel(rho: &Operator, pairs: usize, limit: SizeLimit) -> Result<Operator> {
    check_pairs(pairs)?;
    limit.check_pairs(pairs)?;
    let n = 2 * pairs;
    let dim = 1usize << (2 * n);
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho.dim() });
    }
    let perms = all_permutations(n);
    let weight = 1.0 / perms.len() as f64;
    let mut out = vec![ZERO; dim * dim];
    for perm in &perms {
        let map = bob_index_map(n, n, perm);
        for i in 0..dim {
            let row = rho.row(i);
            let dst = map[i] * dim;
            for (j, &x) in row.iter().enumerate() {
                if x != ZERO {
                    out[dst + map[j]] += x * weight;
                }
            }
        }
    }
    let op = Operator::from_vec(dim, out)?;
    Ok(if rho.is_hermitian() { op.into_hermitian()? } else { op })
}

/// The `(2J)!` pure branches `(I ⊗ P_π)|ψ₀⟩`, one per Bob permutation in
/// lexicographic order. Their uniform mixture is the shuffled state.
pub fn shuffled_branches(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<Vec<StateVector>> {
    limit.check_pairs(pairs)?;
    let psi = initial_state(pairs, s)?;
    all_permutations(2 * pairs).iter().map(|p| permute_bob(&psi, p)).collect()
}

/// Brute-force shuffled state: the shuffle channel applied to the initial
/// pure state.
pub fn brute_force_sigma(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<Operator> {
    limit.check_pairs(pairs)?;
    shuffle_channel(&initial_state(pairs, s)?.density(), pairs, limit)
}

/// All `(α_j, β_j)` blocks of one spin sector share this data.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBlock {
    pub j: usize,
    pub degeneracy: u64,
    /// Weight of each individual `(α_j, β_j)` block.
    pub probability: f64,
    /// Normalized amplitudes of `Σ_m c_m |j,m,α_j⟩|j,m,β_j⟩`, index `m + j`.
    /// All zero when the sector carries no weight.
    pub coefficients: Vec<f64>,
}

impl SectorBlock {
    /// Entanglement entropy of the normalized block state, in bits.
    pub fn entanglement(&self) -> f64 {
        let probs: Vec<f64> = self.coefficients.iter().map(|c| c * c).collect();
        shannon_entropy(&probs)
    }

    /// `d_j² p_j`, the total weight of the sector.
    pub fn sector_weight(&self) -> f64 {
        let d = self.degeneracy as f64;
        d * d * self.probability
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockEntry {
    pub j: usize,
    pub alpha_j: usize,
    pub beta_j: usize,
    pub probability: f64,
}

/// `σ = Σ_j Σ_{α_j, β_j} p_j |ψ_j(α_j, β_j)⟩⟨ψ_j(α_j, β_j)|` with normalized
/// block states.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpectrum {
    pub pairs: usize,
    pub sectors: Vec<SectorBlock>,
}

impl BlockSpectrum {
    pub fn sector(&self, j: usize) -> Option<&SectorBlock> {
        self.sectors.get(j)
    }

    /// Every `(j, α_j, β_j)` block, `d_j²` per sector.
    pub fn entries(&self) -> impl Iterator<Item = BlockEntry> + '_ {
        self.sectors.iter().flat_map(|sec| {
            let d = sec.degeneracy as usize;
            (1..=d).flat_map(move |a| {
                (1..=d).map(move |b| BlockEntry { j: sec.j, alpha_j: a, beta_j: b, probability: sec.probability })
            })
        })
    }

    /// `Σ_j d_j² p_j`.
    pub fn total_probability(&self) -> f64 {
        self.sectors.iter().map(SectorBlock::sector_weight).sum()
    }

    /// Nonzero eigenvalues of σ with their multiplicities `d_j²`.
    pub fn eigenvalues(&self) -> Vec<(f64, u64)> {
        self.sectors
            .iter()
            .filter(|s| s.probability > 0.0)
            .map(|s| (s.probability, s.degeneracy * s.degeneracy))
            .collect()
    }

    /// Materializes `|ψ_j(α_j, β_j)⟩` on `4J` qubits.
    pub fn block_state(&self, basis: &CoupledBasis, j: usize, alpha_j: usize, beta_j: usize) -> Result<StateVector> {
        if basis.pairs() != self.pairs {
            return Err(Error::DimensionMismatch { expected: self.pairs, found: basis.pairs() });
        }
        let sec = self.sector(j).ok_or(Error::OutOfRange { what: "j", value: j as i64 })?;
        let n = basis.n_qubits();
        let mut out = StateVector::zeros(2 * n);
        for (k, &c) in sec.coefficients.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let m = k as i32 - j as i32;
            let a = basis.vector(j, m, alpha_j)?;
            let b = basis.vector(j, m, beta_j)?;
            out.add_scaled(C64::new(c, 0.0), &a.tensor(b));
        }
        out.with_layout(Layout::Bipartite { alice: n, bob: n })
    }
}

/// Weight `α^{2(J-m)} β^{2(J+m)}` of `|j,m,α⟩|j,m,α⟩` in the initial state.
fn m_weight(pairs: usize, m: i32, s: SchmidtParam) -> f64 {
    let zeros = (pairs as i32 - m) as u32;
    let ones = (pairs as i32 + m) as u32;
    crate::numkit::powi(s.alpha_sq(), zeros) * crate::numkit::powi(s.beta_sq(), ones)
}

/// Closed-form block decomposition of the shuffled state, any `1 <= J <= 16`.
pub fn closed_form_sigma(pairs: usize, s: SchmidtParam) -> Result<BlockSpectrum> {
    check_pairs(pairs)?;
    if pairs > MAX_CLOSED_FORM_PAIRS {
        return Err(Error::OutOfRange { what: "J", value: pairs as i64 });
    }
    let mut sectors = Vec::with_capacity(pairs + 1);
    for j in 0..=pairs {
        let d = degeneracy(pairs, j)?;
        let weights: Vec<f64> = (-(j as i32)..=j as i32).map(|m| m_weight(pairs, m, s)).collect();
        let total: f64 = weights.iter().sum();
        let coefficients =
            if total > 0.0 { weights.iter().map(|w| sqrt(w / total)).collect() } else { vec![0.0; weights.len()] };
        sectors.push(SectorBlock { j, degeneracy: d, probability: total / d as f64, coefficients });
    }
    Ok(BlockSpectrum { pairs, sectors })
}

/// `Σ p |ψ⟩⟨ψ|` over all blocks of `b`.
pub fn assemble_operator(b: &BlockSpectrum, basis: &CoupledBasis, limit: SizeLimit) -> Result<Operator> {
    limit.check_pairs(b.pairs)?;
    let mut rho = Operator::zeros(1 << (4 * b.pairs));
    for e in b.entries() {
        if e.probability == 0.0 {
            continue;
        }
        let v = b.block_state(basis, e.j, e.alpha_j, e.beta_j)?;
        rho.add_projector(e.probability, &v);
    }
    rho.into_hermitian()
}

/// Classical-quantum state `Σ_π w_π |π⟩⟨π| ⊗ |ψ_π⟩⟨ψ_π|` of the order record
/// (ancilla) and the pairs.
#[derive(Clone, Debug)]
pub struct CqState {
    pub pairs: usize,
    pub ancilla_dim: usize,
    pub weights: Vec<f64>,
    pub branches: Vec<StateVector>,
    /// Present when the ancilla is a whole number of qubits and the joint
    /// matrix fits the size limit.
    pub joint: Option<Operator>,
}

impl CqState {
    /// Reduced state of the pairs, `Σ_π w_π |ψ_π⟩⟨ψ_π|`.
    pub fn system_state(&self) -> Result<Operator> {
        if let Some(joint) = &self.joint {
            return partial_trace(joint, &[self.ancilla_dim, self.branches[0].dim()], &[1]);
        }
        let mut rho = Operator::zeros(self.branches[0].dim());
        for (w, b) in self.weights.iter().zip(&self.branches) {
            rho.add_projector(*w, b);
        }
        Ok(rho)
    }
}

pub fn cq_joint_state(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<CqState> {
    let branches = shuffled_branches(pairs, s, limit)?;
    let ancilla_dim = branches.len();
    let weights = vec![1.0 / ancilla_dim as f64; ancilla_dim];
    let joint = match crate::numkit::qubits_for(ancilla_dim) {
        Some(anc) if anc + 4 * pairs <= limit.max_qubits => {
            let mut rho = Operator::zeros(ancilla_dim * branches[0].dim());
            for (k, (w, b)) in weights.iter().zip(&branches).enumerate() {
                let flag = StateVector::basis(anc, k);
                rho.add_projector(*w, &flag.tensor(b));
            }
            Some(rho)
        }
        _ => None,
    };
    Ok(CqState { pairs, ancilla_dim, weights, branches, joint })
}

/// `I(ancilla : system) = S(ancilla) + S(system) - S(joint)` in bits.
///
/// With a materialized joint every entropy comes from an eigensolve. Without
/// it the block-diagonal structure gives `S(joint) = H(w) + Σ w S(ψ_π)` with
/// pure branches, so only the system entropy needs a matrix.
pub fn mutual_information(c: &CqState) -> Result<f64> {
    let sys = c.system_state()?;
    let s_sys = von_neumann_entropy(&sys)?;
    let (s_anc, s_joint) = match &c.joint {
        Some(joint) => {
            let anc = partial_trace(joint, &[c.ancilla_dim, c.branches[0].dim()], &[0])?;
            (von_neumann_entropy(&anc)?, von_neumann_entropy(joint)?)
        }
        None => {
            let h = shannon_entropy(&c.weights);
            (h, h)
        }
    };
    Ok((s_anc + s_sys - s_joint).max(0.0))
}
