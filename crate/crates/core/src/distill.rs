//! Local measure-and-rotate distillation of the shuffled state.
//!
//! 1. Alice projects onto a sector `H_{j,α}` of her register.
//! 2. She rotates `α` to `1` with the label-swap unitary.
//! 3. Her last `J - j` qubit pairs are now singlets and are discarded.
//! 4. Bob projects onto a sector `H_{k,β}`; the state forces `k = j`.
//! 5. He rotates `β` to `1` and discards his trailing singlets.
//! 6. What remains is `Σ_m c_m |j,m⟩|j,m⟩` on `2j + 2j` qubits, worth its
//!    entanglement entropy in ebits (asymptotically).
//!
//! The simulation keeps the shuffled state as its `(2J)!` pure branches and
//! applies every operation through [`LocalOp`], so each step acts on one side
//! only. Shots are sampled from the exact branch tree with a ChaCha20 stream
//! per shot: `ChaCha20Rng::seed_from_u64(seed)` with `set_stream(shot)`, and a
//! uniform draw is the top 53 bits of `next_u64` scaled by `2^-53`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::coupled_basis::{build_basis, dicke_block, label_swap_unitary, sector_projector, singlet};
use crate::error::{Error, Result};
use crate::numkit::{partial_trace, qubit_dims, sqrt, von_neumann_entropy, Layout, Operator, StateVector, Tensor, C64};
use crate::states::{closed_form_sigma, shuffled_branches, BlockSpectrum, SchmidtParam, SizeLimit};

/// Branches lighter than this are not reported as outcomes.
const NEGLIGIBLE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Alice,
    Bob,
}

/// An operator acting on one party's register only.
#[derive(Clone, Debug)]
pub struct LocalOp {
    pub side: Side,
    pub op: Operator,
}

impl LocalOp {
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        match self.side {
            Side::Alice => v.apply_alice(&self.op),
            Side::Bob => v.apply_bob(&self.op),
        }
    }

    /// `op ⊗ I` or `I ⊗ op` on the full register.
    pub fn global(&self) -> Operator {
        let id = Operator::identity(self.op.dim());
        match self.side {
            Side::Alice => self.op.tensor(&id),
            Side::Bob => id.tensor(&self.op),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    pub j: usize,
    pub alpha_j: usize,
    pub beta_j: usize,
    pub probability: f64,
    /// Pure state on the `2j + 2j` undiscarded qubits, `[Alice | Bob]`.
    pub final_state: StateVector,
    pub yield_bits: f64,
    /// `tr ρ²` of the undiscarded register before extracting `final_state`.
    pub purity: f64,
    /// Smallest singlet fidelity among the discarded pairs (1 if none).
    pub discarded_singlet_fidelity: f64,
    /// `|⟨target|final_state⟩|` against the closed-form block state.
    pub target_overlap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Measure,
    Unitary,
    Discard,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolStep {
    pub step: u8,
    pub kind: StepKind,
    pub label: String,
    /// Squared norm of the unnormalized post-step state, the probability of
    /// the branch so far.
    pub norm: f64,
    pub discarded: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolTrace {
    pub seed: u64,
    pub shot: u64,
    pub steps: Vec<ProtocolStep>,
}

#[derive(Clone, Debug)]
struct BobBranch {
    beta: usize,
    probability: f64,
    outcome: usize,
}

#[derive(Clone, Debug)]
struct AliceBranch {
    j: usize,
    alpha: usize,
    probability: f64,
    bob: Vec<BobBranch>,
}

/// Exact branch tree of the protocol for one `(J, α)`.
#[derive(Clone, Debug)]
pub struct Protocol {
    pairs: usize,
    tree: Vec<AliceBranch>,
    outcomes: Vec<ProtocolOutcome>,
    cross_sector_probability: f64,
}

fn discarded_qubits(pairs: usize, j: usize, side: Side) -> Vec<usize> {
    let offset = if side == Side::Alice { 0 } else { 2 * pairs };
    (offset + 2 * j..offset + 2 * pairs).collect()
}

/// `Σ_m c_m |j,m⟩|j,m⟩` on `2j + 2j` qubits.
pub fn reduced_target(blocks: &BlockSpectrum, j: usize) -> Result<StateVector> {
    let sec = blocks.sector(j).ok_or(Error::OutOfRange { what: "j", value: j as i64 })?;
    let mut out = StateVector::zeros(4 * j);
    for (k, &c) in sec.coefficients.iter().enumerate() {
        let d = dicke_block(j, k as i32 - j as i32)?;
        out.add_scaled(C64::new(c, 0.0), &d.tensor(&d));
    }
    out.with_layout(Layout::Bipartite { alice: 2 * j, bob: 2 * j })
}

impl Protocol {
    pub fn new(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<Self> {
        let branches = shuffled_branches(pairs, s, limit)?;
        let basis = build_basis(pairs)?;
        let blocks = closed_form_sigma(pairs, s)?;
        let weight = 1.0 / branches.len() as f64;

        let mut tree = Vec::new();
        let mut outcomes = Vec::new();
        let mut cross = 0.0;

        for j in 0..=pairs {
            for alpha in 1..=basis.degeneracy(j) {
                let measure = LocalOp { side: Side::Alice, op: sector_projector(&basis, j, alpha)? };
                let rotate = LocalOp { side: Side::Alice, op: label_swap_unitary(&basis, j, alpha)? };
                let after_alice: Vec<StateVector> =
                    branches.iter().map(|b| rotate.apply(&measure.apply(b)?)).collect::<Result<_>>()?;
                let p_alice = weight * after_alice.iter().map(StateVector::norm_sqr).sum::<f64>();
                if p_alice <= NEGLIGIBLE {
                    continue;
                }
                let mut bob = Vec::new();
                for k in 0..=pairs {
                    for beta in 1..=basis.degeneracy(k) {
                        let measure = LocalOp { side: Side::Bob, op: sector_projector(&basis, k, beta)? };
                        let after_measure: Vec<StateVector> =
                            after_alice.iter().map(|b| measure.apply(b)).collect::<Result<_>>()?;
                        let p = weight * after_measure.iter().map(StateVector::norm_sqr).sum::<f64>();
                        if k != j {
                            cross += p;
                            continue;
                        }
                        if p <= NEGLIGIBLE {
                            continue;
                        }
                        let rotate = LocalOp { side: Side::Bob, op: label_swap_unitary(&basis, k, beta)? };
                        let finals: Vec<StateVector> =
                            after_measure.iter().map(|b| rotate.apply(b)).collect::<Result<_>>()?;
                        let outcome = finish(pairs, j, alpha, beta, p, weight, &finals, &blocks)?;
                        bob.push(BobBranch { beta, probability: p, outcome: outcomes.len() });
                        outcomes.push(outcome);
                    }
                }
                tree.push(AliceBranch { j, alpha, probability: p_alice, bob });
            }
        }
        Ok(Self { pairs, tree, outcomes, cross_sector_probability: cross })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn outcomes(&self) -> &[ProtocolOutcome] {
        &self.outcomes
    }

    /// Total probability of Bob finding a sector different from Alice's.
    pub fn cross_sector_probability(&self) -> f64 {
        self.cross_sector_probability
    }

    /// Samples one run of the protocol.
    pub fn run_shot(&self, seed: u64, shot: u64) -> (&ProtocolOutcome, ProtocolTrace) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(shot);
        let alice = pick(&mut rng, self.tree.iter().map(|b| b.probability), &self.tree);
        let bob = pick(&mut rng, alice.bob.iter().map(|b| b.probability), &alice.bob);
        let (j, pairs) = (alice.j, self.pairs);

        let unitary_label = |who: &str, label: usize| {
            if label == 1 {
                format!("{who}: identity")
            } else {
                format!("{who}: swap alpha {label} <-> 1 in j={j}")
            }
        };
        let steps = vec![
            ProtocolStep {
                step: 1,
                kind: StepKind::Measure,
                label: format!("alice: project j={j} alpha={}", alice.alpha),
                norm: alice.probability,
                discarded: Vec::new(),
            },
            ProtocolStep {
                step: 2,
                kind: StepKind::Unitary,
                label: unitary_label("alice", alice.alpha),
                norm: alice.probability,
                discarded: Vec::new(),
            },
            ProtocolStep {
                step: 3,
                kind: StepKind::Discard,
                label: format!("alice: discard {} singlet pairs", pairs - j),
                norm: alice.probability,
                discarded: discarded_qubits(pairs, j, Side::Alice),
            },
            ProtocolStep {
                step: 4,
                kind: StepKind::Measure,
                label: format!("bob: project j={j} beta={}", bob.beta),
                norm: bob.probability,
                discarded: Vec::new(),
            },
            ProtocolStep {
                step: 5,
                kind: StepKind::Unitary,
                label: unitary_label("bob", bob.beta),
                norm: bob.probability,
                discarded: Vec::new(),
            },
            ProtocolStep {
                step: 6,
                kind: StepKind::Discard,
                label: format!("bob: discard {} singlet pairs", pairs - j),
                norm: bob.probability,
                discarded: discarded_qubits(pairs, j, Side::Bob),
            },
        ];
        (&self.outcomes[bob.outcome], ProtocolTrace { seed, shot, steps })
    }

    /// Runs shots `0..shots` and tallies the sector `j` of each.
    pub fn monte_carlo(&self, seed: u64, shots: u64) -> MonteCarloSummary {
        let mut counts = vec![0u64; self.pairs + 1];
        for shot in 0..shots {
            let (outcome, _) = self.run_shot(seed, shot);
            counts[outcome.j] += 1;
        }
        let mut expected = vec![0.0; self.pairs + 1];
        for o in &self.outcomes {
            expected[o.j] += o.probability;
        }
        let sectors = counts
            .iter()
            .zip(&expected)
            .enumerate()
            .map(|(j, (&count, &p))| SectorFrequency {
                j,
                count,
                frequency: count as f64 / shots as f64,
                expected: p,
                std_error: sqrt(p * (1.0 - p) / shots as f64),
            })
            .collect();
        MonteCarloSummary { seed, shots, sectors }
    }
}

fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn pick<'a, T>(rng: &mut ChaCha20Rng, weights: impl Iterator<Item = f64> + Clone, items: &'a [T]) -> &'a T {
    let total: f64 = weights.clone().sum();
    let target = uniform(rng) * total;
    let mut acc = 0.0;
    for (w, item) in weights.zip(items) {
        acc += w;
        if target < acc {
            return item;
        }
    }
    items.last().expect("non-empty branch list")
}

/// Steps 3, 5 and 6: drops the singlet pairs and reads off the pure
/// remainder of one `(j, α, β)` branch.
#[allow(clippy::too_many_arguments)]
fn finish(
    pairs: usize,
    j: usize,
    alpha_j: usize,
    beta_j: usize,
    probability: f64,
    weight: f64,
    branches: &[StateVector],
    blocks: &BlockSpectrum,
) -> Result<ProtocolOutcome> {
    let n = 4 * pairs;
    let mut rho = Operator::zeros(1 << n);
    for b in branches {
        rho.add_projector(weight / probability, b);
    }

    let mut fidelity: f64 = 1.0;
    let s = singlet();
    for side in [Side::Alice, Side::Bob] {
        for pair in discarded_qubits(pairs, j, side).chunks(2) {
            let reduced = partial_trace(&rho, &qubit_dims(n), pair)?;
            fidelity = fidelity.min(reduced.expectation(&s).re);
        }
    }

    let keep: Vec<usize> = (0..2 * j).chain(2 * pairs..2 * pairs + 2 * j).collect();
    let kept = partial_trace(&rho, &qubit_dims(n), &keep)?;
    let purity: f64 = kept.data().iter().map(|z| z.norm_sqr()).sum();

    // For a pure state every nonzero column is proportional to the state.
    let dim = kept.dim();
    let pivot = (0..dim).max_by(|&a, &b| kept.get(a, a).re.total_cmp(&kept.get(b, b).re)).unwrap_or(0);
    let mut final_state = kept.column(pivot)?;
    final_state.scale(C64::new(1.0 / sqrt(kept.get(pivot, pivot).re), 0.0));
    let final_state = final_state.with_layout(Layout::Bipartite { alice: 2 * j, bob: 2 * j })?;

    let alice = partial_trace(&final_state.density(), &[1 << (2 * j), 1 << (2 * j)], &[0])?;
    let yield_bits = von_neumann_entropy(&alice)?;
    let target_overlap = reduced_target(blocks, j)?.overlap(&final_state);

    Ok(ProtocolOutcome {
        j,
        alpha_j,
        beta_j,
        probability,
        final_state,
        yield_bits,
        purity,
        discarded_singlet_fidelity: fidelity,
        target_overlap,
    })
}

/// One outcome per `(j, α_j, β_j)` branch with nonzero probability.
pub fn enumerate_outcomes(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<Vec<ProtocolOutcome>> {
    Ok(Protocol::new(pairs, s, limit)?.outcomes)
}

/// Probability-weighted mean yield in ebits.
pub fn average_yield(outcomes: &[ProtocolOutcome]) -> Result<f64> {
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(total));
    }
    Ok(outcomes.iter().map(|o| o.probability * o.yield_bits).sum())
}

/// Samples a single run with stream 0 of `seed`.
pub fn run_shot(
    pairs: usize,
    s: SchmidtParam,
    seed: u64,
    limit: SizeLimit,
) -> Result<(ProtocolOutcome, ProtocolTrace)> {
    let protocol = Protocol::new(pairs, s, limit)?;
    let (outcome, trace) = protocol.run_shot(seed, 0);
    Ok((outcome.clone(), trace))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorFrequency {
    pub j: usize,
    pub count: u64,
    pub frequency: f64,
    pub expected: f64,
    pub std_error: f64,
}

impl SectorFrequency {
    /// Deviation from the expected frequency in standard errors; zero when
    /// the branch is deterministic and hit exactly.
    pub fn z_score(&self) -> f64 {
        let dev = (self.frequency - self.expected).abs();
        if self.std_error == 0.0 {
            if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            dev / self.std_error
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloSummary {
    pub seed: u64,
    pub shots: u64,
    pub sectors: Vec<SectorFrequency>,
}

pub fn block_probability(blocks: &BlockSpectrum, j: usize) -> f64 {
    blocks.sector(j).map_or(0.0, |s| s.probability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::log2;

    const H: f64 = core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn two_pair_maximal_outcomes() {
        let out = enumerate_outcomes(1, SchmidtParam::maximal(), SizeLimit::DEFAULT).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!((out[0].j, out[1].j), (0, 1));
        assert!((out[0].probability - 0.25).abs() < 1e-12);
        assert!((out[1].probability - 0.75).abs() < 1e-12);
        assert!(out[0].yield_bits.abs() < 1e-10);
        assert!((out[1].yield_bits - log2(3.0)).abs() < 1e-10);
        assert!((average_yield(&out).unwrap() - 0.75 * log2(3.0)).abs() < 1e-10);
    }

    #[test]
    fn product_input_single_outcome() {
        let out = enumerate_outcomes(1, SchmidtParam::new(1.0).unwrap(), SizeLimit::DEFAULT).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].yield_bits.abs() < 1e-12);
    }

    #[test]
    fn four_pair_outcome_table() {
        let p = Protocol::new(2, SchmidtParam::new(H).unwrap(), SizeLimit::DEFAULT).unwrap();
        let out = p.outcomes();
        assert_eq!(out.len(), 14);
        let blocks = closed_form_sigma(2, SchmidtParam::maximal()).unwrap();
        for o in out {
            assert!((o.probability - block_probability(&blocks, o.j)).abs() < 1e-10);
            assert!(o.target_overlap > 1.0 - 1e-10);
            assert!(o.purity > 1.0 - 1e-10);
            assert!(o.discarded_singlet_fidelity > 1.0 - 1e-10);
        }
        assert!(p.cross_sector_probability() < 1e-12);
        assert!((average_yield(out).unwrap() - 1.617143).abs() < 1e-6);
    }

    #[test]
    fn trace_is_reproducible() {
        let p = Protocol::new(1, SchmidtParam::maximal(), SizeLimit::DEFAULT).unwrap();
        assert_eq!(p.run_shot(42, 0), p.run_shot(42, 0));
        let (_, trace) = p.run_shot(42, 3);
        assert_eq!(trace.steps.len(), 6);
        assert!(trace.steps.iter().all(|s| s.norm > 0.0 && s.norm <= 1.0));
    }

    #[test]
    fn discarded_counts_match_sector() {
        let p = Protocol::new(2, SchmidtParam::new(0.5).unwrap(), SizeLimit::DEFAULT).unwrap();
        for shot in 0..20 {
            let (o, trace) = p.run_shot(7, shot);
            assert_eq!(trace.steps[2].discarded.len(), 2 * (2 - o.j));
            assert_eq!(trace.steps[5].discarded.len(), 2 * (2 - o.j));
        }
    }

    #[test]
    fn unnormalized_outcomes_rejected() {
        let mut out = enumerate_outcomes(1, SchmidtParam::maximal(), SizeLimit::DEFAULT).unwrap();
        out.pop();
        assert!(matches!(average_yield(&out), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(Protocol::new(3, SchmidtParam::maximal(), SizeLimit::DEFAULT), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn local_ops_commute_with_the_other_side() {
        let basis = build_basis(1).unwrap();
        let a = LocalOp { side: Side::Alice, op: label_swap_unitary(&basis, 1, 1).unwrap() };
        let p = LocalOp { side: Side::Alice, op: sector_projector(&basis, 1, 1).unwrap() };
        let other = Operator::from_fn(4, |i, k| C64::new((i * 4 + k) as f64, (i as f64) - (k as f64)));
        let bob = LocalOp { side: Side::Bob, op: other };
        for op in [a, p] {
            let lhs = op.global().matmul(&bob.global()).unwrap();
            let rhs = bob.global().matmul(&op.global()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
