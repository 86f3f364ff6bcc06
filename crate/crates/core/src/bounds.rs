//! Separable reference state and the relative-entropy upper bound on
//! distillable entanglement.
//!
//! `ρ` is `σ` dephased in the product coupled basis: every block state
//! `Σ_m c_m |j,m,α⟩|j,m,β⟩` is replaced by `Σ_m c_m² |j,m,α⟩⟨·| ⊗ |j,m,β⟩⟨·|`.
//! Each term is a product, so `ρ` is separable by inspection, and
//! `S(σ‖ρ) = Σ_j d_j² p_j S_j`.

use alloc::vec::Vec;

use crate::coupled_basis::build_basis;
use crate::distill::{average_yield, enumerate_outcomes};
use crate::error::Result;
use crate::numkit::{log2, relative_entropy, xlog2x, Operator, Tensor};
use crate::states::{brute_force_sigma, closed_form_sigma, SchmidtParam, SizeLimit};

/// Largest allowed `|yield - bound|` for a passing certificate.
pub const OPTIMALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SeparableTerm {
    pub weight: f64,
    pub alice: Operator,
    pub bob: Operator,
}

/// `ρ = Σ_k w_k A_k ⊗ B_k` with every `A_k`, `B_k` a density operator.
#[derive(Clone, Debug)]
pub struct SeparableCertificate {
    pub terms: Vec<SeparableTerm>,
}

impl SeparableCertificate {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn reconstruct(&self) -> Operator {
        let dim = self.terms.first().map_or(1, |t| t.alice.dim() * t.bob.dim());
        let mut out = Operator::zeros(dim);
        for t in &self.terms {
            out.add_assign_scaled(t.weight, &t.alice.tensor(&t.bob)).expect("terms share one dimension");
        }
        out
    }

    /// Weights are non-negative and every factor is a density operator.
    pub fn check(&self) -> Result<()> {
        for t in &self.terms {
            if t.weight < 0.0 {
                return Err(crate::Error::InvalidDensity("negative certificate weight"));
            }
            t.alice.check_density()?;
            t.bob.check_density()?;
        }
        Ok(())
    }
}

/// Builds `ρ` together with its product decomposition. Zero-weight terms
/// are left out.
pub fn separable_rho(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<(Operator, SeparableCertificate)> {
    limit.check_pairs(pairs)?;
    let basis = build_basis(pairs)?;
    let blocks = closed_form_sigma(pairs, s)?;
    let mut terms = Vec::new();
    for sec in &blocks.sectors {
        let d = sec.degeneracy as usize;
        for (k, &c) in sec.coefficients.iter().enumerate() {
            let weight = sec.probability * c * c;
            if weight == 0.0 {
                continue;
            }
            let m = k as i32 - sec.j as i32;
            let projectors: Vec<Operator> =
                (1..=d).map(|a| basis.vector(sec.j, m, a).map(|v| Operator::outer(v, v))).collect::<Result<_>>()?;
            for alice in &projectors {
                for bob in &projectors {
                    terms.push(SeparableTerm { weight, alice: alice.clone(), bob: bob.clone() });
                }
            }
        }
    }
    let cert = SeparableCertificate { terms };
    Ok((cert.reconstruct(), cert))
}

/// `S(σ‖ρ) = -S(σ) - tr σ log ρ`, evaluated block by block: `σ` is pure
/// on each `(j, α, β)` block and `ρ` is diagonal there with entries
/// `p_j c_m²`.
pub fn relative_entropy_bound(pairs: usize, s: SchmidtParam) -> Result<f64> {
    let blocks = closed_form_sigma(pairs, s)?;
    let mut neg_entropy = 0.0;
    let mut cross = 0.0;
    for sec in &blocks.sectors {
        let d = sec.degeneracy as f64;
        let blocks_in_sector = d * d;
        neg_entropy += blocks_in_sector * xlog2x(sec.probability);
        for &c in &sec.coefficients {
            let w = c * c;
            if w > 0.0 {
                // ⟨ψ|log ρ|ψ⟩ restricted to this block, times p_j
                cross += blocks_in_sector * sec.probability * w * log2(sec.probability * w);
            }
        }
    }
    Ok(neg_entropy - cross)
}

/// The same bound from full eigendecompositions of the brute-force `σ` and
/// the assembled `ρ`.
pub fn relative_entropy_bound_matrix(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<f64> {
    let sigma = brute_force_sigma(pairs, s, limit)?;
    let (rho, _) = separable_rho(pairs, s, limit)?;
    relative_entropy(&sigma, &rho)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalityReport {
    pub pairs: usize,
    pub alpha: f64,
    pub yield_bits: f64,
    pub bound: f64,
    pub gap: f64,
    /// `yield <= bound + 1e-12`.
    pub within_bound: bool,
    pub pass: bool,
}

/// Compares the exhaustive protocol yield with the closed-form bound.
pub fn certify_optimality(pairs: usize, s: SchmidtParam, limit: SizeLimit) -> Result<OptimalityReport> {
    let yield_bits = average_yield(&enumerate_outcomes(pairs, s, limit)?)?;
    let bound = relative_entropy_bound(pairs, s)?;
    let gap = (yield_bits - bound).abs();
    let within_bound = yield_bits <= bound + 1e-12;
    Ok(OptimalityReport {
        pairs,
        alpha: s.alpha(),
        yield_bits,
        bound,
        gap,
        within_bound,
        pass: within_bound && gap < OPTIMALITY_TOL,
    })
}
