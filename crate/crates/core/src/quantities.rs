//! Closed-form entanglement and information quantities, all in bits.

use crate::coupled_basis::degeneracy;
use crate::error::Result;
use crate::numkit::{log2, shannon_entropy, xlog2x};
use crate::states::{closed_form_sigma, BlockSpectrum, SchmidtParam};

/// Below this information loss the ratio is reported as undefined.
pub const UNDEFINED_RATIO_THRESHOLD: f64 = 1e-12;

/// `h(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}

/// Entanglement of `N` copies of `α|00⟩ + β|11⟩`: `N h(α²)`.
pub fn initial_entanglement(n_pairs: usize, s: SchmidtParam) -> f64 {
    n_pairs as f64 * shannon_entropy(&[s.alpha_sq(), s.beta_sq()])
}

/// `Σ_j d_j² p_j S_j` from an already computed block spectrum.
pub fn distillable_from_blocks(b: &BlockSpectrum) -> f64 {
    b.sectors.iter().map(|s| s.sector_weight() * s.entanglement()).sum()
}

/// `-Σ_j d_j² p_j log p_j`, the entropy of the shuffled state.
pub fn information_loss_from_blocks(b: &BlockSpectrum) -> f64 {
    -b.sectors
        .iter()
        .map(|s| {
            let d = s.degeneracy as f64;
            d * d * xlog2x(s.probability)
        })
        .sum::<f64>()
}

/// Distillable entanglement of the shuffled state of `2J` pairs.
pub fn distillable_entanglement(pairs: usize, s: SchmidtParam) -> Result<f64> {
    Ok(distillable_from_blocks(&closed_form_sigma(pairs, s)?))
}

/// Maximally entangled inputs only: `Σ_j d_j² p_j log(2j+1)` with
/// `p_j = (2j+1)/(2^{2J} d_j)`, evaluated without the block spectrum.
pub fn distillable_entanglement_maximal(pairs: usize) -> Result<f64> {
    let scale = 1.0 / (1u128 << (2 * pairs)) as f64;
    let mut total = 0.0;
    for j in 0..=pairs {
        let d = degeneracy(pairs, j)? as f64;
        let dim = (2 * j + 1) as f64;
        // d² p_j = (2j+1) d_j / 2^{2J}
        total += dim * d * scale * log2(dim);
    }
    Ok(total)
}

/// Distillable entanglement of two shuffled pairs written out explicitly:
/// `(1-α²β²) log(1-α²β²) - (α⁴ log α⁴ + β⁴ log β⁴ + α²β² log α²β²)`.
pub fn two_pair_distillable_entanglement(s: SchmidtParam) -> f64 {
    let (a2, b2) = (s.alpha_sq(), s.beta_sq());
    let ab = a2 * b2;
    xlog2x(1.0 - ab) - (xlog2x(a2 * a2) + xlog2x(b2 * b2) + xlog2x(ab))
}

/// Classical information lost with the order record, `S(σ)`.
pub fn information_loss(pairs: usize, s: SchmidtParam) -> Result<f64> {
    Ok(information_loss_from_blocks(&closed_form_sigma(pairs, s)?))
}

/// One row of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub pairs: usize,
    pub alpha: f64,
    pub e_initial: f64,
    pub e_d: f64,
    pub delta_i: f64,
    /// `(E_initial - E_D) / ΔI`; `None` when `ΔI` vanishes.
    pub ratio: Option<f64>,
}

impl SweepRecord {
    pub fn ratio_defined(&self) -> bool {
        self.ratio.is_some()
    }
}

/// Entanglement lost per bit of order information lost, for `N = 2J` pairs.
pub fn ratio(pairs: usize, s: SchmidtParam) -> Result<SweepRecord> {
    let blocks = closed_form_sigma(pairs, s)?;
    let e_initial = initial_entanglement(2 * pairs, s);
    let e_d = distillable_from_blocks(&blocks);
    let delta_i = information_loss_from_blocks(&blocks);
    let ratio = (delta_i > UNDEFINED_RATIO_THRESHOLD).then(|| (e_initial - e_d) / delta_i);
    Ok(SweepRecord { pairs, alpha: s.alpha(), e_initial, e_d, delta_i, ratio })
}
