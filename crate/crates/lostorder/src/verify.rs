//! Self-check suite behind `lostorder verify`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use lostorder_core::bounds::{
    certify_optimality, relative_entropy_bound, relative_entropy_bound_matrix, separable_rho,
};
use lostorder_core::coupled_basis::spin::eigen_residual;
use lostorder_core::coupled_basis::{build_basis, degeneracy};
use lostorder_core::distill::Protocol;
use lostorder_core::numkit::{von_neumann_entropy, Operator};
use lostorder_core::quantities::{distillable_entanglement, ratio, two_pair_distillable_entanglement};
use lostorder_core::states::{
    assemble_operator, brute_force_sigma, closed_form_sigma, cq_joint_state, mutual_information, shuffle_channel,
    SchmidtParam,
};
use lostorder_core::Result;

use crate::config::{AlphaSpec, RunConfig};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
struct Tolerances {
    tight: f64,
    loose: f64,
    sigmas: f64,
}

impl Tolerances {
    fn new(over: Option<f64>) -> Self {
        match over {
            Some(t) => Self { tight: t, loose: t, sigmas: t },
            None => Self { tight: 1e-10, loose: 1e-9, sigmas: 3.0 },
        }
    }
}

const MC_SHOTS: u64 = 100_000;

fn alphas(config: &RunConfig) -> Vec<SchmidtParam> {
    let mut out: Vec<SchmidtParam> =
        [0.0, 0.3, FRAC_1_SQRT_2, 0.9, 1.0].iter().map(|&a| SchmidtParam::new(a).unwrap()).collect();
    if let AlphaSpec::Single(s) = config.alpha {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn grid() -> impl Iterator<Item = SchmidtParam> {
    (0..=100).map(|k| SchmidtParam::new(k as f64 / 100.0).unwrap())
}

/// Largest value of `f` over the α set.
fn worst(points: &[SchmidtParam], mut f: impl FnMut(SchmidtParam) -> Result<f64>) -> Result<f64> {
    let mut w: f64 = 0.0;
    for &s in points {
        w = w.max(f(s)?);
    }
    Ok(w)
}

fn check(name: &'static str, err: f64, tol: f64) -> CheckResult {
    CheckResult { name, pass: err < tol, detail: format!("max error {err:.2e} (tolerance {tol:.0e})") }
}

pub fn run_suite(config: &RunConfig) -> std::result::Result<Vec<CheckResult>, CliError> {
    let pairs = config.pairs;
    let limit = config.limit();
    limit.check_pairs(pairs)?;
    let tol = Tolerances::new(config.tol_override);
    let points = alphas(config);
    let mut out = Vec::new();

    let basis = build_basis(pairs)?;
    let dim = basis.dim();
    let vectors: Vec<_> = basis.iter().map(|(_, v)| v).collect();
    let gram = Operator::from_fn(dim, |a, b| vectors[a].inner(vectors[b]));
    out.push(check(
        "coupled basis is orthonormal and complete",
        gram.max_abs_diff(&Operator::identity(dim)),
        tol.tight,
    ));

    let residual = basis.iter().map(|(l, v)| eigen_residual(v, l.j, l.m)).fold(0.0, f64::max);
    out.push(check("basis vectors are S^2 and S_z eigenvectors", residual, tol.tight));

    let mut counts_ok = true;
    for j in 0..=pairs {
        counts_ok &= basis.degeneracy(j) as u64 == degeneracy(pairs, j)?;
    }
    out.push(CheckResult {
        name: "sector multiplicities match the degeneracy formula",
        pass: counts_ok,
        detail: format!("{} sectors", pairs + 1),
    });

    let err = worst(&points, |s| {
        let brute = brute_force_sigma(pairs, s, limit)?;
        let closed = assemble_operator(&closed_form_sigma(pairs, s)?, &basis, limit)?;
        brute.trace_distance(&closed)
    })?;
    out.push(check("closed-form sigma equals brute-force shuffle", err, tol.tight));

    let err = worst(&points, |s| Ok((closed_form_sigma(pairs, s)?.total_probability() - 1.0).abs()))?;
    out.push(check("block weights sum to one", err, tol.tight));

    let err = worst(&points, |s| {
        let sigma = brute_force_sigma(pairs, s, limit)?;
        let loss = ratio(pairs, s)?.delta_i;
        let mi = mutual_information(&cq_joint_state(pairs, s, limit)?)?;
        Ok((von_neumann_entropy(&sigma)? - loss).abs().max((mi - loss).abs()))
    })?;
    out.push(check("S(sigma) and I(ancilla:system) equal the information loss", err, tol.tight));

    let mut err: f64 = 0.0;
    for &s in &points {
        let protocol = Protocol::new(pairs, s, limit)?;
        let blocks: Vec<_> = closed_form_sigma(pairs, s)?.entries().filter(|e| e.probability > 1e-14).collect();
        if blocks.len() != protocol.outcomes().len() {
            err = f64::INFINITY;
            break;
        }
        for (o, e) in protocol.outcomes().iter().zip(&blocks) {
            if (o.j, o.alpha_j, o.beta_j) != (e.j, e.alpha_j, e.beta_j) {
                err = f64::INFINITY;
            }
            err = err
                .max((o.probability - e.probability).abs())
                .max(1.0 - o.target_overlap)
                .max(1.0 - o.discarded_singlet_fidelity);
        }
        err = err.max(protocol.cross_sector_probability());
    }
    out.push(check("protocol outcomes match the block spectrum and discard singlets", err, tol.tight));

    let mut err: f64 = 0.0;
    let mut within = true;
    for &s in &points {
        let r = certify_optimality(pairs, s, limit)?;
        err = err.max(r.gap);
        within &= r.within_bound;
    }
    let mut c = check("protocol yield attains the relative entropy bound", err, tol.loose);
    c.pass &= within;
    out.push(c);

    let err = worst(&points, |s| {
        Ok((relative_entropy_bound(pairs, s)? - relative_entropy_bound_matrix(pairs, s, limit)?).abs())
    })?;
    out.push(check("bound closed form equals matrix relative entropy", err, tol.loose));

    let err = worst(&points, |s| {
        let (rho, cert) = separable_rho(pairs, s, limit)?;
        cert.check()?;
        let rebuilt = cert.reconstruct().max_abs_diff(&rho);
        let fixed = shuffle_channel(&rho, pairs, limit)?.max_abs_diff(&rho);
        Ok(rebuilt.max(fixed).max((cert.total_weight() - 1.0).abs()))
    })?;
    out.push(check("separable certificate reconstructs a shuffle-invariant rho", err, tol.tight));

    let mut excess: f64 = 0.0;
    for s in grid() {
        if let Some(x) = ratio(pairs, s)?.ratio {
            excess = excess.max(x - 1.0);
        }
    }
    out.push(CheckResult {
        name: "ratio at most one on a 101-point grid",
        pass: excess <= tol.loose,
        detail: format!("max ratio - 1 = {excess:.2e}"),
    });

    if pairs == 1 {
        let mut err: f64 = 0.0;
        for s in grid() {
            err = err.max((distillable_entanglement(1, s)? - two_pair_distillable_entanglement(s)).abs());
            let r = ratio(1, s)?;
            if r.delta_i > 1e-6 {
                err = err.max((r.ratio.unwrap_or(f64::INFINITY) - 1.0).abs());
            }
        }
        out.push(check("two pairs: explicit E_D formula and unit ratio", err, tol.loose));
    }

    let protocol = Protocol::new(pairs, SchmidtParam::maximal(), limit)?;
    let summary = protocol.monte_carlo(config.seed, MC_SHOTS);
    let z = summary.sectors.iter().map(|s| s.z_score()).fold(0.0, f64::max);
    out.push(CheckResult {
        name: "Monte Carlo sector frequencies within 3 standard errors",
        pass: z < tol.sigmas,
        detail: format!("{MC_SHOTS} shots, seed {}, max z {z:.2}", config.seed),
    });

    let same = protocol.run_shot(config.seed, 1) == protocol.run_shot(config.seed, 1);
    out.push(CheckResult {
        name: "identical seeds give identical traces",
        pass: same,
        detail: format!("seed {}", config.seed),
    });

    Ok(out)
}

pub fn render(checks: &[CheckResult]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status} {}: {}", c.name, c.detail);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    out
}
