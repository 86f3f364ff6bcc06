use std::fs;
use std::path::Path;

use lostorder_core::bounds::relative_entropy_bound;
use lostorder_core::coupled_basis::{build_basis, count_coupling_paths, degeneracy, MAX_BASIS_PAIRS};
use lostorder_core::distill::{average_yield, Protocol, ProtocolTrace, StepKind};
use lostorder_core::quantities::{distillable_from_blocks, information_loss_from_blocks, initial_entanglement, ratio};
use lostorder_core::states::{closed_form_sigma, MAX_CLOSED_FORM_PAIRS};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{num, opt, sig12, Report, Table};
use crate::verify;

/// What a command produced: a rendered report or a verify listing.
pub enum Outcome {
    Text(String),
    Verify { text: String, failed: usize },
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = match config.command {
        Command::Table => cmd_table(config)?,
        Command::Sweep => cmd_sweep(config)?,
        Command::Distill => cmd_distill(config)?,
        Command::Info => cmd_info(config)?,
        Command::Verify => {
            let checks = verify::run_suite(config)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            return Ok(Outcome::Verify { text: verify::render(&checks), failed });
        }
    };
    Ok(Outcome::Text(report.render(config.format)))
}

fn closed_form_range(pairs: usize) -> Result<(), CliError> {
    if pairs > MAX_CLOSED_FORM_PAIRS {
        return Err(CliError::Usage(format!("--J must be at most {MAX_CLOSED_FORM_PAIRS}")));
    }
    Ok(())
}

pub fn cmd_table(config: &RunConfig) -> Result<Report, CliError> {
    closed_form_range(config.pairs)?;
    let s = config.schmidt()?;
    let blocks = closed_form_sigma(config.pairs, s)?;
    let mut t = Table::new("sector", &["j", "degeneracy", "p_j", "sector_weight", "block_entropy"]);
    for sec in &blocks.sectors {
        t.push(vec![
            Value::from(sec.j),
            Value::from(sec.degeneracy),
            num(sec.probability),
            num(sec.sector_weight()),
            num(sec.entanglement()),
        ]);
    }
    let e_initial = initial_entanglement(2 * config.pairs, s);
    let e_d = distillable_from_blocks(&blocks);
    let rec = ratio(config.pairs, s)?;
    Ok(Report::new(t)
        .summary("J", Value::from(config.pairs))
        .summary("alpha", num(s.alpha()))
        .summary("alpha_sq", num(s.alpha_sq()))
        .summary("e_initial", num(e_initial))
        .summary("e_d", num(e_d))
        .summary("delta_i", num(information_loss_from_blocks(&blocks)))
        .summary("ratio", opt(rec.ratio))
        .summary("ratio_defined", Value::from(rec.ratio_defined())))
}

pub fn cmd_sweep(config: &RunConfig) -> Result<Report, CliError> {
    closed_form_range(config.pairs)?;
    let points = config.alpha.points()?;
    let records = points.par_iter().map(|&s| ratio(config.pairs, s)).collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new("sweep", &["J", "alpha", "e_initial", "e_d", "delta_i", "ratio", "ratio_defined"]);
    let mut max_ratio: Option<f64> = None;
    for r in &records {
        if let Some(x) = r.ratio {
            max_ratio = Some(max_ratio.map_or(x, |m| m.max(x)));
        }
        t.push(vec![
            Value::from(r.pairs),
            num(r.alpha),
            num(r.e_initial),
            num(r.e_d),
            num(r.delta_i),
            opt(r.ratio),
            Value::from(r.ratio_defined()),
        ]);
    }
    Ok(Report::new(t)
        .summary("J", Value::from(config.pairs))
        .summary("points", Value::from(records.len()))
        .summary("max_ratio", opt(max_ratio)))
}

pub fn cmd_distill(config: &RunConfig) -> Result<Report, CliError> {
    let s = config.schmidt()?;
    let protocol = Protocol::new(config.pairs, s, config.limit())?;
    let mut t = Table::new(
        "outcome",
        &["j", "alpha_j", "beta_j", "probability", "yield_bits", "target_overlap", "singlet_fidelity"],
    );
    for o in protocol.outcomes() {
        t.push(vec![
            Value::from(o.j),
            Value::from(o.alpha_j),
            Value::from(o.beta_j),
            num(o.probability),
            num(o.yield_bits),
            num(o.target_overlap),
            num(o.discarded_singlet_fidelity),
        ]);
    }
    let yield_bits = average_yield(protocol.outcomes())?;
    let bound = relative_entropy_bound(config.pairs, s)?;
    let gap = (yield_bits - bound).abs();
    let pass = yield_bits <= bound + 1e-12 && gap < lostorder_core::bounds::OPTIMALITY_TOL;
    let mut report = Report::new(t);

    if let Some(shots) = config.shots {
        let summary = protocol.monte_carlo(config.seed, shots);
        let mut mc = Table::new("monte_carlo", &["j", "count", "frequency", "expected", "std_error", "z_score"]);
        for sec in &summary.sectors {
            mc.push(vec![
                Value::from(sec.j),
                Value::from(sec.count),
                num(sec.frequency),
                num(sec.expected),
                num(sec.std_error),
                num(sec.z_score()),
            ]);
        }
        report.sections.push(mc);
    }
    if let Some(path) = &config.trace {
        let (_, trace) = protocol.run_shot(config.seed, 0);
        write_file(path, &trace_lines(&trace))?;
    }

    Ok(report
        .summary("J", Value::from(config.pairs))
        .summary("alpha", num(s.alpha()))
        .summary("outcomes", Value::from(protocol.outcomes().len()))
        .summary("yield", num(yield_bits))
        .summary("bound", num(bound))
        .summary("gap", num(gap))
        .summary("pass", Value::from(pass))
        .summary("cross_sector_probability", num(protocol.cross_sector_probability()))
        .summary("seed", Value::from(config.seed))
        .summary("shots", Value::from(config.shots.unwrap_or(0))))
}

/// One JSON object per protocol step.
pub fn trace_lines(trace: &ProtocolTrace) -> String {
    let mut out = String::new();
    for step in &trace.steps {
        let kind = match step.kind {
            StepKind::Measure => "measure",
            StepKind::Unitary => "unitary",
            StepKind::Discard => "discard",
        };
        let line = json!({
            "seed": trace.seed,
            "shot": trace.shot,
            "step": step.step,
            "kind": kind,
            "label": step.label,
            "norm": num(step.norm),
            "discarded": step.discarded,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn cmd_info(config: &RunConfig) -> Result<Report, CliError> {
    let pairs = config.pairs;
    if pairs > MAX_BASIS_PAIRS {
        return Err(CliError::Usage(format!("--J must be at most {MAX_BASIS_PAIRS} for info")));
    }
    let basis = build_basis(pairs)?;
    let mut t = Table::new("sector", &["j", "degeneracy", "multiplet_size", "sector_dim", "coupling_paths"]);
    for j in 0..=pairs {
        let d = degeneracy(pairs, j)?;
        let size = 2 * j as u64 + 1;
        t.push(vec![
            Value::from(j),
            Value::from(d),
            Value::from(size),
            Value::from(d * size),
            Value::from(count_coupling_paths(2 * pairs, 2 * j)),
        ]);
    }
    if let Some(path) = &config.dump_basis {
        write_file(path, &basis_csv(&basis))?;
    }
    Ok(Report::new(t)
        .summary("J", Value::from(pairs))
        .summary("qubits", Value::from(basis.n_qubits()))
        .summary("dim", Value::from(basis.dim())))
}

/// Nonzero amplitudes of every basis vector, one per line.
pub fn basis_csv(basis: &lostorder_core::coupled_basis::CoupledBasis) -> String {
    let mut out = String::from("j,m,alpha,index,re,im\n");
    for (label, v) in basis.iter() {
        for (index, a) in v.amplitudes().iter().enumerate() {
            if a.norm_sqr() < 1e-28 {
                continue;
            }
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                label.j,
                label.m,
                label.alpha,
                index,
                sig12(a.re),
                sig12(a.im)
            ));
        }
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)?;
    Ok(())
}
