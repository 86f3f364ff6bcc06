//! Command-line flags and their validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lostorder_core::states::{SchmidtParam, SizeLimit};

use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "lostorder",
    version,
    about = "Entanglement that survives when the pairing order of shared qubit pairs is lost"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Per-sector weights and block entropies for one (J, alpha).
    Table(Common),
    /// E_D, information loss and their ratio over an alpha grid.
    Sweep(Common),
    /// Exhaustive protocol outcomes, optionally with a Monte Carlo run.
    Distill(Common),
    /// Run the self-check suite and print PASS/FAIL per check.
    Verify(Common),
    /// Coupled-basis sector sizes.
    Info(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Number of pairs is 2J.
    #[arg(long = "J", visible_alias = "j", default_value_t = 1)]
    pub pairs: usize,

    /// Schmidt coefficient of alpha|00> + beta|11>.
    #[arg(long, conflicts_with_all = ["alpha_sq", "start", "stop"])]
    pub alpha: Option<f64>,

    /// Schmidt weight alpha^2, as a decimal or an exact fraction `a/b`.
    #[arg(long, conflicts_with_all = ["start", "stop"])]
    pub alpha_sq: Option<String>,

    /// First alpha of a sweep grid.
    #[arg(long)]
    pub start: Option<f64>,

    /// Last alpha of a sweep grid.
    #[arg(long)]
    pub stop: Option<f64>,

    /// Number of grid points, at least 2.
    #[arg(long)]
    pub count: Option<usize>,

    /// Seed for the Monte Carlo stream; 0 draws one from the OS.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Monte Carlo shots.
    #[arg(long)]
    pub shots: Option<u64>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Raise the exact-simulation limit from 8 to 12 qubits.
    #[arg(long)]
    pub big: bool,

    /// Write the step log of shot 0 as JSON lines (distill).
    #[arg(long)]
    pub trace: Option<PathBuf>,

    /// Write every coupled-basis amplitude as CSV (info).
    #[arg(long)]
    pub dump_basis: Option<PathBuf>,

    /// Replace every verification tolerance (testing the failure path).
    #[arg(long, hide = true, allow_negative_numbers = true)]
    pub tol_override: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Table,
    Sweep,
    Distill,
    Verify,
    Info,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaSpec {
    Single(SchmidtParam),
    Grid { start: f64, stop: f64, count: usize },
}

impl AlphaSpec {
    /// Evenly spaced points, endpoints included.
    pub fn points(&self) -> Result<Vec<SchmidtParam>, CliError> {
        match *self {
            AlphaSpec::Single(s) => Ok(vec![s]),
            AlphaSpec::Grid { start, stop, count } => (0..count)
                .map(|k| {
                    let t = k as f64 / (count - 1) as f64;
                    let a = if k + 1 == count { stop } else { start + (stop - start) * t };
                    SchmidtParam::new(a).map_err(|e| CliError::Usage(e.to_string()))
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub pairs: usize,
    pub alpha: AlphaSpec,
    pub seed: u64,
    pub shots: Option<u64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub big: bool,
    pub trace: Option<PathBuf>,
    pub dump_basis: Option<PathBuf>,
    pub tol_override: Option<f64>,
}

impl RunConfig {
    pub fn limit(&self) -> SizeLimit {
        if self.big {
            SizeLimit::BIG
        } else {
            SizeLimit::DEFAULT
        }
    }

    /// The single Schmidt parameter of a non-sweep command.
    pub fn schmidt(&self) -> Result<SchmidtParam, CliError> {
        match self.alpha {
            AlphaSpec::Single(s) => Ok(s),
            AlphaSpec::Grid { .. } => Err(CliError::Usage("this command takes a single alpha".into())),
        }
    }
}

/// Parses `0.25`, `1/3` and similar.
pub fn parse_weight(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse alpha^2 `{text}`"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n / d)
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (command, c) = match self.command {
            CommandArgs::Table(c) => (Command::Table, c),
            CommandArgs::Sweep(c) => (Command::Sweep, c),
            CommandArgs::Distill(c) => (Command::Distill, c),
            CommandArgs::Verify(c) => (Command::Verify, c),
            CommandArgs::Info(c) => (Command::Info, c),
        };
        let usage = |m: &str| Err(CliError::Usage(m.into()));
        if c.pairs == 0 {
            return usage("--J must be at least 1");
        }
        if c.shots == Some(0) {
            return usage("--shots must be at least 1");
        }
        let single = |s: Result<SchmidtParam, _>| {
            s.map(AlphaSpec::Single).map_err(|e: lostorder_core::Error| CliError::Usage(e.to_string()))
        };
        let alpha = if let Some(a) = c.alpha {
            single(SchmidtParam::new(a))?
        } else if let Some(w) = &c.alpha_sq {
            single(SchmidtParam::from_alpha_squared(parse_weight(w)?))?
        } else if command == Command::Sweep {
            let start = c.start.unwrap_or(0.0);
            let stop = c.stop.unwrap_or(1.0);
            let count = c.count.unwrap_or(101);
            if count < 2 {
                return usage("--count must be at least 2");
            }
            for x in [start, stop] {
                if !(0.0..=1.0).contains(&x) {
                    return usage("grid endpoints must lie in [0, 1]");
                }
            }
            AlphaSpec::Grid { start, stop, count }
        } else if c.start.is_some() || c.stop.is_some() || c.count.is_some() {
            return usage("--start/--stop/--count only apply to sweep");
        } else {
            AlphaSpec::Single(SchmidtParam::maximal())
        };
        let seed = if c.seed == 0 { entropy_seed() } else { c.seed };
        Ok(RunConfig {
            command,
            pairs: c.pairs,
            alpha,
            seed,
            shots: c.shots,
            format: c.format,
            output: c.output,
            big: c.big,
            trace: c.trace,
            dump_basis: c.dump_basis,
            tol_override: c.tol_override,
        })
    }
}

fn entropy_seed() -> u64 {
    loop {
        let s: u64 = rand::random();
        if s != 0 {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut full = vec!["lostorder"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full).map_err(|e| CliError::Usage(e.to_string()))?.into_config()
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_weight("1/4").unwrap(), 0.25);
        assert_eq!(parse_weight("0.36").unwrap(), 0.36);
        assert!(parse_weight("1/0").is_err());
        assert!(parse_weight("x").is_err());
    }

    #[test]
    fn defaults_and_grid() {
        let c = parse(&["table"]).unwrap();
        assert_eq!(c.pairs, 1);
        assert_eq!(c.alpha, AlphaSpec::Single(SchmidtParam::maximal()));
        let c = parse(&["sweep", "--J", "2", "--count", "5"]).unwrap();
        let pts = c.alpha.points().unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[4].alpha(), 1.0);
        assert!((pts[2].alpha() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_flags() {
        assert!(parse(&["sweep", "--count", "1"]).is_err());
        assert!(parse(&["table", "--J", "0"]).is_err());
        assert!(parse(&["table", "--alpha", "1.5"]).is_err());
        assert!(parse(&["distill", "--shots", "0"]).is_err());
        assert!(parse(&["table", "--start", "0.1"]).is_err());
        assert!(parse(&["sweep", "--alpha", "0.5", "--start", "0.1"]).is_err());
    }

    #[test]
    fn exact_weight() {
        let c = parse(&["table", "--alpha-sq", "1/2"]).unwrap();
        assert_eq!(c.schmidt().unwrap().alpha_sq(), 0.5);
    }
}
