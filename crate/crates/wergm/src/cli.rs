//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range;

/// A list of reals given as `lo:hi:count`, `a,b,c` or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Reals(pub Vec<f64>);

fn reals(s: &str) -> Result<Reals, String> {
    range::parse_reals(s).map(Reals)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ints(pub Vec<u32>);

fn ints(s: &str) -> Result<Ints, String> {
    range::parse_ints(s).map(Ints)
}

fn point(s: &str) -> Result<(f64, f64), String> {
    range::parse_point(s)
}

#[derive(Debug, Parser)]
#[command(name = "wergm", version, about = "Free energy, phase curves and samplers for edge-weighted exponential random graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Uniform,
    Bernoulli,
    Finite,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output encoding; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Edge-weight law.
    #[arg(long, value_enum, default_value = "uniform")]
    pub dist: DistKind,
    /// Atoms `value:prob,...` for `--dist finite`.
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cramér rate function I(u) with its dual variable and derivatives.
    Rate {
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        u: Reals,
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Limiting free energy and its maximizers on a (beta1, beta2) grid.
    Psi {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        beta1: Reals,
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        beta2: Reals,
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Critical point data for each edge count.
    CriticalTable {
        #[arg(long, value_parser = ints, default_value = "2,3,5,10")]
        p: Ints,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Transition curve r(beta1) with the bounding curves of the V-region.
    PhaseCurve {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        beta1: Reals,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Profile tables of l(u) and the V-region table, one CSV file each.
    Figures {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        out_dir: PathBuf,
        /// Parameter point `beta1,beta2`; repeatable.
        #[arg(long = "point", value_parser = point, allow_hyphen_values = true)]
        points: Vec<(f64, f64)>,
        /// beta1 grid of the V-region table.
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        beta1: Option<Reals>,
        #[arg(long, default_value_t = 1001)]
        profile_points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Metropolis sampler trajectory (CSV) or concentration report (JSON).
    Sample {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta2: f64,
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        sweeps: usize,
        #[arg(long, default_value_t = 500)]
        burn_in: usize,
        #[arg(long)]
        seed: u64,
        /// Also write the trajectory CSV here.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Directed Gaussian model: closed forms and a Monte Carlo check.
    Gaussian {
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        beta1: Reals,
        #[arg(long, value_parser = reals, allow_hyphen_values = true)]
        beta2: Reals,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

impl Command {
    /// Name of the module operation a command maps to, used in error records.
    pub fn operation(&self) -> &'static str {
        match self {
            Command::Rate { .. } => "rate_I",
            Command::Psi { .. } => "solve_psi",
            Command::CriticalTable { .. } => "critical_table",
            Command::PhaseCurve { .. } => "trace_curve",
            Command::Figures { .. } => "emit_figures",
            Command::Sample { .. } => "run_sampler",
            Command::Gaussian { .. } => "psi_n_monte_carlo",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_ranges_parse() {
        let cli = Cli::try_parse_from(["wergm", "phase-curve", "--p", "2", "--beta1", "-8:-3.1:50"]).unwrap();
        match cli.command {
            Command::PhaseCurve { beta1, .. } => assert_eq!(beta1.0.len(), 50),
            _ => panic!(),
        }
        let cli = Cli::try_parse_from(["wergm", "psi", "--beta1", "-5", "--beta2", "5"]).unwrap();
        assert_eq!(cli.command.operation(), "solve_psi");
    }

    #[test]
    fn seed_is_required() {
        assert!(Cli::try_parse_from(["wergm", "sample", "--beta1", "0", "--beta2", "0"]).is_err());
        assert!(Cli::try_parse_from(["wergm", "gaussian", "--beta1", "1", "--beta2", "0"]).is_err());
    }
}
