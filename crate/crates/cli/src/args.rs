use clap::{Args, Parser, Subcommand, ValueEnum};
use polylog_core::exact_arith::parse_rational;
use polylog_core::BigRational;

/// Polylogarithms at roots of unity: evaluation, identity verification and exact checks.
#[derive(Debug, Parser)]
#[command(name = "polylog", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Bernoulli number B_N as p/q
    Bern {
        n: u64,
    },
    /// Print the tangent number T_N, or its residue
    Tangent {
        n: u64,
        /// print T_N mod M instead
        #[arg(long = "mod", value_name = "M", value_parser = clap::value_parser!(u32).range(1..))]
        modulus: Option<u32>,
    },
    /// Evaluate Li_z(s), ζ(s) or φ(s,a,z)
    Eval(EvalArgs),
    /// Check one identity at seeded random points
    Verify(VerifyArgs),
    /// Check every identity over its default parameter grid
    VerifyAll {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        prec: PrecArg,
    },
    /// Run an exact recurrence check for 1 ≤ n ≤ N
    Recurrence {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long = "n-max", value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        /// modulus for thm41 and negint (odd, at least 3)
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Tangent-number residues mod 2, 3, 5 and 10 for 2 ≤ n ≤ N
    Congruence {
        #[arg(long = "max", value_name = "N")]
        max_n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Odd-zeta series coefficients for a rational target, with a numeric check
    Zseries {
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        x: BigRational,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
        #[command(flatten)]
        prec: PrecArg,
    },
    /// List the identity catalog
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Li,
    Zeta,
    Lerch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Thm41,
    K3,
    Negint,
    Tangent3,
    Tangent5,
}

#[derive(Debug, Args)]
pub struct PrecArg {
    /// working precision in bits (default: POLYLOG_PREC, else 128)
    #[arg(long = "prec", value_name = "BITS")]
    pub bits: Option<u32>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: Function,
    /// the point, as RE,IM
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    /// Lerch parameter P/Q
    #[arg(long, value_parser = parse_rational_arg)]
    pub a: Option<BigRational>,
    #[command(flatten)]
    pub prec: PrecArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub identity: String,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// sample left of the half-plane and continue every value there
    #[arg(long)]
    pub continued: bool,
    /// fixed term count for zeta-series
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub terms: Option<u64>,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub prec: PrecArg,
}

fn parse_rational_arg(text: &str) -> Result<BigRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}
