//! `unram`: command-line front end for the Heisenberg torsor pipelines.
//!
//! Every subcommand prints one JSON document on stdout (pretty printed,
//! deterministic for a fixed configuration and seed) and embeds the
//! configuration it ran with. Exit codes: 0 success, 1 internal error,
//! 2 invalid input, 3 refused or negative verdict, 4 effort budget
//! exhausted.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

mod cmd;
mod error;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "unram", version)]
#[command(about = "Unramified Heisenberg extensions of quadratic fields from torsion on hyperelliptic Jacobians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Heisenberg group Heis_{2d+1}(Z/n): order n^(2d+1), centre Z/n,
    /// exactness of 0 -> Z/n -> Heis -> (Z/n)^(2d) -> 0, exponent n for odd
    /// n, the (Z/n)^x twist action and the CRT splitting for composite n.
    Group(GroupArgs),
    /// The curve y^2 = x^(2n) - (1 + lambda^2) x^n + lambda^2 of genus n - 1
    /// with its rational Weierstrass point (1, 0): the two rational classes
    /// of exact order n (independence certified modulo a good prime) and
    /// Jacobian orders of reductions.
    Curve(CurveArgs),
    /// Weil pairing matrix of the family's n-torsion classes over F_p with
    /// p = 1 mod n. Over Q the pairing takes values in mu_n(Q) = {1}, so the
    /// matrix must vanish at every good prime.
    Pairing(PairingArgs),
    /// Certifies that the product of pairings e_n(L_i, L_i') is trivial,
    /// the condition for the abelian mu_n^(2d)-torsor to lift to a
    /// Heisenberg torsor, and that the classes are independent (the torsor
    /// is geometrically connected). Emits the Kummer functions of the
    /// abelian layer normalized to split at (1, 0).
    Certify(CertifyArgs),
    /// Specializes the certified torsor at rational points x0 of bounded
    /// height: each point gives L = Q(sqrt f(x0)) and an extension that is
    /// checked to be unramified outside S, split at S and connected.
    /// Imaginary L passing every check get their class group computed,
    /// whose n-rank must then be at least 2.
    Specialize(SpecializeArgs),
    /// Counts the distinct fields L produced by specialization with
    /// |disc L| <= N, for each N of a grid, next to the growth exponent
    /// 1/(4g + 2) expected of such counts.
    Census(CensusArgs),
    /// Re-executes every check recorded in a certificate (JSON) or a file
    /// of specialization records (JSONL) and reports discrepancies. Unknown
    /// verdicts stay unknown.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct FamilyArgs {
    /// Odd n > 1; the curve has genus n - 1.
    #[arg(long)]
    pub n: u64,
    /// Rational lambda = a/b with lambda^2 != 0, 1.
    #[arg(long)]
    pub lambda: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct Budgets {
    /// Pollard-Brent iterations per integer factorization.
    #[arg(long, env = "UNRAM_FACTOR_BUDGET", default_value_t = 2_000_000)]
    pub factor_budget: u64,
    /// Search bound for good primes.
    #[arg(long, env = "UNRAM_PRIME_BOUND", default_value_t = 100_000)]
    pub prime_bound: u64,
    /// Attempts at drawing disjoint divisor representatives.
    #[arg(long, env = "UNRAM_RANDOM_BUDGET", default_value_t = 200)]
    pub random_budget: usize,
    /// Seed for every randomized step.
    #[arg(long, env = "UNRAM_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GroupArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub d: usize,
    /// Check the group axioms and structure.
    #[arg(long)]
    pub check_axioms: bool,
    /// Check over all elements (small groups only) instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Random samples when not exhaustive.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, env = "UNRAM_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurveArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Search for and certify the n-torsion classes.
    #[arg(long)]
    pub find_torsion: bool,
    /// Good primes at which to count the Jacobian.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Height bound for rational points tried in the torsion search.
    #[arg(long, default_value_t = 3)]
    pub search_height: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PairingArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// A good prime p = 1 mod n.
    #[arg(long)]
    pub prime: u64,
    #[command(flatten)]
    pub budgets: Budgets,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Control {
    /// The family torsor itself.
    None,
    /// L' = L: the pairing product is trivial but the classes are dependent.
    Dependent,
    /// A pair of classes over F_7 with nontrivial pairing on an elliptic
    /// curve with full rational 3-torsion.
    Symplectic,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of class pairs; the family provides d = 1.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Good primes p = 1 mod n at which the pairing product is checked.
    #[arg(long, default_value_t = 3)]
    pub primes: usize,
    #[arg(long, value_enum, default_value_t = Control::None)]
    pub control: Control,
    #[command(flatten)]
    pub budgets: Budgets,
    /// Certificate output path.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpecializeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Height bound on x0 = a/b (max(|a|, b) <= H).
    #[arg(long)]
    pub height: u64,
    /// Finite primes of S; must contain every prime dividing n.
    #[arg(long = "S", value_delimiter = ',', required = true)]
    pub s: Vec<u64>,
    /// Largest |disc| whose class group is enumerated; above it only the
    /// classes of the Kummer ideals are used (a lower bound on the rank).
    #[arg(long, env = "UNRAM_CLASS_GROUP_BOUND", default_value_t = 10_000_000_000)]
    pub class_group_bound: u64,
    /// Split primes used as power-residue witnesses of connectedness.
    #[arg(long, default_value_t = 24)]
    pub character_primes: usize,
    #[command(flatten)]
    pub budgets: Budgets,
    /// Records output path (JSON lines).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CensusArgs {
    #[command(flatten)]
    pub specialize: SpecializeArgs,
    /// Discriminant bounds N.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 100_000, 10_000_000, 1_000_000_000, 1_000_000_000_000])]
    pub grid: Vec<u64>,
    /// Report output path.
    #[arg(long)]
    #[serde(skip)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReplayArgs {
    /// Certificate (JSON) or records (JSONL).
    #[serde(skip)]
    pub file: PathBuf,
    #[arg(long, env = "UNRAM_SEED", default_value_t = 0)]
    pub seed: u64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = match cli.command {
        Command::Group(a) => cmd::group(&a)?,
        Command::Curve(a) => cmd::curve(&a)?,
        Command::Pairing(a) => cmd::pairing(&a)?,
        Command::Certify(a) => cmd::certify(&a)?,
        Command::Specialize(a) => cmd::specialize(&a)?,
        Command::Census(a) => cmd::census(&a)?,
        Command::Replay(a) => cmd::replay(&a)?,
    };
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{}", out.json);
    match out.negative {
        Some(why) => Err(CliError::Refused(why)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("unram: {e}");
            ExitCode::from(e.code())
        }
    }
}
