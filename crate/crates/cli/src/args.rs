use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chebmass", version, about = "Chebyshev-type polynomials with endpoint point masses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate T_n, T_n^(M,N) or B_k^n at points
    Eval(EvalArgs),
    /// Bernstein coefficients of T_n^(M,N), or monomial/Chebyshev basis changes
    Convert(ConvertArgs),
    /// Closed-form weighted integral of B_r^n(x) T_i^(M,N)(2x-1) on [0,1]
    Integrate(IntegrateArgs),
    /// Orthogonality suite for T_0^(M,N) .. T_max-n^(M,N)
    Check(CheckArgs),
    /// Least-squares fit of a built-in target or CSV samples
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Masses {
    /// Mass at x = -1: "p/q" or an integer for exact arithmetic, a decimal for floats
    #[arg(long = "M", default_value = "0", allow_hyphen_values = true)]
    pub left: String,
    /// Mass at x = +1
    #[arg(long = "N", default_value = "0", allow_hyphen_values = true)]
    pub right: String,
}

fn degree(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("not a degree: {s}"))?;
    if n > crate::MAX_DEGREE {
        return Err(format!("degree {n} exceeds the cap of {}", crate::MAX_DEGREE));
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "T")]
    T,
    Gen,
    Bernstein,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_parser = degree)]
    pub n: usize,
    /// Bernstein index
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Evaluation points (repeat or separate with commas)
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub masses: Masses,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, value_parser = degree, required_unless_present_any = ["monomial", "chebyshev"])]
    pub n: Option<usize>,
    /// Monomial coefficients c_0,c_1,... to rewrite in the Chebyshev basis
    #[arg(long, conflicts_with_all = ["n", "chebyshev"], allow_hyphen_values = true)]
    pub monomial: Option<String>,
    /// Chebyshev coefficients c_0,c_1,... to rewrite in the monomial basis
    #[arg(long, conflicts_with_all = ["n", "monomial"], allow_hyphen_values = true)]
    pub chebyshev: Option<String>,
    #[command(flatten)]
    pub masses: Masses,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, value_parser = degree)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub i: usize,
    #[command(flatten)]
    pub masses: Masses,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "max-n", value_parser = degree, default_value_t = 8)]
    pub max_n: usize,
    /// Largest accepted |<phi_m, phi_n>| for m != n
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also emit the coefficient and orthogonality diagnostics
    #[arg(long)]
    pub report: bool,
    /// Seed for the randomized symmetry spot checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub masses: Masses,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// T_k^(M,N) under the weighted measure on [-1,1]
    Gen,
    /// T_k^(M,N)(2x-1) under dx on [0,1]
    GenDx,
    /// x^k under dx on [0,1] (Hilbert normal equations)
    Monomial,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// poly:c0,c1,..., abs, exp, runge, or csv:PATH
    #[arg(long)]
    pub target: String,
    #[arg(long, value_parser = degree)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Basis::Gen)]
    pub basis: Basis,
    /// Rows in the sample table (csv format)
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    #[command(flatten)]
    pub masses: Masses,
    #[command(flatten)]
    pub common: Common,
}
