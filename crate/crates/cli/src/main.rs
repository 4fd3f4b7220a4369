mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polyimage::Error;

#[derive(Parser, Debug)]
#[command(name = "polyimage", version, about = "Images of noncommutative polynomials on matrix algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Polynomial text, or @file. Repeat for commands taking several.
    #[arg(long = "poly", allow_hyphen_values = true)]
    pub poly: Vec<String>,
    /// Matrix size.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Q or Fp:<p>.
    #[arg(long, default_value = "Q")]
    pub field: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials per randomized search.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    /// Target matrix as @file or inline JSON.
    #[arg(long)]
    pub target: Option<String>,
    /// Write the JSON result to this file (a leading @ is optional).
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and normalize a polynomial.
    Parse(Common),
    /// Identity / central / neither on M_n.
    Classify(Common),
    /// Local linear dependence of several polynomials via the Capelli polynomial.
    CapelliDep(Common),
    /// Least k with 1, f, ..., f^k locally dependent.
    PowerIndex(Common),
    /// Search for an invertible value of f.
    FindInvertible(Common),
    /// Search for a value with rational spectrum and multiplicities at most n/2.
    FindSpectrum(Common),
    /// Split a traceless target into at most four square-zero matrices.
    DecomposeSq0(Common),
    /// Write a traceless target as a single commutator.
    CommutatorRealize(Common),
    /// Certificate for a square-zero target as one difference of image elements.
    Sq0Cert(Common),
    /// Certificate for a traceless target as at most four differences.
    Waring(Common),
    /// Certificate for any target as a linear combination of at most nine image elements.
    Nine(Common),
    /// Certificate for [w, z] through the three-term identity.
    CommutatorCert {
        #[command(flatten)]
        common: Common,
        /// First matrix, @file or inline JSON.
        #[arg(long)]
        w: String,
        /// Second matrix, @file or inline JSON.
        #[arg(long)]
        z: String,
    },
    /// Term-count bounds.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// commutative, hilbert, field, square-zero or nine; all when omitted.
        #[arg(long)]
        regime: Option<String>,
    },
    /// Re-check a certificate file.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Certificate, @file or inline JSON.
        #[arg(long)]
        cert: String,
    },
    /// Floating-point residuals of the conjugation flow.
    FlowDemo(Common),
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum Failure {
    /// A verified negative answer, or a hypothesis that does not hold.
    Negative(String),
    /// A search ran out of budget.
    Search(String),
    /// Bad input.
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Search(_) => 2,
            Failure::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Negative(m) | Failure::Search(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Identity { .. } | Error::Central { .. } => Failure::Negative(msg),
            Error::SearchFailure { .. } | Error::SpectrumSearch { .. } => Failure::Search(msg),
            _ => Failure::Usage(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
