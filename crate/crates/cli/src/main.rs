//! Command-line front end: every subcommand prints one JSON document (or a
//! CSV projection) with a provenance block.
//!
//! Exit codes: 0 pass, 1 usage, 2 invariant or precondition failure,
//! 3 tolerance failure.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "shortvar", version, about = "Short-interval variance experiments over F_q[t]")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Worker threads (1 runs every kernel sequentially; default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Purity tolerance for the good/mixed split.
    #[arg(long, global = true, default_value_t = shortvar::lfunc::TOL_RH)]
    pub tol_rh: f64,
    /// Relative tolerance of the exact variance identity.
    #[arg(long, global = true, default_value_t = shortvar::experiments::TOL_ID)]
    pub tol_id: f64,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 20_000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Direct,
    Chars,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field parameters, modulus and generator.
    FieldInfo {
        #[arg(long)]
        q: String,
    },
    /// Factorization of a polynomial given as "c0,c1,...,cd".
    Factor {
        #[arg(long)]
        q: String,
        #[arg(long)]
        poly: String,
    },
    /// Λ_ρ(f).
    Lambda {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        poly: String,
    },
    /// Dirichlet characters mod t^m.
    Chars {
        #[arg(long)]
        q: String,
        #[arg(long)]
        m: u32,
        /// Include odd characters.
        #[arg(long)]
        all: bool,
        /// Run the three orthogonality relations.
        #[arg(long)]
        check: bool,
    },
    /// Trace series, L-polynomial and classification of twisted L-functions.
    Lfunction {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        m: u32,
        /// One character as "e_1/o_1,...,e_r/o_r" (default: all even ones).
        #[arg(long = "char")]
        character: Option<String>,
        /// Number of trace coefficients (default: census truncation).
        #[arg(long)]
        degrees: Option<u32>,
    },
    /// Histogram of S over the nontrivial even characters mod t^m.
    DegreeCensus {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        m: u32,
    },
    /// Variance of ν_ρ(A;h) over A ∈ M_n.
    Variance {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
    },
    /// Normalized variance against min{n, S} for a list of fields.
    LimitTable {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        /// Comma-separated field sizes, e.g. "3,5,7,3^2".
        #[arg(long)]
        q_list: String,
    },
    /// Monte Carlo ∫_{U(S)} |Tr g^n|² dg.
    Rmt {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        power: u32,
        /// Also run the χ² eigenphase uniformity test.
        #[arg(long)]
        uniformity: bool,
    },
    /// Exact identities (variance, expectation, involution) with per-case residuals.
    IdentitySuite {
        /// Restrict to one representation.
        #[arg(long)]
        rep: Option<String>,
    },
    /// All ten acceptance criteria with a verdict each.
    Acceptance,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    if let Some(w) = cli.global.workers {
        if w == 0 {
            eprintln!("error: --workers must be >= 1");
            return ExitCode::from(1);
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli, &argv) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
