use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Exact experiments on MSR subspace families and vector-code repair.
#[derive(Parser, Debug)]
#[command(name = "msrlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the explicit (ell = r^m, r) family and write it as JSON.
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        lambda: u32,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the direct-sum, invariance and invertibility conditions of a family.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Compare a family's size with 4 r ln(ell).
    Bound {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Invariant-map dimensions along a prefix order, as CSV.
    Decay {
        #[arg(long = "in")]
        input: PathBuf,
        /// identity, random:<seed>, or a comma-separated permutation.
        #[arg(long, default_value = "identity")]
        order: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate construction size against the bound over an (r, m) grid.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        m: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        lambda: u32,
        /// Largest ell allowed in the grid.
        #[arg(long, default_value_t = msrlab::sweep::DEFAULT_CEILING)]
        ceiling: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also run the full verification on every family.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repair one node of the (4, 2) EVENODD code over GF(2).
    Evenodd {
        /// s1, s2, p1 or p2.
        #[arg(long)]
        repair: String,
        /// Data bits a1,a2,b1,b2; every codeword is checked if omitted.
        #[arg(long, value_delimiter = ',')]
        data: Option<Vec<u32>>,
        /// Also write the code as JSON.
        #[arg(long)]
        write_code: Option<PathBuf>,
        /// Also write the repair scheme of the systematic nodes as JSON.
        #[arg(long)]
        write_scheme: Option<PathBuf>,
    },
    /// Check a repair scheme against a code and measure its bandwidth.
    RepairCheck {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        /// Systematic node (0-based); all of them if omitted.
        #[arg(long)]
        node: Option<usize>,
        /// Seed for the random codeword used in the repair trial.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Turn a constant repair scheme into an MSR subspace family.
    Extract {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The cutset bound (n - 1) ell / (n - k).
    Cutset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Cross-check the solvers against brute force.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(commands::Status::Pass) => ExitCode::SUCCESS,
        Ok(commands::Status::Fail(report)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            eprintln!("property check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
