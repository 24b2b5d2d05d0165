use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbicensus_core::census::DeltaConvention;
use orbicensus_core::{parse_signature, OrbifoldSignature};

mod commands;

/// Finite abelian orbifolds on projective space: uniformizability, deck
/// groups, Euler numbers and the Calabi-Yau census.
#[derive(Parser)]
#[command(name = "orbicensus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SignatureArgs {
    /// Signature in bracket notation, e.g. '[2_2,3,3,3]' or '[2,8,8,8,8]'
    signature: String,
    /// Dimension n of the ambient ℙⁿ
    #[arg(long)]
    dim: u32,
}

impl SignatureArgs {
    fn parse(&self) -> Result<OrbifoldSignature, Failure> {
        parse_signature(&self.signature, self.dim)
            .map_err(|e| Failure::Usage(format!("invalid signature '{}': {e}", self.signature)))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Uniformizability verdict with its certificate or the failing prime power
    Check {
        #[command(flatten)]
        sig: SignatureArgs,
        /// Also test local injectivity on every stratum of size ≤ n
        #[arg(long)]
        paranoid: bool,
    },
    /// Order and invariant factors of the orbifold fundamental group
    Group {
        #[command(flatten)]
        sig: SignatureArgs,
    },
    /// Orbifold Euler number, and the Euler number of the universal cover
    Euler {
        #[command(flatten)]
        sig: SignatureArgs,
    },
    /// Calabi-Yau defect, degree bounds and family dimensions
    Cy {
        #[command(flatten)]
        sig: SignatureArgs,
    },
    /// All uniformizable Calabi-Yau signatures on ℙⁿ, one per line
    Enumerate {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        linear_only: bool,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// The census table for ℙⁿ, optionally audited against a golden table
    Census {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        linear_only: bool,
        /// Golden table; relative paths also resolve against $ORBICENSUS_GOLDEN_DIR
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, default_value = "moduli")]
        delta_convention: DeltaConvention,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Lift along the diagonal sub-orbifold with exponent C on the given lines
    Lift {
        #[command(flatten)]
        sig: SignatureArgs,
        /// 1-based positions in the signature as written, e.g. 2,3,4
        #[arg(long, value_delimiter = ',', required = true)]
        branch: Vec<usize>,
        #[arg(long)]
        c: u64,
    },
    /// Index-2 quotients of the all-2 signature with 2n+2 hyperplanes
    Enriques {
        #[arg(long)]
        dim: u32,
        /// Test local injectivity on every stratum of size ≤ n
        #[arg(long)]
        paranoid: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

enum Failure {
    Usage(String),
    Domain(orbicensus_core::Error),
    /// Golden comparison found differences outside the errata ledger.
    Unexpected(usize),
}

impl From<orbicensus_core::Error> for Failure {
    fn from(e: orbicensus_core::Error) -> Self {
        match e {
            orbicensus_core::Error::Io(_) | orbicensus_core::Error::Golden(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

fn set_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { sig, paranoid } => commands::check(&sig.parse()?, paranoid),
        Command::Group { sig } => commands::group(&sig.parse()?),
        Command::Euler { sig } => commands::euler(&sig.parse()?),
        Command::Cy { sig } => commands::cy(&sig.parse()?),
        Command::Enumerate { dim, linear_only, jobs } => {
            set_jobs(jobs)?;
            commands::enumerate(dim, linear_only)
        }
        Command::Census { dim, linear_only, golden, delta_convention, format, jobs } => {
            set_jobs(jobs)?;
            commands::census(dim, linear_only, golden.as_deref(), delta_convention, format)
        }
        Command::Lift { sig, branch, c } => {
            sig.parse()?;
            commands::lift(&sig.signature, sig.dim, &branch, c)
        }
        Command::Enriques { dim, paranoid } => commands::enriques(dim, paranoid),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Unexpected(count)) => {
            eprintln!("error: {count} mismatches are not in the errata ledger");
            ExitCode::from(3)
        }
    }
}
