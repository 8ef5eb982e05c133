use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use nacas::lambdamu::ActionVariant;
use nacas_cli::{audit, emit, fixture_dir, GenFormat, MathFailure, SystemArgs};

#[derive(Parser)]
#[command(name = "nacas", version, about = "Obstruction systems for non-associative identities and their Groebner certificates")]
struct Cli {
    /// Worker threads for S-pair reduction; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    TwoSided,
    Commutative,
    Anticommutative,
}

impl From<Variant> for ActionVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::TwoSided => ActionVariant::TwoSided,
            Variant::Commutative => ActionVariant::Commutative,
            Variant::Anticommutative => ActionVariant::Anticommutative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Native,
    Singular,
}

#[derive(clap::Args)]
struct SystemOpts {
    /// System file: the Singular subset, or a native listing starting with `vars`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Coefficient characteristic, 0 or a prime; defaults to the file's.
    #[arg(long = "char")]
    characteristic: Option<u64>,
    /// Order: `dp`, `lp` or `Dp`, then optional `swap a b` pairs.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an obstruction system.
    Gen {
        #[arg(long, value_enum, default_value = "two-sided")]
        variant: Variant,
        #[arg(long, value_enum, default_value = "singular")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced Groebner basis, optionally with the lift matrix.
    Gb {
        #[command(flatten)]
        system: SystemOpts,
        #[arg(long)]
        lift: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a certificate expressing 1 in the ideal.
    Certify {
        #[command(flatten)]
        system: SystemOpts,
        /// Certificate output file; stdout when absent.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check a certificate by direct polynomial arithmetic.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        /// Also require the certificate's generators to be this system.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Run every check against the shipped fixtures.
    Audit {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop after the first failing step.
        #[arg(long)]
        fail_fast: bool,
    },
}

fn system_args(s: SystemOpts, threads: usize) -> SystemArgs {
    SystemArgs {
        input: s.input,
        characteristic: s.characteristic,
        order: s.order,
        threads,
    }
}

fn run(cli: Cli) -> Result<bool> {
    let threads = cli.threads;
    match cli.command {
        Command::Gen { variant, format, out } => {
            let format = match format {
                Format::Native => GenFormat::Native,
                Format::Singular => GenFormat::Singular,
            };
            let (text, n) = nacas_cli::gen_text(variant.into(), format)?;
            emit(out.as_deref(), &text)?;
            eprintln!("{n} polynomials");
        }
        Command::Gb { system, lift, out } => {
            let text = nacas_cli::gb(&system_args(system, threads), lift)?;
            emit(out.as_deref(), &text)?;
        }
        Command::Certify { system, cert } => {
            let text = nacas_cli::certify(&system_args(system, threads))?;
            emit(cert.as_deref(), &text)?;
        }
        Command::Verify { cert, input } => {
            print!("{}", nacas_cli::verify(&cert, input.as_deref())?);
        }
        Command::Audit { out, fail_fast } => {
            let report = audit::run_audit(&fixture_dir(), threads, fail_fast);
            let text = report.to_text();
            print!("{text}");
            if let Some(p) = out {
                emit(Some(&p), &text)?;
            }
            return Ok(report.pass());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<MathFailure>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
