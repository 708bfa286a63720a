//! Command-line front end.
//!
//! Verbs: check | decompose | canonical | rankone | generate | verify | enumerate.
//! Exit codes: 0 success/holds, 1 property or verification failure, 2 usage,
//! parse and hypothesis errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hadamat_cli::commands::{
    run_check, run_decompose, run_enumerate, run_generate, run_rankone, run_verify,
    CommandOutcome, GenKind, GenerateRequest, EXIT_USAGE,
};
use hadamat_cli::format::parse_field_flag;
use hadamat::GenMode;

#[derive(Parser)]
#[command(name = "hadamat", version, about = "Exact checks and certificates for matrices whose powers coincide with their Hadamard powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file to read.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the certificate (stdout if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Positive,
    Negative,
    Idempotent,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    SafeColumns,
    Rejection,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether ordinary powers coincide with Hadamard powers.
    Check(InputArgs),
    /// Produce the disjoint-idempotent decomposition certificate.
    Decompose(InputArgs),
    /// Produce the permutation canonical form of an idempotent (0,1)-matrix.
    Canonical {
        #[command(flatten)]
        io: InputArgs,
        /// Run the block extraction even over inadmissible characteristic.
        #[arg(long)]
        force: bool,
    },
    /// Produce the biorthogonal rank-one factorization certificate.
    Rankone(InputArgs),
    /// Generate an instance and its ground-truth certificate.
    Generate {
        /// positive: passing matrix; negative: failing matrix; idempotent: (0,1) idempotent.
        #[arg(long)]
        kind: KindArg,
        /// Field: "rational" or "gf:<p>".
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank (size of the identity block).
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Zero-row / nonzero-column indices.
        #[arg(long, default_value_t = 0)]
        s2: usize,
        /// Nonzero-row / zero-column indices.
        #[arg(long, default_value_t = 0)]
        s3: usize,
        /// Zero-row / zero-column indices.
        #[arg(long, default_value_t = 0)]
        s4: usize,
        /// Number of distinct weights (positive kind).
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::SafeColumns)]
        mode: ModeArg,
        /// Matrix size (negative kind only).
        #[arg(long)]
        n: Option<usize>,
        /// Where to write the matrix file (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the certificate (stdout if omitted).
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Re-verify a certificate against a matrix file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Enumerate all small matrices over a pool and cross-check the theory.
    Enumerate {
        /// Field: "rational" or "gf:<p>".
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated entry pool, e.g. "0,1" or "0,1,1/2".
        #[arg(long)]
        pool: String,
        /// Maximum number of matrices to enumerate.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        /// Where to write the report (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn emit(text: &str, target: Option<&PathBuf>) -> Result<(), String> {
    match target {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(outcome: &CommandOutcome, output: Option<&PathBuf>) -> ExitCode {
    let json = outcome.certificate.to_json();
    if let Err(msg) = emit(&json, output) {
        eprintln!("{msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check(io) => match read_input(&io.input) {
            Ok(text) => finish(&run_check(&text), io.output.as_ref()),
            Err(msg) => usage_error(&msg),
        },
        Command::Decompose(io) => match read_input(&io.input) {
            Ok(text) => finish(&run_decompose(&text), io.output.as_ref()),
            Err(msg) => usage_error(&msg),
        },
        Command::Canonical { io, force } => match read_input(&io.input) {
            Ok(text) => finish(&run_canonical_wrapper(&text, force), io.output.as_ref()),
            Err(msg) => usage_error(&msg),
        },
        Command::Rankone(io) => match read_input(&io.input) {
            Ok(text) => finish(&run_rankone(&text), io.output.as_ref()),
            Err(msg) => usage_error(&msg),
        },
        Command::Generate {
            kind,
            field,
            seed,
            m,
            s2,
            s3,
            s4,
            k,
            mode,
            n,
            output,
            cert,
        } => {
            let field = match parse_field_flag(&field) {
                Ok(f) => f,
                Err(e) => return usage_error(&e.to_string()),
            };
            let request = GenerateRequest {
                kind: match kind {
                    KindArg::Positive => GenKind::Positive,
                    KindArg::Negative => GenKind::Negative,
                    KindArg::Idempotent => GenKind::Idempotent,
                },
                field,
                seed,
                m,
                s2,
                s3,
                s4,
                k,
                mode: match mode {
                    ModeArg::SafeColumns => GenMode::SafeColumns,
                    ModeArg::Rejection => GenMode::Rejection,
                },
                n,
            };
            match run_generate(&request) {
                Ok(artifacts) => {
                    if let Err(msg) = emit(&artifacts.matrix_file, output.as_ref()) {
                        return usage_error(&msg);
                    }
                    if let Err(msg) = emit(&artifacts.certificate.to_json(), cert.as_ref()) {
                        return usage_error(&msg);
                    }
                    ExitCode::SUCCESS
                }
                Err(msg) => usage_error(&msg),
            }
        }
        Command::Verify { input, cert } => {
            let matrix_text = match read_input(&input) {
                Ok(t) => t,
                Err(msg) => return usage_error(&msg),
            };
            let cert_json = match read_input(&cert) {
                Ok(t) => t,
                Err(msg) => return usage_error(&msg),
            };
            let (code, message) = run_verify(&matrix_text, &cert_json);
            println!("{message}");
            ExitCode::from(code)
        }
        Command::Enumerate {
            field,
            n,
            pool,
            budget,
            output,
        } => match run_enumerate(&field, n, &pool, budget) {
            Ok((report, code)) => {
                let mut json =
                    serde_json::to_string_pretty(&report).expect("report serializes");
                json.push('\n');
                if let Err(msg) = emit(&json, output.as_ref()) {
                    return usage_error(&msg);
                }
                ExitCode::from(code)
            }
            Err(msg) => usage_error(&msg),
        },
    }
}

fn run_canonical_wrapper(text: &str, force: bool) -> CommandOutcome {
    hadamat_cli::commands::run_canonical(text, force)
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}
