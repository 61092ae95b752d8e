//! `evo`: analyses of evolution operators from the command line.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CliError;
use report::Emit;

/// Evolution operators V(x) = x² of algebras over binary fields.
#[derive(Parser, Debug)]
#[command(name = "evo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = commands::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: classification, profile, train polynomial, invariants.
    Analyze { file: String },
    /// Orbit of one element.
    Orbit {
        file: String,
        /// Coordinates as comma-separated field-element bitmasks.
        #[arg(long)]
        element: String,
    },
    /// Minimal train polynomial.
    Train { file: String },
    /// Similitude invariants and canonical-form parameters (over F_2).
    Canon { file: String },
    /// Semi-isomorphism test between two algebras.
    SemiIso { a: String, b: String },
    /// Striction, factorization and compatible structure of a polynomial.
    Striction {
        /// Polynomial as bits: decimal, 0b... or 0x... (bit k = coefficient of X^k).
        #[arg(long)]
        poly: String,
        /// Also compute the compatible structure over F_{2^p}.
        #[arg(long)]
        field_degree: Option<u32>,
    },
    /// Generate an algebra file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Ring or cycle size.
        #[arg(long)]
        n: Option<usize>,
        /// Dimension for random algebras.
        #[arg(long)]
        dim: Option<usize>,
        /// Extension degree of the field F_{2^p}.
        #[arg(long, default_value_t = 1)]
        field_degree: u32,
        /// Block sizes, e.g. "2,1".
        #[arg(long)]
        s: Option<String>,
        /// Periodic exponents, e.g. "1,0".
        #[arg(long)]
        t: Option<String>,
        /// Odd part of the period.
        #[arg(long)]
        q: Option<u64>,
        /// Cycle length for cycle-tail.
        #[arg(long)]
        p: Option<usize>,
        /// Constant c of x ↦ x² + c mod m.
        #[arg(long)]
        c: Option<u64>,
        /// Modulus m of x ↦ x² + c mod m.
        #[arg(long)]
        m: Option<u64>,
        /// Polynomial bits for companion algebras.
        #[arg(long)]
        poly: Option<String>,
        /// Random algebras: full symmetric table instead of a natural basis.
        #[arg(long)]
        general: bool,
        /// Output file (stdout if absent).
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Weighted-algebra analysis.
    Baric { file: String },
    /// Replay the paper's worked examples against the oracles.
    VerifyPaper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Rule90,
    Rule150,
    Cyclic,
    Remark,
    Quadratic,
    F4Infinity,
    Random,
    As,
    Ast,
    CycleTail,
    Companion,
    WeightedAs,
    PerturbedWeightedAs,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let json = cli.json;
    let out = match cli.command {
        Command::Analyze { file } => commands::analyze(&file)?.emit(json),
        Command::Orbit { file, element } => commands::orbit(&file, &element)?.emit(json),
        Command::Train { file } => commands::train(&file)?.emit(json),
        Command::Canon { file } => commands::canon(&file)?.emit(json),
        Command::SemiIso { a, b } => commands::semi_iso(&a, &b)?.emit(json),
        Command::Striction { poly, field_degree } => {
            commands::striction(&poly, field_degree)?.emit(json)
        }
        Command::Gen {
            kind,
            n,
            dim,
            field_degree,
            s,
            t,
            q,
            p,
            c,
            m,
            poly,
            general,
            output,
        } => {
            let params = commands::GenParams {
                n,
                dim,
                field_degree,
                s,
                t,
                q,
                p,
                c,
                m,
                poly,
                general,
                seed: cli.seed,
            };
            let algebra = commands::generate(kind, &params)?;
            let text = algebra.to_json();
            match output {
                Some(path) => {
                    std::fs::write(&path, text + "\n")
                        .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                    let r = report::Written { schema: 1, path, dim: algebra.dim() };
                    r.emit(json)
                }
                None => text,
            }
        }
        Command::Baric { file } => commands::baric(&file)?.emit(json),
        Command::VerifyPaper => {
            let r = commands::verify_paper();
            let failed = r.fail > 0;
            println!("{}", r.emit(json));
            return Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    };
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            if json {
                let body = serde_json::json!({ "schema": 1, "error": err.to_string(), "exit_code": err.exit_code() });
                println!("{body}");
            }
            eprintln!("evo: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
