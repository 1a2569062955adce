mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use steenrod_core::suites::DEFAULT_SEED;

/// Steenrod algebra computations on H*(BV) and gap-based checks for
/// unstable modules.
///
/// Operations: Sq^n, Q[t], Q[t;s], Sq0^s at p = 2; P^n, beta, P0^s, Q[t],
/// Q[t;s] at odd p. Juxtaposition composes right to left (the rightmost
/// operation acts first), composition binds tighter than `+`.
///
/// Elements: `(n1,...,nd)` monomials or `x1^a x2^b` products joined by `+`;
/// at odd p a coefficient is written `c*(n1,...,nd)` and exponents are
/// encoded (2m + e stands for u^m t^e). A term in summand k of
/// H*(BV_d)^alpha is written `(n1,...,nd)@k`.
///
/// Exit status: 0 success or inconclusive, 1 a verification suite reported
/// failures, 10 non-realizability certificate produced, 11 Adams violation
/// found, 64 usage error, 65 invalid input, 66 unreadable file, 70 internal
/// error. With --machine the last line of standard output is a JSON record.
#[derive(Parser, Debug)]
#[command(name = "steenrod", version, verbatim_doc_comment)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Prime for element and operation parsing.
    #[arg(long, global = true, default_value_t = 2)]
    pub prime: u32,
    /// Number of variables; inferred from the element when omitted.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Number of summands of H*(BV_d).
    #[arg(long, global = true, default_value_t = 1)]
    pub alpha: u32,
    /// Overrides the degree bound of a module file.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    /// Also print a JSON record as the last line.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply an operation expression to an element.
    Apply { op: String, element: String },
    /// Multiply two Milnor basis elements, written Sq(r1,...,rk).
    MilnorMul { a: String, b: String },
    /// Q_t^s as a Milnor sum, or applied to an element.
    Qts {
        t: u32,
        s: u32,
        #[arg(long, conflicts_with = "apply")]
        milnor: bool,
        #[arg(long, value_name = "ELEMENT")]
        apply: Option<String>,
    },
    /// Occupied degrees and gaps of a module description.
    Gaps { module: PathBuf },
    /// Non-realizability verdict for a module description.
    Check { module: PathBuf },
    /// Adams-type check on a finite module table.
    Adams { table: PathBuf },
    /// Run a named verification suite (or `all`).
    VerifySuite { name: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Apply { op, element } => commands::apply(g, op, element),
        Command::MilnorMul { a, b } => commands::milnor_mul(g, a, b),
        Command::Qts { t, s, milnor, apply } => commands::qts(g, *t, *s, *milnor, apply.as_deref()),
        Command::Gaps { module } => commands::gaps(g, module),
        Command::Check { module } => commands::check(g, module),
        Command::Adams { table } => commands::adams(g, table),
        Command::VerifySuite { name } => commands::verify_suite(g, name),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(record) = out.record.filter(|_| g.machine) {
                println!("{record}");
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.status)
        }
    }
}
