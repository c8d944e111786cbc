//! Command-line front end for the Hardy-space reflection laboratory.
//!
//! Exit codes: 0 all assertions passed, 1 at least one assertion failed,
//! 2 invalid input or configuration, 3 numerical breakdown inside a
//! computation (quadrature, rank, or definiteness loss).

mod commands;
mod config;
mod emit;

use clap::Parser;

use commands::CliError;
use config::{CommandKind, CommonArgs};

#[derive(Parser, Debug)]
#[command(name = "hardylab", version, about = "Reflection operators on truncated Hardy space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Möbius laws, operator identities, and the polar decomposition
    Verify(CommonArgs),
    /// Spectral-measure identities and the density profile
    Spectral(CommonArgs),
    /// Eigenspace intersections and witness correlations
    Subspaces(CommonArgs),
    /// Geodesics between eigenspace pairs on the Grassmannian
    Geodesic(CommonArgs),
    /// Pairwise gap scan over point grids
    Scan(CommonArgs),
}

/// Rewrites `--tol.NAME=V` and `--tol.NAME V` into the canonical
/// `--tol NAME=V` so both spellings reach the same clap flag.
fn preprocess_tol(argv: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter().peekable();
    while let Some(arg) = iter.next() {
        if let Some(rest) = arg.strip_prefix("--tol.") {
            out.push("--tol".into());
            if rest.contains('=') {
                out.push(rest.into());
            } else if let Some(value) = iter.next() {
                out.push(format!("{rest}={value}"));
            } else {
                out.push(rest.into());
            }
        } else {
            out.push(arg);
        }
    }
    out
}

fn run() -> i32 {
    let argv = preprocess_tol(std::env::args().collect());
    let cli = Cli::parse_from(argv);
    let (kind, args) = match &cli.command {
        Command::Verify(a) => (CommandKind::Verify, a),
        Command::Spectral(a) => (CommandKind::Spectral, a),
        Command::Subspaces(a) => (CommandKind::Subspaces, a),
        Command::Geodesic(a) => (CommandKind::Geodesic, a),
        Command::Scan(a) => (CommandKind::Scan, a),
    };

    let cfg = match config::resolve(kind, args) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("hardylab: {msg}");
            return 2;
        }
    };

    let mut em = match emit::Emitter::new(cfg.out.as_deref(), cfg.csv) {
        Ok(em) => em,
        Err(e) => {
            eprintln!("hardylab: cannot open output: {e}");
            return 2;
        }
    };

    let outcome = match kind {
        CommandKind::Verify => commands::verify::run(&cfg, &mut em),
        CommandKind::Spectral => commands::spectral::run(&cfg, &mut em),
        CommandKind::Subspaces => commands::subspaces::run(&cfg, &mut em),
        CommandKind::Geodesic => commands::geodesic::run(&cfg, &mut em),
        CommandKind::Scan => commands::scan::run(&cfg, &mut em),
    };

    if let Err(e) = em.finish() {
        eprintln!("hardylab: write failed: {e}");
        return 2;
    }

    match outcome {
        Ok(()) => {
            if em.any_failed() {
                1
            } else {
                0
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("hardylab: {msg}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("hardylab: numerical failure: {msg}");
            3
        }
    }
}

fn main() {
    std::process::exit(run());
}

#[cfg(test)]
mod tests {
    use super::preprocess_tol;

    fn v(args: &[&str]) -> Vec<String> {
        args.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tol_spellings_normalize() {
        assert_eq!(
            preprocess_tol(v(&["hl", "--tol.mass=2e-3"])),
            v(&["hl", "--tol", "mass=2e-3"])
        );
        assert_eq!(
            preprocess_tol(v(&["hl", "--tol.mass", "2e-3", "--a", "0.5"])),
            v(&["hl", "--tol", "mass=2e-3", "--a", "0.5"])
        );
        assert_eq!(
            preprocess_tol(v(&["hl", "--tol", "mass=2e-3"])),
            v(&["hl", "--tol", "mass=2e-3"])
        );
    }
}
