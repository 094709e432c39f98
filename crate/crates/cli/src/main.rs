use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "deckpair", version, about = "Build and verify ordered sets with equal decks")]
struct Cli {
    /// Worker threads for deck matching and searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildKind {
    R,
    RAdjacent,
    QSearch,
    Pair,
    FoldedPair,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

/// Where Q comes from for commands that need it.
#[derive(clap::Args, Debug, Clone)]
pub struct QSource {
    /// Load Q from a gadget JSON file instead of searching.
    #[arg(long)]
    q: Option<PathBuf>,

    /// Candidate budget for the Q search, e.g. 1e6.
    #[arg(long, value_parser = parse_budget, default_value = "1e6")]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a gadget or pair and write it to files.
    Build {
        kind: BuildKind,
        /// Number of middle gadgets.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Population target of the folded pair (even, at least 2).
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[command(flatten)]
        q: QSource,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite (or `all`) and report every claim.
    Verify {
        suite: String,
        #[arg(long, default_value_t = deckpair_core::verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        q: QSource,
        /// Directory for the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Equal card ratio of two posets, with the card matching.
    Ecr {
        p: PathBuf,
        q: PathBuf,
        /// Check the tower bound (4n+6)/|P| for this n.
        #[arg(long)]
        n: Option<usize>,
        /// Directory for the matching file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cover relation as rank-layered DOT.
    ExportDot {
        p: PathBuf,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fold a poset along a seam and report the fold's side conditions.
    Fold {
        /// Poset JSON file.
        p: PathBuf,
        /// Seam-fold JSON file: `seam`, `f_side`, `s_side` labels and `mode`.
        seam: PathBuf,
        /// Second poset and seam, checked as a pair with the first.
        #[arg(long, num_args = 2, value_names = ["P2", "SEAM2"])]
        pair: Option<Vec<PathBuf>>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("`{s}` is not a positive whole number"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Build {
            kind,
            n,
            s,
            q,
            out,
            format,
        } => commands::build(kind, n, s, &q, &out, format),
        Command::Verify {
            suite,
            seed,
            q,
            out,
            json,
        } => commands::verify(&suite, seed, &q, out.as_deref(), json),
        Command::Ecr { p, q, n, out } => commands::ecr(&p, &q, n, out.as_deref()),
        Command::ExportDot { p, out } => commands::export_dot(&p, out.as_deref()),
        Command::Fold { p, seam, pair, out } => commands::fold(&p, &seam, pair.as_deref(), &out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_accept_scientific_notation() {
        assert_eq!(parse_budget("1e7"), Ok(10_000_000));
        assert_eq!(parse_budget("250"), Ok(250));
        assert!(parse_budget("0").is_err());
        assert!(parse_budget("1.5").is_err());
    }

    #[test]
    fn command_line_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
