use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use quasiweight::families::FamilyTag;
use quasiweight::oracle::DEFAULT_BUDGET;
use quasiweight::profile::DEFAULT_MAX_N;

#[derive(Parser, Debug)]
#[command(name = "quasiweight", version, about = "Weight quasi-polynomials of integer generator matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Largest accepted column count.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N)]
    pub max_n: usize,

    /// Largest `q^k` the brute-force enumerator will visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub oracle_budget: u64,

    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lcm period, elementary divisors and the weight enumerator of every class.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
    /// Raw weight constituents, or distributions at the given q.
    Constituents {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        q: QArgs,
    },
    /// Per-class minimum-weight stability and d_q over a range (default 2..10).
    Minweight {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        q: QArgs,
    },
    /// Tutte quasi-polynomial constituents or values.
    Tutte {
        #[command(flatten)]
        input: Input,
        /// Rational, e.g. `3` or `3/2`; needs --v.
        #[arg(long, requires = "v", conflicts_with = "grid")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
        /// Evaluate on every integer point of `A..B` squared.
        #[arg(long, value_parser = parse_range)]
        grid: Option<QRange>,
        /// Also check the inverse Greene identity at each point.
        #[arg(long)]
        greene: bool,
    },
    /// Generator of N_k or Z_k and its closed-form characteristic values.
    Family {
        tag: FamilyTag,
        k: usize,
        #[command(flatten)]
        q: QArgs,
        /// Print only the generator, in the matrix text format.
        #[arg(long)]
        emit_matrix: bool,
    },
    /// Cross-checks against brute force and the Greene identities (default q 1..12).
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        q: QArgs,
        /// Check these constituents (JSON from `constituents --format json`)
        /// instead of freshly computed ones.
        #[arg(long)]
        constituents: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Matrix file, or `-` for standard input.
    pub path: Option<PathBuf>,
    /// Family generator instead of a file, e.g. `--family z 5`.
    #[arg(long, num_args = 2, value_names = ["TAG", "K"])]
    pub family: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct QArgs {
    #[arg(long, value_parser = parse_positive, conflicts_with = "q_range")]
    pub q: Option<BigInt>,
    /// Inclusive range `A..B`.
    #[arg(long, value_parser = parse_range)]
    pub q_range: Option<QRange>,
}

impl QArgs {
    pub fn values(&self) -> Option<Vec<BigInt>> {
        match (&self.q, &self.q_range) {
            (Some(q), _) => Some(vec![q.clone()]),
            (None, Some(r)) => Some(r.values()),
            (None, None) => None,
        }
    }

    pub fn values_or(&self, from: i64, to: i64) -> Vec<BigInt> {
        self.values().unwrap_or_else(|| {
            QRange {
                from: from.into(),
                to: to.into(),
            }
            .values()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRange {
    pub from: BigInt,
    pub to: BigInt,
}

impl QRange {
    pub fn values(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut q = self.from.clone();
        while q <= self.to {
            out.push(q.clone());
            q += 1u32;
        }
        out
    }
}

impl fmt::Display for QRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.from, self.to)
    }
}

fn parse_positive(s: &str) -> Result<BigInt, String> {
    let v: BigInt = s.trim().parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if v < BigInt::from(1) {
        return Err(format!("{v} is not positive"));
    }
    Ok(v)
}

pub fn parse_range(s: &str) -> Result<QRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("{s:?} is not of the form A..B"))?;
    let from = parse_positive(a)?;
    let to = parse_positive(b.trim_start_matches('='))?;
    if from > to {
        return Err(format!("range {from}..{to} is empty"));
    }
    Ok(QRange { from, to })
}
