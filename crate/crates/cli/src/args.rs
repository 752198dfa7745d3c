use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bmfano",
    version,
    about = "Unitals in PG(2,q^2), q even: O'Nan configurations and Fano planes"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for enumerations; defaults to all cores.
    #[arg(long, global = true, env = "BMFANO_THREADS")]
    pub threads: Option<usize>,
    /// Primitive modulus of GF(q) as a hex bitmask, overriding the default.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Leave `wall_time` out of summary records, making output reproducible
    /// byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Bm,
    Tits,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field tower parameters.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Unital point sets, membership and equivalence classes.
    Unital {
        #[command(subcommand)]
        command: UnitalCommand,
    },
    /// The Feng-Li construction and its completion to a Fano plane.
    Fengli {
        #[command(subcommand)]
        command: FengliCommand,
    },
    /// O'Nan configurations given by four lines.
    Onan {
        #[command(subcommand)]
        command: OnanCommand,
    },
    /// Fano planes: verification, enumeration and search.
    Fano {
        #[command(subcommand)]
        command: FanoCommand,
    },
    /// Compare special Fano plane counts across all unitals U(1, b).
    Theorem2 {
        #[arg(long)]
        q: u32,
    },
    /// The Buekenhout-Tits unital.
    Tits {
        #[command(subcommand)]
        command: TitsCommand,
    },
    /// Run the acceptance criteria.
    VerifyPaper {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FieldCommand {
    Info {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Family::Bm)]
        family: Family,
    },
}

/// A unital: `--family bm --a A --b B` or `--family tits`.
#[derive(Args, Debug, Clone)]
pub struct UnitalArgs {
    #[arg(long, value_enum, default_value_t = Family::Bm)]
    pub family: Family,
    #[arg(long)]
    pub q: u32,
    /// `a` as hex or a w-power sum; BM only.
    #[arg(long)]
    pub a: Option<String>,
    /// `b` as hex or a w-power sum with δ terms; BM only.
    #[arg(long)]
    pub b: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum UnitalCommand {
    /// List all q^3 + 1 points.
    Points {
        #[command(flatten)]
        unital: UnitalArgs,
    },
    /// Test one point for membership.
    Check {
        #[command(flatten)]
        unital: UnitalArgs,
        /// `X,Y,Z`.
        #[arg(long)]
        point: String,
    },
    /// Equivalence classes of orthogonal BM unitals.
    Classes {
        #[arg(long)]
        q: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum FengliCommand {
    /// Build the configuration for U(a, δ), a in GF(q)*.
    Build {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum OnanCommand {
    Verify {
        #[command(flatten)]
        unital: UnitalArgs,
        /// Four lines `L,M,N` separated by `;`.
        #[arg(long)]
        lines: String,
    },
    /// Verify, then complete through the diagonal point.
    Extend {
        #[command(flatten)]
        unital: UnitalArgs,
        #[arg(long)]
        lines: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FanoCommand {
    Verify {
        #[command(flatten)]
        unital: UnitalArgs,
        /// Seven points `X,Y,Z` separated by `;`.
        #[arg(long)]
        points: String,
    },
    /// All special Fano planes through (0,0,1) in U(1, b).
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Structured search for Fano planes with no line through T∞.
    SearchOrdinary {
        #[arg(long)]
        q: u32,
        /// Maximum number of line pairs to visit; exhaustive when omitted.
        #[arg(long)]
        budget: Option<u64>,
        /// Defaults to the first non-classical class representative.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TitsCommand {
    /// The point `(x0 + x1·δ, r + f(x0, x1)·δ, 1)`.
    Point {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        x0: String,
        #[arg(long)]
        x1: String,
        #[arg(long, default_value = "0")]
        r: String,
    },
    Check {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        point: String,
    },
    /// Check the worked example for q = 8 or q = 32.
    VerifyExample {
        #[arg(long)]
        q: u32,
    },
}
