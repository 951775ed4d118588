use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "attenuated", version, about = "Association schemes on attenuated spaces: build, verify, tabulate")]
pub struct Cli {
    /// Omit wall-clock timings so reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timings: bool,

    /// Worker threads; 1 gives a fully serial run. Defaults to available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output path. For `build` this is the scheme file; otherwise the report.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate a scheme, check the axioms and optionally write it to `-o`.
    Build(SchemeArgs),
    /// Run verification checks and emit a report.
    Verify(VerifyArgs),
    /// Emit exact eigenvalue, parameter or polynomial tables.
    Tables(TablesArgs),
    /// Check the q -> 1 limit toward the non-binary Johnson scheme.
    Limit(LimitArgs),
    /// Check the embedding of J_{q^l+1}(n, m).
    Embed(SchemeArgs),
}

#[derive(Clone, Debug, Args)]
pub struct SchemeArgs {
    #[arg(short = 'q', long = "q")]
    pub q: Option<u64>,
    #[arg(short = 'n', long = "n")]
    pub n: Option<i64>,
    #[arg(short = 'l', long = "l")]
    pub l: Option<i64>,
    #[arg(short = 'm', long = "m")]
    pub m: Option<i64>,
    /// Read a scheme file written by `build` instead of enumerating.
    #[arg(long, conflicts_with_all = ["q", "n", "l", "m"])]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    All,
    Spectra,
    Bispectral,
    Structure,
    Subconstituent,
    Johnson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// Corrupt one intersection number of the formula table.
    PoisonedP,
    /// Corrupt one Krein parameter of the formula table.
    PoisonedQ,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = Scope::All)]
    pub scope: Scope,
    /// Base vertices for the subconstituent checks, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub bases: Option<Vec<usize>>,
    /// Self-test: verify against a deliberately corrupted table.
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Eigen,
    P,
    Q,
    V,
    Vstar,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, value_enum)]
    pub kind: TableKind,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Prime with q = p^h.
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    /// Johnson alphabet size.
    #[arg(short = 'r', long = "r")]
    pub r: i64,
    #[arg(short = 'n', long = "n")]
    pub n: i64,
    #[arg(short = 'm', long = "m")]
    pub m: i64,
    /// h runs over 2^-k for k in [k-min, k-max].
    #[arg(long, default_value_t = 4)]
    pub k_min: u32,
    #[arg(long, default_value_t = 20)]
    pub k_max: u32,
    #[arg(long, default_value_t = 256)]
    pub precision: usize,
    #[arg(long, default_value_t = 8)]
    pub tail: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}
