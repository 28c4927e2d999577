use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "apsum",
    version,
    about = "Search and verify monochromatic sums of arithmetic progressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Look for a witness in one coloring.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Compute W, WB, HIND or F by exhaustive search.
    Number(NumberArgs),
    /// Re-establish a certificate from scratch and record it.
    Certify(CertifyArgs),
    /// Run the constructive pipelines.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Check a witness, certificate, transcript or the store.
    Verify(VerifyArgs),
}

/// Where the integers are colored from.
#[derive(Args, Debug, Clone)]
pub struct ColoringArgs {
    /// Table coloring of [p]: a digit string, a JSON array, or @file.
    #[arg(long, conflicts_with = "oracle")]
    pub coloring: Option<String>,
    /// Number of colors of --coloring (default: largest color present).
    #[arg(long)]
    pub colors: Option<u32>,
    /// Oracle rule: JSON, @file, or one of constant:K[:C], parity,
    /// mod:M, digit:BASE:POS:MAP, seeded:C.
    #[arg(long)]
    pub oracle: Option<String>,
    /// Domain [p] scanned when coloring with --oracle.
    #[arg(long)]
    pub p: Option<usize>,
    /// Seed for `seeded:C` oracles.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OutputArgs {
    /// Print machine-readable JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum SearchCommand {
    /// Monochromatic l-term progression.
    Ap {
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monochromatic progression whose difference shares the color.
    Brauer {
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// System Q_1 < ... < Q_n with every finite sum monochromatic.
    Fs {
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        l: usize,
        /// Also require every common difference to share the color.
        #[arg(long)]
        brauer: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ordered blocks with monochromatic unions, on a set coloring
    /// (--set-coloring) or on the finite sums of --values.
    Blocks {
        /// Set coloring JSON or @file.
        #[arg(long, conflicts_with_all = ["values", "coloring", "oracle"])]
        set_coloring: Option<String>,
        /// Strictly increasing positive integers a_1 < ... < a_M, comma separated.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long)]
        n: usize,
        /// Largest accepted M for --values.
        #[arg(long, default_value_t = 16)]
        max_elements: usize,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    #[value(name = "W")]
    W,
    #[value(name = "WB")]
    Wb,
    #[value(name = "HIND")]
    Hind,
    #[value(name = "F")]
    F,
}

#[derive(Args, Debug, Clone)]
pub struct SearchLimits {
    /// Total node budget.
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_depth: usize,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Re-run the full witness finder at every node.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Args, Debug, Clone)]
pub struct StoreArgs {
    /// Certificate store directory.
    #[arg(long, env = "APSUM_STORE")]
    pub store: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NumberArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub c: u32,
    #[command(flatten)]
    pub limits: SearchLimits,
    #[command(flatten)]
    pub store: StoreArgs,
    /// Also write the certificate to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Certificate file to re-establish.
    #[arg(long)]
    pub certificate: PathBuf,
    #[command(flatten)]
    pub limits: SearchLimits,
    #[command(flatten)]
    pub store: StoreArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Brauer,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArgs {
    #[arg(long, value_enum, default_value_t = Variant::Plain)]
    pub variant: Variant,
    /// Length n of every seed progression.
    #[arg(long, default_value_t = 3)]
    pub stage_len: usize,
    /// Family size M.
    #[arg(long, default_value_t = 6)]
    pub size: usize,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// Seed family and its block order check.
    Seeds {
        #[command(flatten)]
        seeds: SeedArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// One induction step from a stage family.
    Merge {
        /// Stage family JSON or @file (default: the seed family).
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        seeds: SeedArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
        /// Size r of the merged family.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 16)]
        max_elements: usize,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The power-of-two construction, stage by stage.
    Thm4 {
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: u32,
        /// Family size; computed as Hind(n, c) when omitted.
        #[arg(long, requires = "q")]
        m: Option<usize>,
        /// Position count; computed as W(l, c^(2^m)) when omitted.
        #[arg(long, requires = "m")]
        q: Option<usize>,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        limits: SearchLimits,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
#[group(id = "subject", required = true, multiple = false, args = ["witness", "certificate", "transcript", "check_store"])]
pub struct VerifyArgs {
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Check the integrity of every journal in the store.
    #[arg(long)]
    pub check_store: bool,
    /// Re-run the exhaustive search behind an upper bound.
    #[arg(long)]
    pub rerun: bool,
    #[command(flatten)]
    pub limits: SearchLimits,
    #[command(flatten)]
    pub store: StoreArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
