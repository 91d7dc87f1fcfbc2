use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Parser)]
#[command(name = "adiag", version, about = "Amenability and anti-diagonal constants of finite groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Directory for cached character tables.
    #[arg(long, global = true, env = "ADIAG_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Override the tolerance of numerical checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Largest group order considered (command-specific default).
    #[arg(long, global = true)]
    pub max_order: Option<usize>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub serial: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Invariants of one group.
    Invariants(InvariantsArgs),
    /// Classify every catalog group up to an order.
    Scan(ScanArgs),
    /// Tabulate a parametrised family.
    Family(FamilyArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
    Csv,
    Tsv,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantsArgs {
    /// Group expression, or `@path` to a JSON Cayley table.
    pub group: String,
    /// Add exact certificates: closed-form anti-diagonal constant and total
    /// Plancherel mass.
    #[arg(long)]
    pub exact: bool,
    /// Also compute the anti-diagonal constant from explicit irreps.
    #[arg(long)]
    pub check_direct: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// File with one group expression per line instead of the built-in catalog.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Skip the direct anti-diagonal sum.
    #[arg(long)]
    pub no_direct: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Dihedral,
    Shift,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Order of the rotating top group for the shift family.
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Parameter range `a..b`, inclusive.
    #[arg(long)]
    pub n_range: String,
    /// Largest acceptable final gap.
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Orthogonality,
    Flip,
    Plancherel,
    Coefficients,
    Theorems,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}
