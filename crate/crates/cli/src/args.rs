use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use decalage_core::generate::Profile;

#[derive(Clone, Debug, Parser)]
#[command(name = "decalage", version, about = "Décalage, Hodge–Tate filtrations and lattice flags on finite models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Coefficient ring for generated instances.
    #[arg(long, global = true, value_enum, default_value_t = RingKind::Z)]
    pub ring: RingKind,

    /// The prime `xi`: an integer prime for `z`, `t` for polynomial rings.
    #[arg(long, global = true)]
    pub xi: Option<String>,

    /// Characteristic of the coefficient field of `fp-poly`.
    #[arg(long = "char", global = true, default_value_t = 5)]
    pub characteristic: u64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of generated instances.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,

    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(i64).range(1..=8))]
    pub max_degree: i64,

    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=6))]
    pub max_rank: u64,

    /// `builtin:NAME` or a JSON file `{"elements": [...], "leq": [[a, b], ...]}`.
    #[arg(long, global = true, default_value = "builtin:point")]
    pub poset: String,

    /// Attempts per generated instance before giving up.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Shift the BB flag before comparing (harness self-test).
    #[arg(long, global = true, hide = true)]
    pub inject_fault: Option<i64>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an instance file.
    Validate { path: String },
    /// Run every complex-level check on each instance (stalks and global sections).
    CheckLemmas {
        path: Option<String>,
        #[arg(long, value_parser = parse_profile)]
        generate: Option<Profile>,
    },
    /// Torsion-freeness, flag equality, graded dimensions and the degeneration comparison.
    CheckTheorem {
        path: Option<String>,
        #[arg(long, value_parser = parse_profile)]
        generate: Option<Profile>,
    },
    /// Spectral sequence pages of the truncation or Hodge filtration.
    Ss {
        path: String,
        #[arg(long, value_enum, default_value_t = FiltrationKind::Tau)]
        filtration: FiltrationKind,
        /// Last page to render.
        #[arg(long, default_value_t = 3)]
        pages: usize,
    },
    /// Cohomology of the global sections.
    Cohomology { path: String },
    /// The subcomplex `eta_m`, objectwise for sheaves.
    Eta {
        path: String,
        #[arg(long)]
        m: i64,
    },
    /// Emit seeded random instances as JSON.
    Generate {
        #[arg(long, value_parser = parse_profile, default_value = "h1")]
        profile: Profile,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingKind {
    Z,
    FpPoly,
    QPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FiltrationKind {
    Tau,
    Hodge,
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    s.parse().map_err(|e: decalage_core::Error| e.to_string())
}
