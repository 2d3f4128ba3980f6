use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "dftsub", version, about = "Spectral norms of DFT submatrices: bounds, exhaustive checks, Monte Carlo sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm, Gram spectrum and applicable bounds for explicit sets.
    Norm(Flags),
    /// Every closed-form bound for given set sizes.
    Bounds(Flags),
    /// Monte Carlo figure reproductions.
    Experiment {
        kind: ExperimentKind,
        #[command(flatten)]
        flags: Flags,
    },
    /// Pass/fail checks of the stated inequalities.
    Verify {
        target: VerifyTarget,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Argmax,
    Quartercircle,
}

impl ExperimentKind {
    pub fn is_rect(self) -> bool {
        matches!(self, ExperimentKind::Fig3 | ExperimentKind::Fig4)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    DonohoStark,
    Tao,
    Coords,
    SquareCase,
    Moment,
    Extrap,
    Tail,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. All are optional so that a config file
/// can fill the gaps; flags given on the command line win.
#[derive(Args, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<String>,
    #[arg(long)]
    pub cols: Option<String>,
    #[arg(long)]
    pub t_size: Option<usize>,
    #[arg(long)]
    pub omega_size: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// `lo:hi:steps`, inclusive at both ends.
    #[arg(long)]
    pub delta_grid: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub spread: Option<usize>,
    #[arg(long)]
    #[serde(default)]
    pub scaled: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
