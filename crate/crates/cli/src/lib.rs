//! Front end for `coarse-core`: load spaces, maps and controls into a
//! [`Workspace`], run one construction, and emit a [`Report`] with result
//! files and CSV tables.
//!
//! The command line works in `f64`.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use coarse_core::Dist;

mod commands;
mod demo;
pub mod report;
pub mod workspace;

pub use report::{emit_csv, fmt_num, Cell, Report, Table};
pub use workspace::{Binding, Kind, Workspace};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// `auto`, or a comma-separated increasing list. `none` (or an empty string)
/// gives the empty grid.
#[derive(Clone, Debug, PartialEq)]
pub enum KappaGrid {
    Auto,
    List(Vec<Dist>),
}

pub fn parse_kappa_grid(s: &str) -> std::result::Result<KappaGrid, String> {
    let s = s.trim();
    match s {
        "auto" => Ok(KappaGrid::Auto),
        "" | "none" => Ok(KappaGrid::List(Vec::new())),
        _ => s
            .split(',')
            .map(|k| match k.trim() {
                "inf" => Ok(Dist::Infinite),
                k => k.parse::<f64>().map(Dist::Finite).map_err(|e| format!("bad κ `{k}`: {e}")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(KappaGrid::List),
    }
}

#[derive(Parser, Debug)]
#[command(name = "coarse", version, about = "Coarse gluings, colimits and equaliser filtrations on finite metric spaces")]
pub struct Cli {
    /// Directory for result spaces, maps and CSV tables. Without it, tables
    /// are printed after the report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized demos.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    /// κ grid for filtrations: `auto` (realized values) or `k1,k2,...`.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_kappa_grid)]
    pub kappa_grid: KappaGrid,
    /// Covering-radius budget for filtration stages.
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Bind a space file: NAME=PATH.
    #[arg(long = "space", value_name = "NAME=PATH", global = true)]
    pub spaces: Vec<String>,
    /// Bind a map file: NAME=PATH.
    #[arg(long = "map", value_name = "NAME=PATH", global = true)]
    pub maps: Vec<String>,
    /// Bind a control file: NAME=PATH.
    #[arg(long = "control", value_name = "NAME=PATH", global = true)]
    pub controls: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

/// Arguments naming a space, map or control accept a binding name or a file
/// path; controls also accept `affine:a,b` and `table:t:v,...`.
#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Validate a file and print a summary.
    Load {
        /// space, map or control
        kind: Kind,
        path: PathBuf,
    },
    /// Glue a space along pairs of labels.
    Glue {
        space: String,
        /// A glued pair, `A=B`; repeatable.
        #[arg(long = "pair", value_name = "A=B")]
        pairs: Vec<String>,
    },
    /// Disjoint union of spaces.
    Coproduct {
        #[arg(required = true)]
        spaces: Vec<String>,
    },
    /// Pushout of two maps out of a common source. With `--legs`, also the
    /// mediating morphism and its bound.
    Pushout {
        f1: String,
        f2: String,
        /// Maps out of the source and the two targets into a common space.
        #[arg(long, num_args = 3, value_names = ["L0", "L1", "L2"])]
        legs: Option<Vec<String>>,
        #[arg(long, default_value = "affine:1,0")]
        phi: String,
        /// Superadditivity constant of Φ.
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
    },
    /// Cokernel pair of a map and its laws.
    Cokernel { f: String },
    /// Coequalizer of two parallel maps.
    Coeq { f: String, g: String },
    /// Image factorisation, checked against the cokernel pair.
    Image { f: String },
    /// The κ-equaliser of two parallel maps.
    Equalise {
        f: String,
        g: String,
        #[arg(long)]
        kappa: f64,
    },
    /// κ-equaliser filtration with covering radii.
    Filtration { f: String, g: String },
    /// Diagonal filler of a square `m ∘ f ≈_κ g ∘ e`.
    Filler {
        f: String,
        g: String,
        e: String,
        m: String,
        #[arg(long, default_value = "affine:1,0")]
        phi: String,
        #[arg(long, default_value = "affine:1,0")]
        psi: String,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
    },
    /// Control certificate of a map; with `--bound`, check it.
    Certify {
        f: String,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Build a family instance: cubes, squares, horocycle, noncoexact or
    /// random, with `key=value` parameters.
    Demo { family: String, params: Vec<String> },
}

/// Options shared by all commands.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub eps: f64,
    pub kappa_grid: KappaGrid,
    pub r_max: Dist,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, eps: 1e-9, kappa_grid: KappaGrid::Auto, r_max: Dist::Infinite }
    }
}

impl Cli {
    pub fn options(&self) -> Result<Options> {
        let r_max = match self.r_max {
            None => Dist::Infinite,
            Some(r) if r.is_infinite() && r > 0.0 => Dist::Infinite,
            Some(r) if r >= 0.0 => Dist::Finite(r),
            Some(r) => bail!("--r-max must be nonnegative, got {r}"),
        };
        if self.eps.is_nan() || self.eps < 0.0 {
            bail!("--eps must be nonnegative, got {}", self.eps);
        }
        Ok(Options { seed: self.seed, eps: self.eps, kappa_grid: self.kappa_grid.clone(), r_max })
    }

    /// A workspace holding the `--space`, `--map` and `--control` bindings.
    pub fn workspace(&self) -> Result<Workspace> {
        let mut ws = Workspace::new(self.eps);
        for (specs, kind) in [(&self.spaces, Kind::Space), (&self.maps, Kind::Map), (&self.controls, Kind::Control)] {
            for s in specs {
                ws.load_named(s, kind)?;
            }
        }
        Ok(ws)
    }
}

pub fn run(ws: &mut Workspace, cmd: &Command, opts: &Options) -> Result<Report> {
    commands::run(ws, cmd, opts)
}

/// Parse `key=value` parameters.
pub(crate) fn params(list: &[String]) -> Result<Vec<(&str, &str)>> {
    list.iter()
        .map(|p| p.split_once('=').ok_or_else(|| anyhow!("parameters are key=value, got `{p}`")))
        .collect()
}
