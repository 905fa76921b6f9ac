//! `maxarc`: command-line front end.
//!
//! Exit status: 0 on success, 1 when an input fails validation or
//! verification, 2 on usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "maxarc",
    version,
    about = "Maximal arcs, compatible resolutions and plane reconstruction"
)]
pub struct Cli {
    /// Emit reports as JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for exhaustive searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArcKind {
    Denniston,
    Hyperoval,
}

#[derive(Debug, Args)]
pub struct PlaneArc {
    /// Plane in design-file format.
    #[arg(long)]
    pub plane: PathBuf,
    /// Arc as an index list.
    #[arg(long)]
    pub arc: PathBuf,
}

#[derive(Debug, Args)]
pub struct Budget {
    #[arg(long)]
    pub max_solutions: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Branch on the element with the fewest candidates.
    #[arg(long)]
    pub fewest_candidates: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print PG(2,q), q a power of two up to 64, as a design file.
    Plane {
        #[arg(long)]
        q: usize,
    },
    /// Print a maximal arc of degree k in PG(2,q) as an index list.
    Arc {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ArcKind::Denniston)]
        kind: ArcKind,
    },
    /// Print the design cut out of a plane by an arc.
    Restrict(PlaneArc),
    /// Print the lines of a plane that miss an arc.
    Exterior(PlaneArc),
    /// Print one resolution per exterior line of an arc.
    Resolutions {
        #[command(flatten)]
        input: PlaneArc,
        /// Write resolution-NNN.txt files here instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Enumerate the parallel classes of a design.
    SearchClasses {
        #[arg(long)]
        design: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Enumerate the resolutions of a design.
    SearchResolutions {
        #[arg(long)]
        design: PathBuf,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Find a largest mutually compatible family among resolutions.
    MaxCompatible {
        #[arg(long)]
        design: PathBuf,
        /// Resolution files (each may hold several resolutions).
        #[arg(long = "resolutions", num_args = 1.., required = true)]
        resolutions: Vec<PathBuf>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Rebuild the projective plane from a design and a bound-attaining family.
    Reconstruct {
        #[arg(long)]
        design: PathBuf,
        #[arg(long = "family", num_args = 1.., required = true)]
        family: Vec<PathBuf>,
        /// Also write the plane here (stdout carries the report under --json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the projective plane axioms.
    VerifyPlane {
        #[arg(long)]
        plane: PathBuf,
    },
    /// Validate a Steiner design and print its parameters.
    VerifyDesign {
        #[arg(long)]
        design: PathBuf,
    },
    /// p-rank of a design file's incidence matrix, as a JSON report.
    Rank {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Resolutions for the embeddability cross-check at the bound.
        #[arg(long = "family", num_args = 1..)]
        family: Vec<PathBuf>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Derived parameters for cofactor s and block size k.
    Params {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
    },
    /// Plane, arc, design, family, reconstruction and rank for q = 2^t.
    Pipeline {
        #[arg(long)]
        t: u32,
        /// Arc degree, a power of two below 2^t (default 2^(t-1)).
        #[arg(long)]
        k: Option<usize>,
    },
}

/// Bad arguments that clap cannot catch.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
