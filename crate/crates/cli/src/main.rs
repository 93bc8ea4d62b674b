//! `twistorlab`: batch verification of twistor constructions and superminimal
//! surfaces.
//!
//! Reports are JSON documents ([`report::ReportDocument`]); dense samples are
//! CSV with the fixed columns of [`samples::SampleRow`]. Points of CP³ are
//! written as 8 floats `re z1, im z1, …, re z4, im z4`, points of S⁴ and H⁴ as
//! their 5 coordinates in order.
//!
//! Exit codes: 0 every verdict passed, 1 some check failed (the report is
//! still written), 2 usage or precondition error, 3 I/O error.

mod commands;
mod report;
mod samples;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twistorlab_core::surface::Grid;

#[derive(Debug, Parser)]
#[command(name = "twistorlab", version, about = "Verification suites for twistor geometry and superminimal surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Seed of the randomized sweeps.
    #[arg(long, env = "TWISTORLAB_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Tolerance override `name=value`, e.g. `mean_curvature=1e-5`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
    /// Report destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quaternionic, projective and group identity sweeps.
    CheckAlgebra {
        #[command(flatten)]
        common: Common,
        /// Random cases per identity.
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
    },
    /// Project a Legendrian curve and check the surface and its twistor lift.
    VerifyRoundtrip {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        curve: PathBuf,
        /// `u0,u1,v0,v1,n`
        #[arg(long, default_value = "-1,1,-1,1,21", allow_hyphen_values = true)]
        grid: Grid,
    },
    /// Superminimality suite on a catalog surface.
    VerifyCatalog {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        catalog: String,
        /// `u0,u1,v0,v1,n`; defaults to the surface chart, slightly inset.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<Grid>,
        /// Test the twistor lift even for surfaces that need not have a horizontal one.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        lift: bool,
    },
    /// Hyperbolic model: hyperquadric, Ω, ball metric.
    VerifyH4 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
    },
    /// Generate a Legendrian curve from `p3`, `p4` and `c0`.
    GenLegendrian {
        /// Ascending coefficients, e.g. `0,1/2,1-2i`.
        #[arg(long, allow_hyphen_values = true)]
        p3: String,
        #[arg(long, allow_hyphen_values = true)]
        p4: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c0: String,
        /// Curve file destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the projected surface of a curve over a grid, as CSV.
    Project {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "-1,1,-1,1,21", allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
        /// Also write `u, v, s1, s2, s3`: the stereographic chart of each sample
        /// with one axis dropped, for 3D plotting.
        #[arg(long)]
        slice: Option<PathBuf>,
        /// Chart axis (1-4) dropped from the slice.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=4))]
        drop_axis: u8,
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
    },
    /// Curvature indicatrix at one point of a catalog surface or curve.
    Indicatrix {
        #[arg(long, conflicts_with = "curve", required_unless_present = "curve")]
        catalog: Option<String>,
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Chart point `u,v`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// CSV of `k, angle, x, y`; the summary goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intrinsic length of a chart path on a catalog surface.
    SampleMetric {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        catalog: String,
        /// `equator`, `radial:R`, `segment:u0,v0,u1,v1` or `circle:u,v,r`.
        #[arg(long, allow_hyphen_values = true)]
        path: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
