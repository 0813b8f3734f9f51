mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "sswme", version, about = "Spline shallow water moment models: bases, analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export a basis: grid, segment coefficients and sampled functions.
    Basis {
        /// Basis id such as L3, Q4, C5, Legendre2 or custom:2:0,1/4,1.
        id: String,
        #[arg(long)]
        out: PathBuf,
        /// Number of equispaced ζ samples in the table.
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Dump the exact moment tensors M, V⁰, C, A and B of a basis.
    Tensors {
        id: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summary table of many bases.
    Catalogue {
        /// Comma-separated basis ids.
        #[arg(long, value_delimiter = ',', default_value = commands::DEFAULT_CATALOGUE)]
        bases: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Imaginary parts of the scaled spectrum over a coefficient plane and along
    /// the linear-profile line.
    HyperbolicityScan {
        id: String,
        #[arg(long)]
        out: PathBuf,
        /// Scan the regularized system matrix instead of the full one.
        #[arg(long)]
        regularized: bool,
        #[arg(long, default_value_t = 1.5)]
        half_width: f64,
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        /// ᾱ₁ range of the restriction-line scan.
        #[arg(long, default_value_t = 2.0)]
        line_half_width: f64,
        #[arg(long, default_value_t = 401)]
        line_samples: usize,
    },
    /// Run the moment model with the finite-volume scheme.
    Simulate {
        id: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        regularized: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the vertically resolved reference solver.
    Reference {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = sswme::reference_solver::DEFAULT_NZETA)]
        nzeta: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Relative L1 errors of several models against the reference solution at t_end.
    Errors {
        /// Comma-separated basis ids; may be empty.
        #[arg(long, value_delimiter = ',', default_value = "L2,L4,L6,Q2,Q4,Q6")]
        bases: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        regularized: bool,
        #[arg(long, default_value_t = sswme::reference_solver::DEFAULT_NZETA)]
        nzeta: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reconstruct velocity profiles u(ζ) of a stored simulation at given x.
    Profiles {
        /// Directory written by `simulate`.
        #[arg(long)]
        run: PathBuf,
        /// Comma-separated positions; the nearest cell is used.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        /// Snapshot time; defaults to the last one.
        #[arg(long)]
        time: Option<f64>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Experiment preset with optional overrides.
#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    /// smooth or fast.
    #[arg(long, default_value = "smooth")]
    pub experiment: String,
    #[arg(long, default_value_t = 200)]
    pub nx: usize,
    #[arg(long, default_value_t = 2.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.5)]
    pub cfl: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub x_max: f64,
    /// Extra snapshot times, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub output_times: Vec<f64>,
    /// Overrides of the preset physics.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub slip_length: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Basis { id, out, samples } => commands::basis(&id, &out, samples),
        Command::Tensors { id, out } => commands::tensors(&id, &out),
        Command::Catalogue { bases, out } => commands::catalogue(&bases, &out),
        Command::HyperbolicityScan { id, out, regularized, half_width, resolution, line_half_width, line_samples } => {
            commands::hyperbolicity_scan(
                &id,
                &out,
                regularized,
                commands::ScanSettings { half_width, resolution, line_half_width, line_samples },
            )
        }
        Command::Simulate { id, out, regularized, run } => commands::simulate(&id, &out, regularized, &run),
        Command::Reference { out, nzeta, run } => commands::reference(&out, nzeta, &run),
        Command::Errors { bases, out, regularized, nzeta, run } => {
            commands::errors(&bases, &out, regularized, nzeta, &run)
        }
        Command::Profiles { run, x, time, samples, out } => commands::profiles(&run, &x, time, samples, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
