//! `indspec`: spectra, essential spectra, polynomial hulls, and
//! contour-integral spectral projections for operators with invariant
//! subspaces, plus a verification suite over configured operator
//! families.
//!
//! Exit codes: 0 all checks pass, 1 at least one verdict failed,
//! 2 invalid input, 3 internal numerical error.

mod config;
mod outputs;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Overrides;
use run::{classify_error, ensure_out_dir, CommandIo, EmitFlags};

#[derive(Parser)]
#[command(
    name = "indspec",
    version,
    about = "Spectral laboratory: spectra, hulls, and Riesz projections for operators with invariant subspaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Input configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Hull raster cell size override
    #[arg(long)]
    cell_size: Option<f64>,
    /// Contour quadrature node count override
    #[arg(long)]
    nodes: Option<usize>,
    /// Hull dilation slack override
    #[arg(long)]
    slack: Option<f64>,
    /// Seed for random-corpus generation (recorded in outputs)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Artifact formats to write
    #[arg(long, default_value = "csv,json,svg")]
    emit: String,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum and essential spectrum of an operator
    Spectrum(CommonArgs),
    /// Polynomial hull of a sampled compact set
    Hull(CommonArgs),
    /// Contour-integral spectral projection of a finite operator
    Project(CommonArgs),
    /// Restriction/quotient pair induced by an invariant subspace
    Induce(CommonArgs),
    /// Run a verification suite from a case config
    Verify(CommonArgs),
}

fn command_io(args: &CommonArgs) -> anyhow::Result<CommandIo> {
    Ok(CommandIo {
        config: args.config.clone(),
        out: args.out.clone(),
        emit: EmitFlags::parse(&args.emit)?,
        seed: args.seed,
        overrides: Overrides {
            cell_size: args.cell_size,
            nodes: args.nodes,
            slack: args.slack,
        },
    })
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    let args = match &cli.command {
        Command::Spectrum(a)
        | Command::Hull(a)
        | Command::Project(a)
        | Command::Induce(a)
        | Command::Verify(a) => a,
    };
    let io = command_io(args)?;
    ensure_out_dir(&io.out)?;
    match cli.command {
        Command::Spectrum(_) => run::run_spectrum(&io),
        Command::Hull(_) => run::run_hull(&io),
        Command::Project(_) => run::run_project(&io),
        Command::Induce(_) => run::run_induce(&io),
        Command::Verify(_) => run::run_verify(&io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify_error(&err) as u8)
        }
    }
}
