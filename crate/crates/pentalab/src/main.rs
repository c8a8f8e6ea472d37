use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pentalab::polyfile::{read_coords, read_matrix, read_polygon, to_json};
use pentalab::report::{
    collapse_run, condense_report, independence_report, invariants_report, iterate_report, reconstruct_report,
    vanishing_sweep, Envelope, RunConfig, StepMap,
};
use pentalab::sample::rng;
use pentalab::svg::polygon_svg;
use pentalab::vanishing::TOL;
use pentalab::Error;

const EXIT_CODES: &str = "\
Exit status:
  0  every internal check passed
  1  the command ran but a check failed
  2  unreadable or malformed input
  3  geometric degeneracy (the message names the offending index)
  4  the pentagram map hit a pole (the message names the step)
  5  arguments outside what the operation supports";

#[derive(Parser)]
#[command(name = "pentalab", version, about = "Exact experiments with the pentagram map", after_help = EXIT_CODES)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, env = "PENTALAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Alpha1,
    Alpha2,
    Alternate,
}

#[derive(Subcommand)]
enum Command {
    /// Coordinates, invariants, monodromy invariants and degeneracy flags of a polygon file.
    Invariants { polygon: PathBuf },
    /// Applies the pentagram involutions and reports the invariant tuple at each step.
    Iterate {
        polygon: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, value_enum, default_value_t = MapArg::Alternate)]
        map: MapArg,
        /// Directory for one SVG snapshot per step.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Iterates a random rectilinear 4N-gon until it collapses.
    Collapse {
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(3..))]
        big_n: u64,
    },
    /// Determinant of a square matrix by condensation.
    Condense { matrix: PathBuf },
    /// Certifies the roots-of-unity sums for odd n up to a bound.
    Vanishing {
        #[arg(long, default_value_t = 25)]
        n_max: usize,
    },
    /// Exact Jacobian rank of the invariants at a random point.
    Independence {
        #[arg(long)]
        n: usize,
    },
    /// Builds a polygon from its coordinates and checks the monodromy formulas.
    Reconstruct { invariants: PathBuf },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

struct Outcome {
    text: String,
    passed: bool,
}

fn envelope<T: Serialize>(config: RunConfig, passed: bool, report: T) -> Outcome {
    Outcome { text: to_json(&Envelope { config, passed, report }), passed }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let config = |command: &str, scalar: &'static str, tolerance: Option<f64>| RunConfig {
        command: command.to_string(),
        seed: cli.seed,
        scalar,
        tolerance,
    };
    let mut r = rng(cli.seed);
    Ok(match &cli.command {
        Command::Invariants { polygon } => {
            let rep = invariants_report(&read_polygon(&read(polygon)?)?)?;
            envelope(config("invariants", "rational", None), rep.passes(), rep)
        }
        Command::Iterate { polygon, steps, map, svg } => {
            let map = match map {
                MapArg::Alpha1 => StepMap::Alpha1,
                MapArg::Alpha2 => StepMap::Alpha2,
                MapArg::Alternate => StepMap::Alternate,
            };
            let p = read_polygon(&read(polygon)?)?;
            let (rep, polys) = iterate_report(&p, *steps as usize, map)?;
            if let Some(dir) = svg {
                fs::create_dir_all(dir).map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
                for (i, q) in polys.iter().enumerate() {
                    write(&dir.join(format!("step_{i:03}.svg")), &polygon_svg(q, &format!("step {i}")))?;
                }
            }
            envelope(config("iterate", "rational", None), rep.passes(), rep)
        }
        Command::Collapse { big_n } => {
            let rep = collapse_run(*big_n as usize, &mut r)?;
            envelope(config("collapse", "rational", None), rep.passes(), rep)
        }
        Command::Condense { matrix } => {
            let rep = condense_report(&read_matrix(&read(matrix)?)?, &mut r)?;
            envelope(config("condense", "rational", None), rep.passes(), rep)
        }
        Command::Vanishing { n_max } => {
            let rep = vanishing_sweep(*n_max)?;
            envelope(config("vanishing", "complex", Some(TOL)), rep.passes(), rep)
        }
        Command::Independence { n } => {
            let rep = independence_report(*n, &mut r)?;
            envelope(config("independence", "rational", None), rep.passes(), rep)
        }
        Command::Reconstruct { invariants } => {
            let rep = reconstruct_report(&read_coords(&read(invariants)?)?)?;
            envelope(config("reconstruct", "rational", None), rep.passes(), rep)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = write(path, &out.text) {
                        eprintln!("error: {e}");
                        return ExitCode::from(e.exit_code() as u8);
                    }
                }
                None => print!("{}", out.text),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a check failed; see the report");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
