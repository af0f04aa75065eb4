mod commands;
mod input;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use latsum::remainder::FunctionSpec;
use latsum::{Error, Limits};

use commands::Output;
use input::{load_polytope, Command as JobCommand, Format, JobSpec};

const EXIT_DOMAIN: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(
    name = "latsum",
    version,
    about = "Exact weighted lattice-point sums over simple polytopes"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a polytope is simple, integral, bounded and irredundant.
    Validate {
        #[arg(long)]
        polytope: String,
    },
    /// Exact weighted sum of a polynomial.
    Sum {
        #[arg(long)]
        polytope: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        k: Option<usize>,
        /// Also enumerate lattice points and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Weighted and unweighted lattice point counts.
    Count {
        #[arg(long)]
        polytope: String,
    },
    /// Exact sweep over random polynomials, or the smooth remainder check.
    Verify {
        #[arg(long)]
        polytope: String,
        #[arg(long, value_enum, default_value_t = Mode::Poly)]
        mode: Mode,
        #[arg(long = "seed", default_values_t = [1u64])]
        seeds: Vec<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Largest acceptable defect in smooth mode.
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// JSON function descriptor, e.g. {"family":"gaussian","center":[1,1],"sigma":0.8}.
        #[arg(long)]
        function: Option<String>,
    },
    /// Exact reference tables.
    Tables {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Polarized tangent cones for a seed.
    Decompose {
        #[arg(long)]
        polytope: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run a JSON job file.
    Run {
        #[arg(long)]
        job: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Mode {
    Poly,
    Smooth,
}

#[derive(Subcommand)]
enum TableKind {
    Bernoulli {
        #[arg(long, default_value_t = 12)]
        max: usize,
    },
    Qvalues {
        #[arg(long, default_value_t = 2)]
        order: u64,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    Groups {
        #[arg(long)]
        polytope: String,
    },
}

fn run(cmd: Cmd, limits: &Limits) -> Result<Output> {
    match cmd {
        Cmd::Validate { polytope } => commands::validate(&load_polytope(&polytope)?),
        Cmd::Sum {
            polytope,
            poly,
            k,
            oracle,
        } => commands::sum(&load_polytope(&polytope)?, &poly, k, oracle, limits),
        Cmd::Count { polytope } => commands::count(&load_polytope(&polytope)?, limits),
        Cmd::Verify {
            polytope,
            mode,
            seeds,
            k,
            tol,
            threshold,
            count,
            degree,
            function,
        } => {
            let p = load_polytope(&polytope)?;
            match mode {
                Mode::Poly => commands::verify_poly(&p, &seeds, count, degree, limits),
                Mode::Smooth => {
                    let f = function.as_deref().map(FunctionSpec::parse).transpose()?;
                    commands::verify_smooth(
                        &p,
                        f.as_ref(),
                        k.unwrap_or(3),
                        &seeds,
                        tol,
                        threshold,
                        limits,
                    )
                }
            }
        }
        Cmd::Tables { kind } => match kind {
            TableKind::Bernoulli { max } => commands::table_bernoulli(max),
            TableKind::Qvalues { order, m } => commands::table_qvalues(order, m),
            TableKind::Groups { polytope } => commands::table_groups(&load_polytope(&polytope)?),
        },
        Cmd::Decompose { polytope, seed } => commands::decompose(&load_polytope(&polytope)?, seed),
        Cmd::Run { job } => unreachable!("jobs are expanded before dispatch: {job}"),
    }
}

fn run_job(job: &JobSpec, limits: &Limits) -> Result<Output> {
    let p = load_polytope(&job.polytope_source())?;
    let seeds = if job.seeds.is_empty() {
        vec![1]
    } else {
        job.seeds.clone()
    };
    let need_poly = || {
        job.poly
            .clone()
            .ok_or_else(|| Error::Parse("job needs `poly`".into()))
    };
    match job.command {
        JobCommand::Validate => commands::validate(&p),
        JobCommand::Sum => commands::sum(&p, &need_poly()?, job.k, false, limits),
        JobCommand::Count => commands::count(&p, limits),
        JobCommand::VerifyPoly => commands::verify_poly(&p, &seeds, 20, 3, limits),
        JobCommand::VerifySmooth => commands::verify_smooth(
            &p,
            job.function.as_ref(),
            job.k.unwrap_or(3),
            &seeds,
            job.tol.unwrap_or(1e-8),
            1e-6,
            limits,
        ),
        JobCommand::Decompose => commands::decompose(&p, seeds[0]),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => EXIT_PARSE,
        Some(
            Error::QuadratureFailure { .. }
            | Error::NotRational
            | Error::NotInjective(_)
            | Error::PartitionViolated(_)
            | Error::ClaimViolated(_)
            | Error::DecompositionViolated(_)
            | Error::InternalError(_),
        ) => EXIT_NUMERIC,
        Some(_) => EXIT_DOMAIN,
        // I/O and malformed input files.
        None => EXIT_PARSE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let limits = Limits::from_env();
    let mut format = cli.format;
    let result = match cli.command {
        Cmd::Run { job } => std::fs::read_to_string(&job)
            .map_err(anyhow::Error::from)
            .and_then(|text| JobSpec::parse(&text))
            .and_then(|j| {
                format = j.format;
                run_job(&j, &limits)
            }),
        cmd => run(cmd, &limits),
    };
    match result {
        Ok(out) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json output")
                ),
                Format::Table => print!("{}", out.table),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NUMERIC)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
