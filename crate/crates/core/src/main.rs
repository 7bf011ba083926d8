use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use activeflux::app::{self, RunConfig};
use activeflux::stability::{cfl_max, Method};
use activeflux::Flux;

#[derive(Parser)]
#[command(
    name = "activeflux",
    version,
    about = "Arbitrary-order Active Flux solver for 1D scalar conservation laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance the Gaussian pulse on [0, 1] and write x,q samples
    Run(RunArgs),
    /// Grid refinement study for linear advection
    Converge(ConvergeArgs),
    /// Maximum stable CFL number from von Neumann analysis
    Cflmax(CflArgs),
    /// Degree-6 Method B on Burgers' equation against a Roe reference
    BurgersDemo(BurgersArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    A,
    B,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::A => Method::A,
            MethodArg::B => Method::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FluxArg {
    Advection,
    Burgers,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, value_enum, default_value = "b")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "advection")]
    flux: FluxArg,
    /// Advection speed
    #[arg(long, default_value_t = 1.0)]
    speed: f64,
    #[arg(long, default_value_t = 50)]
    cells: usize,
    /// Defaults to 0.5 for Method B and 1e-4 for Method A
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long, default_value_t = app::CONVERGENCE_TIME)]
    t_end: f64,
    #[arg(long)]
    limiter: bool,
    /// CSV destination; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, value_enum, default_value = "b")]
    method: MethodArg,
    /// Comma-separated ascending cell counts
    #[arg(long, value_delimiter = ',', default_values_t = app::DEFAULT_GRIDS)]
    cells: Vec<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CflArgs {
    /// Single degree; all of 2..=6 if omitted
    #[arg(long)]
    degree: Option<usize>,
    /// Single method; both if omitted
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BurgersArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [15, 50])]
    cells: Vec<usize>,
    #[arg(long, default_value_t = app::BURGERS_T_END)]
    t_end: f64,
    /// Background level of the Gaussian; negative values give a transonic case
    #[arg(long, default_value_t = 0.8)]
    offset: f64,
    /// Directory for burgers_M<cells>.csv and burgers_reference.csv
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn default_cfl(method: Method) -> f64 {
    match method {
        Method::A => app::CONVERGENCE_CFL_A,
        Method::B => app::CONVERGENCE_CFL_B,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run(a) => {
            let method = Method::from(a.method);
            let flux = match a.flux {
                FluxArg::Advection => Flux::Advection { c: a.speed },
                FluxArg::Burgers => Flux::Burgers,
            };
            let config = RunConfig {
                degree: a.degree,
                method,
                flux,
                cells: a.cells,
                cfl: a.cfl.unwrap_or_else(|| default_cfl(method)),
                t_end: a.t_end,
                limiter: a.limiter,
                out: a.out.clone(),
            };
            let output = app::run(&config)?;
            if a.out.is_none() {
                print!("{}", output.csv);
            }
        }
        Command::Converge(a) => {
            let method = Method::from(a.method);
            let cfl = a.cfl.unwrap_or_else(|| default_cfl(method));
            let rows = app::convergence_study(a.degree, method, &a.cells, cfl)?;
            emit(&a.out, &app::convergence_csv(a.degree, method, &rows))?;
        }
        Command::Cflmax(a) => {
            let entries = match (a.degree, a.method) {
                (None, None) => app::cfl_table()?,
                (degree, method) => {
                    let degrees: Vec<usize> =
                        degree.map(|d| vec![d]).unwrap_or_else(|| (2..=6).collect());
                    let methods: Vec<Method> = method
                        .map(|m| vec![m.into()])
                        .unwrap_or(vec![Method::A, Method::B]);
                    let mut entries = Vec::new();
                    for &method in &methods {
                        for &degree in &degrees {
                            entries.push(app::CflEntry {
                                degree,
                                method,
                                cfl: cfl_max(degree, method)?,
                            });
                        }
                    }
                    entries
                }
            };
            emit(&a.out, &app::cfl_csv(&entries))?;
        }
        Command::BurgersDemo(a) => {
            if !a.out.is_dir() {
                bail!("{} is not a directory", a.out.display());
            }
            let demo = app::burgers_demo(&a.cells, app::offset_gaussian(a.offset), a.t_end)?;
            for run in &demo.runs {
                let path = a.out.join(format!("burgers_M{}.csv", run.mesh.cells));
                std::fs::write(&path, &run.csv)
                    .with_context(|| format!("writing {}", path.display()))?;
                let max = run
                    .state
                    .pt
                    .iter()
                    .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
                println!(
                    "M={} t={:.4} max point value {:.6} (initial {:.6}) -> {}",
                    run.mesh.cells,
                    run.state.t,
                    max,
                    demo.initial_max,
                    path.display()
                );
            }
            let path = a.out.join("burgers_reference.csv");
            std::fs::write(&path, &demo.reference_csv)
                .with_context(|| format!("writing {}", path.display()))?;
            println!("reference -> {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
