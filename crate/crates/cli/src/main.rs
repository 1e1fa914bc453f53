use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use stokes_dpg::selfcheck::DEFAULT_SEED;
use stokes_dpg::{ProblemId, SolverMethod};
use stokes_dpg_cli::{flux_csv, run_convergence, run_flux, run_oracles, write_file, RunConfig};

#[derive(Parser)]
#[command(name = "stokes-dpg", version, about = "DPG convergence studies for stream-function Stokes flow and plates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed of the randomized self-checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve levels 1..=L and print the convergence table; with --out also
    /// write the table and the finest-level fields as VTK.
    Convergence(RunArgs),
    /// Flux of the velocity through vertical sections of the channel.
    Flux {
        #[command(flatten)]
        run: RunArgs,
        /// Section abscissae.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9")]
        flux: Vec<f64>,
    },
    /// Run the numerical self-checks; exits non-zero if any fails.
    Oracles,
}

#[derive(Args)]
struct RunArgs {
    /// smooth | cavity | channel | plate [default: smooth, channel for flux]
    #[arg(long)]
    problem: Option<ProblemId>,
    /// Number of uniform refinements; the flux command solves this level only
    /// [default: 5, 2 for flux]
    #[arg(long)]
    levels: Option<usize>,
    /// direct | pcg
    #[arg(long, default_value = "direct")]
    solver: SolverMethod,
    /// Coefficient of the zero-order term.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(self, seed: u64, default_problem: ProblemId, default_levels: usize) -> Result<RunConfig> {
        let cfg = RunConfig {
            problem: self.problem.unwrap_or(default_problem),
            levels: self.levels.unwrap_or(default_levels),
            solver: self.solver,
            gamma: self.gamma,
            out: self.out,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Convergence(args) => {
            let cfg = args.config(cli.seed, ProblemId::Smooth, 5)?;
            let out = run_convergence(&cfg.spec(), cfg.levels, cfg.solver)?;
            print!("{}", out.csv);
            if let Some(dir) = &cfg.out {
                let name = cfg.problem.name();
                let csv = write_file(dir, &format!("{name}_convergence.csv"), &out.csv)?;
                let vtk = write_file(dir, &format!("{name}_level{}.vtk", cfg.levels), &out.vtk)?;
                eprintln!("wrote {} and {}", csv.display(), vtk.display());
            }
            Ok(true)
        }
        Command::Flux { run, flux } => {
            let cfg = run.config(cli.seed, ProblemId::Channel, 2)?;
            let rows = run_flux(&cfg.spec(), cfg.levels, cfg.solver, &flux)?;
            let csv = flux_csv(&rows);
            print!("{csv}");
            if let Some(dir) = &cfg.out {
                let path = write_file(dir, &format!("{}_flux_level{}.csv", cfg.problem.name(), cfg.levels), &csv)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::Oracles => {
            let report = run_oracles(cli.seed)?;
            print!("{report}");
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
