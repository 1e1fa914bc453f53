//! Drivers behind the `stokes-dpg` binary: convergence tables, flux reports
//! and the oracle self-check.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use stokes_dpg::dpg::cross_section_flux;
use stokes_dpg::problems::{self, CHANNEL_FLUX};
use stokes_dpg::selfcheck::{self, OracleReport};
use stokes_dpg::study::{self, LevelRecord};
use stokes_dpg::{vtk, DomainId, Mesh, ProblemId, ProblemSpec, Solution, SolverMethod};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub levels: usize,
    pub solver: SolverMethod,
    pub gamma: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: ProblemId::Smooth,
            levels: 5,
            solver: SolverMethod::Direct,
            gamma: 0.0,
            out: None,
            seed: selfcheck::DEFAULT_SEED,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels < 1 {
            bail!("--levels must be at least 1");
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            bail!("--gamma must be a finite non-negative number, got {}", self.gamma);
        }
        Ok(())
    }

    pub fn spec(&self) -> ProblemSpec {
        problems::builtin(self.problem, self.gamma)
    }
}

pub struct ConvergenceOutput {
    pub records: Vec<LevelRecord>,
    pub csv: String,
    /// Fields of the finest level.
    pub vtk: String,
}

/// Levels `1..=levels` of `spec`, returning the table and the finest fields.
pub fn run_convergence(spec: &ProblemSpec, levels: usize, solver: SolverMethod) -> Result<ConvergenceOutput> {
    let mut finest: Option<(Mesh, Solution)> = None;
    let records = study::run_convergence(spec, 1..=levels, solver, |run| {
        finest = Some((run.mesh.clone(), run.solution.clone()));
    })?;
    let (mesh, sol) = finest.context("no levels were run")?;
    Ok(ConvergenceOutput {
        csv: study::to_csv(&records),
        vtk: vtk::render(&mesh, &sol)?,
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxRow {
    pub x: f64,
    pub flux: f64,
    /// `flux - 1/6`.
    pub deviation: f64,
}

/// Flux of the velocity through vertical sections of the channel.
pub fn run_flux(spec: &ProblemSpec, level: usize, solver: SolverMethod, sections: &[f64]) -> Result<Vec<FluxRow>> {
    if spec.domain != DomainId::ChannelStep {
        bail!("flux sections are defined for the channel problem only");
    }
    spec.validate()?;
    let run = study::run_level(spec, level, solver, None).with_context(|| format!("level {level}"))?;
    sections
        .iter()
        .map(|&x| {
            let flux = cross_section_flux(&run.mesh, &run.solution, x).with_context(|| format!("section x = {x}"))?;
            Ok(FluxRow {
                x,
                flux,
                deviation: flux - CHANNEL_FLUX,
            })
        })
        .collect()
}

pub fn flux_csv(rows: &[FluxRow]) -> String {
    let mut s = String::from("x,flux,deviation\n");
    for r in rows {
        let _ = writeln!(s, "{},{:.12e},{:.12e}", r.x, r.flux, r.deviation);
    }
    s
}

pub fn run_oracles(seed: u64) -> Result<OracleReport> {
    Ok(selfcheck::run_oracles(seed)?)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
