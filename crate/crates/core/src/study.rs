//! Convergence studies under uniform refinement.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::dpg::{assemble_solve, error_report, Solution};
use crate::error::{Error, Result};
use crate::linalg::SolverMethod;
use crate::mesh::{generate, Mesh};
use crate::problems::ProblemSpec;
use crate::tracespace::build_dof_map;

pub const CSV_HEADER: &str = "level,nT,dofs,eta,err_u,err_vel,err_P,eoc_u,eoc_vel,eoc_P,eoc_eta";

/// The base mesh of the problem's domain refined `level` times.
pub fn mesh_at(problem: &ProblemSpec, level: usize) -> Mesh {
    generate(problem.domain).refined(level)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub n_elements: usize,
    pub dofs: usize,
    pub h_max: f64,
    pub eta: f64,
    pub err_u: Option<f64>,
    pub err_vel: Option<f64>,
    pub err_p: Option<f64>,
    pub eoc_u: Option<f64>,
    pub eoc_vel: Option<f64>,
    pub eoc_p: Option<f64>,
    pub eoc_eta: Option<f64>,
}

/// `log(e_prev / e) / log 2`, defined for positive pairs only.
pub fn eoc(prev: Option<f64>, cur: Option<f64>) -> Option<f64> {
    match (prev, cur) {
        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some((a / b).ln() / std::f64::consts::LN_2),
        _ => None,
    }
}

/// Average rate between two levels `steps` refinements apart.
pub fn eoc_over(first: Option<f64>, last: Option<f64>, steps: usize) -> Option<f64> {
    eoc(first, last).map(|r| r / steps as f64)
}

#[derive(Debug, Clone)]
pub struct LevelRun {
    pub mesh: Mesh,
    pub solution: Solution,
    pub record: LevelRecord,
}

/// Solves one level; `prev` supplies the EOC reference of the coarser level.
pub fn run_level(
    problem: &ProblemSpec,
    level: usize,
    method: SolverMethod,
    prev: Option<&LevelRecord>,
) -> Result<LevelRun> {
    let mesh = mesh_at(problem, level);
    let dofmap = build_dof_map(&mesh, problem.boundary.as_deref())?;
    let solution = assemble_solve(&mesh, &dofmap, problem, method)?;
    let rep = error_report(&mesh, &solution, problem.exact.as_ref())?;
    let prev = prev.filter(|p| p.level + 1 == level);
    let record = LevelRecord {
        level,
        n_elements: rep.n_elements,
        dofs: rep.dofs,
        h_max: rep.h_max,
        eta: rep.eta,
        err_u: rep.err_u,
        err_vel: rep.err_vel,
        err_p: rep.err_p,
        eoc_u: eoc(prev.and_then(|p| p.err_u), rep.err_u),
        eoc_vel: eoc(prev.and_then(|p| p.err_vel), rep.err_vel),
        eoc_p: eoc(prev.and_then(|p| p.err_p), rep.err_p),
        eoc_eta: eoc(prev.map(|p| p.eta), Some(rep.eta)),
    };
    Ok(LevelRun {
        mesh,
        solution,
        record,
    })
}

/// Runs the levels in order; a failure reports the level at which it occurred.
pub fn run_convergence(
    problem: &ProblemSpec,
    levels: RangeInclusive<usize>,
    method: SolverMethod,
    mut on_level: impl FnMut(&LevelRun),
) -> Result<Vec<LevelRecord>> {
    problem.validate()?;
    let mut out: Vec<LevelRecord> = Vec::new();
    for level in levels {
        let run = run_level(problem, level, method, out.last())
            .map_err(|e| Error::Range(format!("level {level}: {e}")))?;
        on_level(&run);
        out.push(run.record);
    }
    Ok(out)
}

fn field(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

pub fn to_csv(records: &[LevelRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.level,
            r.n_elements,
            r.dofs,
            field(Some(r.eta)),
            field(r.err_u),
            field(r.err_vel),
            field(r.err_p),
            field(r.eoc_u),
            field(r.eoc_vel),
            field(r.eoc_p),
            field(r.eoc_eta),
        );
    }
    s
}
