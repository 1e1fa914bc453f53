//! Fixtures shared by the benchmarks.

use stokes_dpg::dpg::skeleton_system;
use stokes_dpg::linalg::Csr;
use stokes_dpg::{build_dof_map, problems, study, Mesh, ProblemSpec, TrialDofMap};

pub struct Fixture {
    pub problem: ProblemSpec,
    pub mesh: Mesh,
    pub dofmap: TrialDofMap,
}

/// The smooth Stokes problem on refinement level `level`.
pub fn smooth(level: usize) -> Fixture {
    let problem = problems::smooth();
    let mesh = study::mesh_at(&problem, level);
    let dofmap = build_dof_map(&mesh, problem.boundary.as_deref()).expect("smooth problem has compatible data");
    Fixture { problem, mesh, dofmap }
}

impl Fixture {
    pub fn skeleton(&self) -> (Csr, Vec<f64>) {
        skeleton_system(&self.mesh, &self.dofmap, &self.problem).expect("assembly succeeds")
    }
}
