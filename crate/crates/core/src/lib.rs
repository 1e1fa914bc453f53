//! Discontinuous Petrov-Galerkin discretisation of the biharmonic problem
//! `Δ²u + γu = f` in an ultraweak formulation, with a right-hand side
//! operator that makes the scheme pressure-robust for the Stokes equations
//! in stream-function form.

pub mod dpg;
pub mod error;
pub mod linalg;
pub mod loadreg;
pub mod mesh;
pub mod polyquad;
pub mod problems;
pub mod selfcheck;
pub mod study;
pub mod tracespace;
pub mod vtk;

pub use dpg::{assemble_solve, ErrorReport, Solution};
pub use error::{Error, Result};
pub use linalg::SolverMethod;
pub use mesh::{generate, DomainId, Mesh, Point};
pub use problems::{ProblemId, ProblemSpec};
pub use tracespace::{build_dof_map, TrialDofMap, VertexData};
