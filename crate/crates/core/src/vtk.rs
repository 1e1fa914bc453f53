//! Legacy ASCII VTK output of per-element fields.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::dpg::{postprocess_velocity, Solution};
use crate::error::Result;
use crate::mesh::Mesh;

/// Unstructured grid with cell data `u_h` (value at the centroid), the
/// velocity `curl u_h`, its magnitude and `η_T`.
pub fn render(mesh: &Mesh, sol: &Solution) -> Result<String> {
    let vel = postprocess_velocity(mesh, sol)?;
    let nt = mesh.n_triangles();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "{} solution", sol.problem);
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.n_vertices());
    for p in &mesh.vertices {
        let _ = writeln!(s, "{:.12e} {:.12e} 0", p[0], p[1]);
    }
    let _ = writeln!(s, "CELLS {} {}", nt, 4 * nt);
    for t in &mesh.triangles {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("5\n");
    }
    let _ = writeln!(s, "CELL_DATA {nt}");
    s.push_str("SCALARS u_h double 1\nLOOKUP_TABLE default\n");
    for t in 0..nt {
        let c = sol.u_coeffs(t);
        let _ = writeln!(s, "{:.12e}", (c[0] + c[1] + c[2]) / 3.0);
    }
    s.push_str("VECTORS velocity double\n");
    for v in &vel {
        let _ = writeln!(s, "{:.12e} {:.12e} 0", v[0], v[1]);
    }
    s.push_str("SCALARS velocity_magnitude double 1\nLOOKUP_TABLE default\n");
    for v in &vel {
        let _ = writeln!(s, "{:.12e}", v[0].hypot(v[1]));
    }
    s.push_str("SCALARS eta double 1\nLOOKUP_TABLE default\n");
    for e in &sol.eta_t {
        let _ = writeln!(s, "{e:.12e}");
    }
    Ok(s)
}

pub fn write(mesh: &Mesh, sol: &Solution, path: &Path) -> io::Result<()> {
    let text = render(mesh, sol).map_err(io::Error::other)?;
    std::fs::write(path, text)
}
