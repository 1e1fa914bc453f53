//! Aggregated numerical oracles: identities that any correct build satisfies
//! independent of mesh resolution.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dpg::{assemble_solve, element_tables, local_gram, local_system, Discretization, LoadData, TEST_DIM};
use crate::error::Result;
use crate::linalg::{dense_cholesky, SolverMethod};
use crate::loadreg::{build_dual_basis, dual_pairing};
use crate::mesh::{generate, DomainId, Mesh, Point};
use crate::polyquad::{edge_rule, tri_rule, ScalarBasis, Triangle};
use crate::problems::{self, ProblemSpec};
use crate::tracespace::{build_dof_map, edge_lambda, local_edge, pair_uhat_with_test, sym_jet, tensor_edge_trace};

pub const DEFAULT_SEED: u64 = 20240611;
pub const IBP_SAMPLES: usize = 200;
pub const IBP_TOLERANCE: f64 = 1e-9;
pub const BIORTHOGONALITY_TOLERANCE: f64 = 1e-12;
pub const MIXED_FORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn new(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        OracleCheck {
            name: name.into(),
            defect,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.defect <= self.tolerance
    }
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: defect {:.3e} (tolerance {:.1e})", self.name, self.defect, self.tolerance)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A random triangle with vertices in `[-2, 2]²`, rejecting slivers.
pub fn random_triangle(rng: &mut impl Rng) -> Triangle {
    loop {
        let v: [Point; 3] = std::array::from_fn(|_| [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]);
        let Ok(tri) = Triangle::new(v) else { continue };
        let h = (0..3).map(|i| local_edge(&tri, i).length).fold(0.0, f64::max);
        if tri.area > 0.05 * h * h {
            return tri;
        }
    }
}

/// Relative defect between the skeleton pairing and the volume form
/// `(z, div Div Q)_T - (Hess z, Q)_T` for a quadratic `z` (coefficients of
/// `1, x, y, x², xy, y²`) and a tensor `Q` in the degree-4 Bernstein basis
/// (45 coefficients: xx block, yy block, xy block).
pub fn ibp_defect(tri: &Triangle, zc: &[f64; 6], qc: &[f64]) -> Result<f64> {
    let z = |p: Point| zc[0] + zc[1] * p[0] + zc[2] * p[1] + zc[3] * p[0] * p[0] + zc[4] * p[0] * p[1] + zc[5] * p[1] * p[1];
    let zgrad = |p: Point| [zc[1] + 2.0 * zc[3] * p[0] + zc[4] * p[1], zc[2] + zc[4] * p[0] + 2.0 * zc[5] * p[1]];
    let zhess = [2.0 * zc[3], 2.0 * zc[5], zc[4]];
    let basis = ScalarBasis::new(4)?;
    let n = basis.dim();

    let (lambdas, points, weights) = tri.map_rule(&tri_rule(10)?);
    let mut volume = 0.0;
    let mut scale = 0.0;
    for ((l, p), w) in lambdas.iter().zip(&points).zip(&weights) {
        let jets = basis.eval(tri, *l);
        let mut dd = 0.0;
        let mut frob = 0.0;
        for (i, j) in jets.iter().enumerate() {
            dd += qc[i] * j.hess[0] + qc[n + i] * j.hess[1] + 2.0 * qc[2 * n + i] * j.hess[2];
            frob += (zhess[0] * qc[i] + zhess[1] * qc[n + i] + 2.0 * zhess[2] * qc[2 * n + i]) * j.val;
        }
        volume += w * (z(*p) * dd - frob);
        scale += w * ((z(*p) * dd).abs() + frob.abs());
    }

    let rule = edge_rule(6)?;
    let traces = [0, 1, 2].map(|i| {
        tensor_edge_trace(&local_edge(tri, i), &rule, &|s| sym_jet(&basis.eval(tri, edge_lambda(i, s)), qc))
    });
    let mut uhat = [0.0; 9];
    for i in 0..3 {
        let p = tri.vertices[i];
        let g = zgrad(p);
        uhat[3 * i..3 * i + 3].copy_from_slice(&[z(p), g[0], g[1]]);
    }
    let boundary = pair_uhat_with_test(tri, &rule, &traces, &uhat);
    Ok((boundary - volume).abs() / scale.max(f64::MIN_POSITIVE))
}

/// Maximum relative IBP defect over `samples` seeded random pairs.
pub fn ibp_sweep(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let tri = random_triangle(&mut rng);
        let zc: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let qc: Vec<f64> = (0..45).map(|_| rng.gen_range(-1.0..1.0)).collect();
        worst = worst.max(ibp_defect(&tri, &zc, &qc)?);
    }
    Ok(worst)
}

/// `max |(ψ_x, η_y) - δ_xy|` over interior `x` and all `y`.
pub fn biorthogonality_defect(mesh: &Mesh) -> Result<f64> {
    let dual = build_dual_basis(mesh)?;
    let mut worst: f64 = 0.0;
    for x in (0..mesh.n_vertices()).filter(|&x| !mesh.boundary_vertex[x]) {
        for y in 0..mesh.n_vertices() {
            let expect = if x == y { 1.0 } else { 0.0 };
            worst = worst.max((dual_pairing(mesh, &dual, x, y)? - expect).abs());
        }
    }
    Ok(worst)
}

/// Mismatch count of `dim Û = 3#N₀` and `dim Q̂ = 2#E + 3#T - #N₀`.
pub fn dimension_defect(mesh: &Mesh) -> Result<usize> {
    let map = build_dof_map(mesh, None)?;
    let n0 = mesh.n_interior_vertices();
    let expect_q = 2 * mesh.n_edges() + 3 * mesh.n_triangles() - n0;
    Ok(map.n_uhat.abs_diff(3 * n0) + map.n_qhat.abs_diff(expect_q))
}

/// Trial vector from the dense saddle-point system `[G B; Bᵀ 0](ε; w) = (l; 0)`
/// built over the full (uncondensed) unknown set.
pub fn mixed_form_solution(mesh: &Mesh, problem: &ProblemSpec) -> Result<DVector<f64>> {
    let disc = Discretization::new()?;
    let dofmap = build_dof_map(mesh, problem.boundary.as_deref())?;
    let load = LoadData::new(mesh, problem)?;
    let nt = TEST_DIM * mesh.n_triangles();
    let n = dofmap.n_total();
    let mut a = DMatrix::zeros(nt + n, nt + n);
    let mut rhs = DVector::zeros(nt + n);
    for t in 0..mesh.n_triangles() {
        let ls = local_system(&disc, mesh, &dofmap, &load, problem.gamma, t)?;
        let o = TEST_DIM * t;
        a.view_mut((o, o), (TEST_DIM, TEST_DIM)).copy_from(&ls.g);
        let lifted = &ls.l - &ls.b * DVector::from_column_slice(&ls.gather.fixed);
        rhs.rows_mut(o, TEST_DIM).copy_from(&lifted);
        for (loc, targets) in ls.gather.targets.iter().enumerate() {
            for &(g, c) in targets {
                for i in 0..TEST_DIM {
                    let v = c * ls.b[(i, loc)];
                    a[(o + i, nt + g)] += v;
                    a[(nt + g, o + i)] += v;
                }
            }
        }
    }
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| crate::error::Error::Range("singular saddle-point system".into()))?;
    Ok(sol.rows(nt, n).into_owned())
}

/// `max_i |w_i - x_i| / max_i |x_i|` between the saddle-point oracle and
/// the condensed solve.
pub fn mixed_form_defect(mesh: &Mesh, problem: &ProblemSpec) -> Result<f64> {
    let oracle = mixed_form_solution(mesh, problem)?;
    let dofmap = build_dof_map(mesh, problem.boundary.as_deref())?;
    let sol = assemble_solve(mesh, &dofmap, problem, SolverMethod::Direct)?;
    let scale = oracle.amax().max(f64::MIN_POSITIVE);
    let diff = oracle.iter().zip(&sol.x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(diff / scale)
}

/// Smallest Cholesky pivot of the scaled element Gram matrices
/// `D^{-1/2} G D^{-1/2}` over all elements of `mesh` and `extra` random
/// triangles; positive iff all are SPD.
pub fn gram_min_pivot(mesh: &Mesh, extra: usize, seed: u64) -> Result<f64> {
    let disc = Discretization::new()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<[Point; 3]> = (0..mesh.n_triangles()).map(|t| mesh.corners(t)).collect();
    elements.extend((0..extra).map(|_| random_triangle(&mut rng).vertices));
    let mut worst = f64::INFINITY;
    for v in elements {
        let g = local_gram(&element_tables(&disc, v)?);
        let d: Vec<f64> = (0..g.nrows()).map(|i| g[(i, i)].sqrt()).collect();
        let scaled = DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| g[(i, j)] / (d[i] * d[j]));
        match dense_cholesky(&scaled) {
            Ok(l) => {
                let f = l.factor();
                worst = worst.min((0..f.nrows()).map(|i| f[(i, i)] * f[(i, i)]).fold(f64::INFINITY, f64::min));
            }
            Err(_) => return Ok(0.0),
        }
    }
    Ok(worst)
}

/// Runs every oracle with the given seed.
pub fn run_oracles(seed: u64) -> Result<OracleReport> {
    let mut report = OracleReport::default();
    report.checks.push(OracleCheck::new(
        format!("integration by parts, {IBP_SAMPLES} random pairs"),
        ibp_sweep(seed, IBP_SAMPLES)?,
        IBP_TOLERANCE,
    ));

    let us2 = generate(DomainId::UnitSquare(2));
    let meshes = [
        ("unit_square(1)", generate(DomainId::UnitSquare(1))),
        ("unit_square(2) refined once", us2.refined(1)),
        ("channel", generate(DomainId::ChannelStep)),
    ];
    for (name, mesh) in &meshes {
        report.checks.push(OracleCheck::new(
            format!("dimension formulas on {name}"),
            dimension_defect(mesh)? as f64,
            0.0,
        ));
    }
    report.checks.push(OracleCheck::new(
        "biorthogonality on unit_square(2)",
        biorthogonality_defect(&us2)?,
        BIORTHOGONALITY_TOLERANCE,
    ));

    let base = generate(DomainId::UnitSquare(1));
    for (name, problem) in [("plate", problems::plate_manufactured()), ("stokes", problems::smooth())] {
        report.checks.push(OracleCheck::new(
            format!("mixed-form equivalence, {name} mode"),
            mixed_form_defect(&base, &problem)?,
            MIXED_FORM_TOLERANCE,
        ));
    }

    let pivot = gram_min_pivot(&us2, 20, seed)?;
    report.checks.push(OracleCheck::new("element Gram matrices SPD", if pivot > 0.0 { 0.0 } else { 1.0 }, 0.0));
    Ok(report)
}
