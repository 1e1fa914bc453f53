//! Local DPG systems for the ultraweak biharmonic form, global assembly and
//! solve, the built-in residual estimator and post-processing.
//!
//! Test space per element: `P³` scalars (10) and `P⁴` symmetric tensors (45),
//! with the norm `‖v‖² + ‖Hess v‖² + ‖Q‖² + ‖div Div Q‖²`. Trial space per
//! element: `u ∈ P¹`, `P ∈ P⁰` symmetric, and the local views of `û`, `p̂`.
//! The element-private fields `u`, `P` are condensed out before the global
//! solve and recovered afterwards.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{dense_cholesky, sparse_solve, Csr, DenseSpd, SolverMethod};
use crate::loadreg::{apply_ph_rot, build_dual_basis, P1Field};
use crate::mesh::{dist, Mesh, Point};
use crate::polyquad::{
    div_div_adapted_basis, edge_rule, hess_dot_unit, tri_rule, EdgeRule, Jet, ScaledMonomials, SymJet, TensorJet,
    TensorMember, Triangle, TriRule, DEFAULT_EDGE_POINTS, DEFAULT_TRI_EXACTNESS, SYM_FROBENIUS,
};
use crate::problems::{ExactSolution, Load, ProblemId, ProblemSpec, ScalarFn};
use crate::tracespace::{
    edge_lambda, local_edge, phat_pairing_row, scalar_edge_trace_from_samples, tensor_edge_trace_from_samples,
    uhat_pairing_row, LocalGather, TrialDofMap, LOCAL_P, LOCAL_PHAT_EDGE, LOCAL_TRIAL, LOCAL_U,
    LOCAL_UHAT,
};

pub const SCALAR_TEST: usize = 10;
pub const TENSOR_TEST: usize = 45;
pub const TEST_DIM: usize = SCALAR_TEST + TENSOR_TEST;
/// Element-private trial DOFs (`u` and `P`), condensed before the global solve.
pub const FIELD_DOFS: usize = 6;
pub const SKELETON_LOCAL: usize = LOCAL_TRIAL - FIELD_DOFS;

/// Quadrature rules and the test bases shared by all elements: scaled
/// monomials for `P³` and a `div Div`-adapted basis of `ℙ^{4,s}`.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub scalar: ScaledMonomials,
    pub tensor_monomials: ScaledMonomials,
    pub tensor: Vec<TensorMember>,
    pub volume_rule: TriRule,
    pub edge_rule: EdgeRule,
}

impl Discretization {
    pub fn new() -> Result<Self> {
        Self::with_rules(tri_rule(DEFAULT_TRI_EXACTNESS)?, edge_rule(DEFAULT_EDGE_POINTS)?)
    }

    pub fn with_rules(volume_rule: TriRule, edge_rule: EdgeRule) -> Result<Self> {
        let tensor_monomials = ScaledMonomials::new(4)?;
        Ok(Discretization {
            scalar: ScaledMonomials::new(3)?,
            tensor: div_div_adapted_basis(&tensor_monomials),
            tensor_monomials,
            volume_rule,
            edge_rule,
        })
    }
}

/// Test-basis jets at one point.
pub type TestJets = (Vec<Jet>, Vec<TensorJet>);

/// Physical test-basis jets on one element.
#[derive(Debug, Clone)]
pub struct ElementTables {
    pub tri: Triangle,
    pub center: Point,
    pub scale: f64,
    pub lambdas: Vec<[f64; 3]>,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub volume: Vec<TestJets>,
    /// Per local edge: jets at the edge rule points, then at both endpoints.
    pub edges: [Vec<TestJets>; 3],
}

impl ElementTables {
    pub fn jets_at(&self, disc: &Discretization, p: Point) -> TestJets {
        let mono = disc.tensor_monomials.eval(self.center, self.scale, p);
        (
            disc.scalar.eval(self.center, self.scale, p),
            disc.tensor.iter().map(|m| m.eval(&mono)).collect(),
        )
    }
}

pub fn element_tables(disc: &Discretization, vertices: [Point; 3]) -> Result<ElementTables> {
    let tri = Triangle::new(vertices)?;
    let center = tri.centroid();
    let scale = vertices.iter().map(|v| dist(*v, center)).fold(0.0, f64::max);
    let (lambdas, points, weights) = tri.map_rule(&disc.volume_rule);
    let mut tab = ElementTables {
        tri,
        center,
        scale,
        lambdas,
        points,
        weights,
        volume: Vec::new(),
        edges: [Vec::new(), Vec::new(), Vec::new()],
    };
    tab.volume = tab.points.iter().map(|&p| tab.jets_at(disc, p)).collect();
    for i in 0..3 {
        tab.edges[i] = disc
            .edge_rule
            .points
            .iter()
            .chain([0.0, 1.0].iter())
            .map(|&s| tab.jets_at(disc, tri.point(edge_lambda(i, s))))
            .collect();
    }
    Ok(tab)
}

fn tensor_row(m: usize) -> usize {
    SCALAR_TEST + m
}

/// Test-space Gram matrix `G` (55 × 55).
pub fn local_gram(tab: &ElementTables) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(TEST_DIM, TEST_DIM);
    for ((v, q), &w) in tab.volume.iter().zip(&tab.weights) {
        for i in 0..SCALAR_TEST {
            for j in 0..=i {
                let (a, b) = (&v[i], &v[j]);
                g[(i, j)] += w
                    * (a.val * b.val + a.hess[0] * b.hess[0] + a.hess[1] * b.hess[1] + 2.0 * a.hess[2] * b.hess[2]);
            }
        }
        for i in 0..TENSOR_TEST {
            for j in 0..=i {
                let (a, b) = (&q[i], &q[j]);
                let mass: f64 = (0..3).map(|c| SYM_FROBENIUS[c] * a.q.val[c] * b.q.val[c]).sum();
                g[(tensor_row(i), tensor_row(j))] += w * (mass + a.div_div * b.div_div);
            }
        }
    }
    for i in 0..TEST_DIM {
        for j in 0..i {
            g[(j, i)] = g[(i, j)];
        }
    }
    g
}

/// Coupling matrix `B` (55 × 24) of `b⊥` between the local trial DOFs and
/// the test basis. `signs` relate local and global edge orientations.
pub fn local_b(disc: &Discretization, tab: &ElementTables, signs: [f64; 3], gamma: f64) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(TEST_DIM, LOCAL_TRIAL);
    for (((v, q), &w), lam) in tab.volume.iter().zip(&tab.weights).zip(&tab.lambdas) {
        for i in 0..SCALAR_TEST {
            for mu in 0..3 {
                b[(i, LOCAL_U + mu)] += w * gamma * lam[mu] * v[i].val;
            }
            for c in 0..3 {
                b[(i, LOCAL_P + c)] += w * hess_dot_unit(c, &v[i].hess);
            }
        }
        for (m, qm) in q.iter().enumerate() {
            let r = tensor_row(m);
            for mu in 0..3 {
                b[(r, LOCAL_U + mu)] -= w * lam[mu] * qm.div_div;
            }
            for c in 0..3 {
                b[(r, LOCAL_P + c)] += w * SYM_FROBENIUS[c] * qm.q.val[c];
            }
        }
    }

    let nq = disc.edge_rule.points.len();
    let edges = [0, 1, 2].map(|e| local_edge(&tab.tri, e));
    for m in 0..TENSOR_TEST {
        let traces = [0, 1, 2].map(|e| {
            let data = &tab.edges[e];
            let samples: Vec<SymJet> = data[..nq].iter().map(|(_, qj)| qj[m].q).collect();
            tensor_edge_trace_from_samples(&edges[e], &samples, &data[nq].1[m].q.val, &data[nq + 1].1[m].q.val)
        });
        let row = uhat_pairing_row(&tab.tri, &disc.edge_rule, &traces);
        for k in 0..9 {
            b[(tensor_row(m), LOCAL_UHAT + k)] = row[k];
        }
    }
    for i in 0..SCALAR_TEST {
        let traces = [0, 1, 2].map(|e| {
            let data = &tab.edges[e];
            let samples: Vec<(f64, Point)> = data[..nq].iter().map(|(vj, _)| (vj[i].val, vj[i].grad)).collect();
            scalar_edge_trace_from_samples(&edges[e], &samples, data[nq].0[i].val)
        });
        let row = phat_pairing_row(&tab.tri, &disc.edge_rule, signs, &traces);
        for k in 0..9 {
            b[(i, LOCAL_PHAT_EDGE + k)] = row[k];
        }
    }
    b
}

/// Load vector: `∫_T (f̃ + g) v` on scalar test rows, zero on tensor rows.
/// `ftilde` holds the vertex values of the regularized load on `T`.
pub fn local_load(tab: &ElementTables, ftilde: Option<&[f64; 3]>, l2: Option<&dyn Fn(Point) -> f64>) -> DVector<f64> {
    let mut l = DVector::zeros(TEST_DIM);
    if ftilde.is_none() && l2.is_none() {
        return l;
    }
    for (((v, _), &w), (lam, p)) in tab.volume.iter().zip(&tab.weights).zip(tab.lambdas.iter().zip(&tab.points)) {
        let mut f = 0.0;
        if let Some(c) = ftilde {
            f += c[0] * lam[0] + c[1] * lam[1] + c[2] * lam[2];
        }
        if let Some(g) = l2 {
            f += g(*p);
        }
        for i in 0..SCALAR_TEST {
            l[i] += w * f * v[i].val;
        }
    }
    l
}

/// `(BᵀG⁻¹B, BᵀG⁻¹l)` and the factor of `G`.
pub fn condense(g: &DMatrix<f64>, b: &DMatrix<f64>, l: &DVector<f64>) -> Result<(DMatrix<f64>, DVector<f64>, DenseSpd)> {
    let chol = dense_cholesky(g)?;
    let mut x = b.clone();
    for mut col in x.column_iter_mut() {
        chol.forward_in_place(col.as_mut_slice());
    }
    let mut y = l.clone();
    chol.forward_in_place(y.as_mut_slice());
    Ok((x.transpose() * &x, x.transpose() * y, chol))
}

/// Everything needed to condense one element.
#[derive(Debug, Clone)]
pub struct LocalSystem {
    pub g: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub l: DVector<f64>,
    pub gather: LocalGather,
}

impl LocalSystem {
    /// Normal equations with the essential values lifted to the right-hand
    /// side: `(S, r - S w₀)`.
    pub fn condense(&self) -> Result<(DMatrix<f64>, DVector<f64>)> {
        let (s, r, _) = condense(&self.g, &self.b, &self.l)?;
        let w0 = DVector::from_column_slice(&self.gather.fixed);
        let lifted = &r - &s * w0;
        Ok((s, lifted))
    }

    /// `ρ = l - B w` for local trial values `w`.
    pub fn residual(&self, w: &[f64; LOCAL_TRIAL]) -> DVector<f64> {
        &self.l - &self.b * DVector::from_column_slice(w)
    }
}

/// Load of the discrete scheme, prepared once per mesh.
#[derive(Clone, Default)]
pub struct LoadData {
    pub ftilde: Option<P1Field>,
    pub l2: Option<ScalarFn>,
}

impl LoadData {
    pub fn new(mesh: &Mesh, problem: &ProblemSpec) -> Result<Self> {
        Ok(match &problem.load {
            Load::Zero => LoadData::default(),
            Load::Vector { f, l2 } => {
                let dual = build_dual_basis(mesh)?;
                LoadData {
                    ftilde: Some(apply_ph_rot(mesh, &dual, f.as_ref())?),
                    l2: l2.clone(),
                }
            }
            Load::Scalar(g) => LoadData {
                ftilde: None,
                l2: Some(g.clone()),
            },
        })
    }
}

pub fn local_system(
    disc: &Discretization,
    mesh: &Mesh,
    dofmap: &TrialDofMap,
    load: &LoadData,
    gamma: f64,
    t: usize,
) -> Result<LocalSystem> {
    let tab = element_tables(disc, mesh.corners(t))?;
    let signs = mesh.elem_edges[t].map(|(_, s)| s);
    let g = local_gram(&tab);
    let b = local_b(disc, &tab, signs, gamma);
    let l = local_load(
        &tab,
        load.ftilde.as_ref().map(|f| &f.coeffs[t]),
        load.l2.as_ref().map(|g| g.as_ref() as &dyn Fn(Point) -> f64),
    );
    Ok(LocalSystem {
        g,
        b,
        l,
        gather: dofmap.gather(mesh, t),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub problem: ProblemId,
    pub gamma: f64,
    pub dofmap: TrialDofMap,
    /// Global trial vector in the numbering of [`TrialDofMap`].
    pub x: Vec<f64>,
    pub eta_t: Vec<f64>,
    pub eta: f64,
    pub solver_iterations: usize,
    /// `‖S s - r‖ / ‖r‖` of the skeleton system.
    pub relative_residual: f64,
}

impl Solution {
    /// Vertex values of `u_h` on element `t`.
    pub fn u_coeffs(&self, t: usize) -> [f64; 3] {
        let o = self.dofmap.u_offset() + 3 * t;
        [self.x[o], self.x[o + 1], self.x[o + 2]]
    }

    /// `P_h` on element `t` as `(xx, yy, xy)`.
    pub fn p_coeffs(&self, t: usize) -> [f64; 3] {
        let o = self.dofmap.p_offset() + 3 * t;
        [self.x[o], self.x[o + 1], self.x[o + 2]]
    }

    pub fn n_dofs(&self) -> usize {
        self.dofmap.n_total()
    }
}

/// Element data kept between assembly and field recovery: the factor of
/// `S_ff`, `Y = L_ff⁻¹ S_fs` and `y = L_ff⁻¹ r_f`.
struct FieldRecovery {
    chol: DenseSpd,
    y_mat: DMatrix<f64>,
    y_vec: DVector<f64>,
}

/// Schur complement of the field block of one element's normal equations.
fn condense_fields(
    s: &DMatrix<f64>,
    r: &DVector<f64>,
) -> Result<(DMatrix<f64>, DVector<f64>, FieldRecovery)> {
    let f = FIELD_DOFS;
    let n = SKELETON_LOCAL;
    let chol = dense_cholesky(&s.view((0, 0), (f, f)).into_owned())?;
    let mut y_mat = s.view((0, f), (f, n)).into_owned();
    for mut col in y_mat.column_iter_mut() {
        chol.forward_in_place(col.as_mut_slice());
    }
    let mut y_vec = r.rows(0, f).into_owned();
    chol.forward_in_place(y_vec.as_mut_slice());
    let s_ss = s.view((f, f), (n, n)) - y_mat.transpose() * &y_mat;
    let r_s = r.rows(f, n) - y_mat.transpose() * &y_vec;
    Ok((s_ss, r_s, FieldRecovery { chol, y_mat, y_vec }))
}

fn skeleton_pattern(gathers: &[LocalGather], offset: usize, n: usize) -> Vec<Vec<usize>> {
    let mut rows = vec![Vec::new(); n];
    for g in gathers {
        let mut idx: Vec<usize> = g.targets[FIELD_DOFS..]
            .iter()
            .flat_map(|t| t.iter().map(|&(j, _)| j - offset))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        for &i in &idx {
            rows[i].extend_from_slice(&idx);
        }
    }
    rows
}

fn assemble_skeleton(
    disc: &Discretization,
    mesh: &Mesh,
    dofmap: &TrialDofMap,
    load: &LoadData,
    gamma: f64,
) -> Result<(Csr, Vec<f64>, Vec<FieldRecovery>)> {
    let offset = dofmap.skeleton_offset();
    let n = dofmap.n_skeleton();
    let gathers: Vec<LocalGather> = (0..mesh.n_triangles()).map(|t| dofmap.gather(mesh, t)).collect();
    let mut k = Csr::from_pattern(n, skeleton_pattern(&gathers, offset, n));
    let mut rhs = vec![0.0; n];
    let mut recovery = Vec::with_capacity(mesh.n_triangles());

    for (t, gather) in gathers.iter().enumerate() {
        let ls = local_system(disc, mesh, dofmap, load, gamma, t)?;
        let (s, r, _) = condense(&ls.g, &ls.b, &ls.l)?;
        let (s_c, r_c, rec) = condense_fields(&s, &r)?;
        let fixed = DVector::from_column_slice(&gather.fixed[FIELD_DOFS..]);
        let r_c = r_c - &s_c * fixed;
        for a in 0..SKELETON_LOCAL {
            for &(ga, ca) in &gather.targets[FIELD_DOFS + a] {
                rhs[ga - offset] += ca * r_c[a];
                for bb in 0..SKELETON_LOCAL {
                    let v = s_c[(a, bb)];
                    if v == 0.0 {
                        continue;
                    }
                    for &(gb, cb) in &gather.targets[FIELD_DOFS + bb] {
                        k.add(ga - offset, gb - offset, ca * cb * v);
                    }
                }
            }
        }
        recovery.push(rec);
    }
    Ok((k, rhs, recovery))
}

/// The condensed skeleton matrix and right-hand side, numbered from
/// [`TrialDofMap::skeleton_offset`].
pub fn skeleton_system(mesh: &Mesh, dofmap: &TrialDofMap, problem: &ProblemSpec) -> Result<(Csr, Vec<f64>)> {
    let disc = Discretization::new()?;
    let load = LoadData::new(mesh, problem)?;
    let (k, rhs, _) = assemble_skeleton(&disc, mesh, dofmap, &load, problem.gamma)?;
    Ok((k, rhs))
}

/// Assembles and solves the condensed skeleton system, recovers the field
/// unknowns and evaluates the estimator.
pub fn assemble_solve(
    mesh: &Mesh,
    dofmap: &TrialDofMap,
    problem: &ProblemSpec,
    method: SolverMethod,
) -> Result<Solution> {
    let disc = Discretization::new()?;
    let load = LoadData::new(mesh, problem)?;
    let offset = dofmap.skeleton_offset();
    let (k, rhs, recovery) = assemble_skeleton(&disc, mesh, dofmap, &load, problem.gamma)?;
    let report = sparse_solve(&k, &rhs, method)?;
    let mut x = vec![0.0; dofmap.n_total()];
    x[offset..].copy_from_slice(&report.x);
    for (t, rec) in recovery.iter().enumerate() {
        let w = dofmap.local_values(mesh, t, &x);
        let ws = DVector::from_column_slice(&w[FIELD_DOFS..]);
        let mut f = &rec.y_vec - &rec.y_mat * ws;
        rec.chol.backward_in_place(f.as_mut_slice());
        x[dofmap.u_offset() + 3 * t..dofmap.u_offset() + 3 * t + 3].copy_from_slice(&f.as_slice()[0..3]);
        x[dofmap.p_offset() + 3 * t..dofmap.p_offset() + 3 * t + 3].copy_from_slice(&f.as_slice()[3..6]);
    }

    let eta_t = estimate_with(&disc, mesh, dofmap, &load, problem.gamma, &x)?;
    let eta = eta_t.iter().map(|e| e * e).sum::<f64>().sqrt();
    Ok(Solution {
        problem: problem.id,
        gamma: problem.gamma,
        dofmap: dofmap.clone(),
        x,
        eta_t,
        eta,
        solver_iterations: report.iterations,
        relative_residual: report.relative_residual,
    })
}

/// `η_T = (ρᵀG⁻¹ρ)^{1/2}` with `ρ = l - B w` for every element.
pub fn estimate_with(
    disc: &Discretization,
    mesh: &Mesh,
    dofmap: &TrialDofMap,
    load: &LoadData,
    gamma: f64,
    x: &[f64],
) -> Result<Vec<f64>> {
    (0..mesh.n_triangles())
        .map(|t| {
            let ls = local_system(disc, mesh, dofmap, load, gamma, t)?;
            let mut rho = ls.residual(&dofmap.local_values(mesh, t, x));
            dense_cholesky(&ls.g)?.forward_in_place(rho.as_mut_slice());
            Ok(rho.norm())
        })
        .collect()
}

/// Per-element `η_T` and `η = (Σ η_T²)^{1/2}` of a solution of `problem`.
pub fn estimate(mesh: &Mesh, problem: &ProblemSpec, sol: &Solution) -> Result<(Vec<f64>, f64)> {
    let disc = Discretization::new()?;
    let load = LoadData::new(mesh, problem)?;
    let eta_t = estimate_with(&disc, mesh, &sol.dofmap, &load, sol.gamma, &sol.x)?;
    let eta = eta_t.iter().map(|e| e * e).sum::<f64>().sqrt();
    Ok((eta_t, eta))
}

/// `ρᵀd / (dᵀGd)^{1/2}` for a test direction `d`.
pub fn residual_ratio(g: &DMatrix<f64>, rho: &DVector<f64>, d: &DVector<f64>) -> f64 {
    rho.dot(d) / d.dot(&(g * d)).sqrt()
}

/// Per-element velocity `curl u_h = (∂y u_h, -∂x u_h)`.
pub fn postprocess_velocity(mesh: &Mesh, sol: &Solution) -> Result<Vec<Point>> {
    (0..mesh.n_triangles())
        .map(|t| {
            let tri = Triangle::new(mesh.corners(t))?;
            Ok(p1_curl(&tri, sol.u_coeffs(t)))
        })
        .collect()
}

fn p1_curl(tri: &Triangle, c: [f64; 3]) -> Point {
    let g = &tri.grad_lambda;
    let gx = c[0] * g[0][0] + c[1] * g[1][0] + c[2] * g[2][0];
    let gy = c[0] * g[0][1] + c[1] * g[1][1] + c[2] * g[2][1];
    [gy, -gx]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub n_elements: usize,
    pub dofs: usize,
    pub h_max: f64,
    pub eta: f64,
    pub eta_t: Vec<f64>,
    pub err_u: Option<f64>,
    pub err_vel: Option<f64>,
    pub err_p: Option<f64>,
}

/// `L₂` errors of `u_h`, `curl u_h` and `P_h` against the exact solution,
/// whose `P` is the Hessian of `u`.
pub fn compute_errors(mesh: &Mesh, sol: &Solution, exact: &ExactSolution) -> Result<[f64; 3]> {
    let rule = tri_rule(DEFAULT_TRI_EXACTNESS)?;
    let mut e = [0.0; 3];
    for t in 0..mesh.n_triangles() {
        let tri = Triangle::new(mesh.corners(t))?;
        let c = sol.u_coeffs(t);
        let vel = p1_curl(&tri, c);
        let ph = sol.p_coeffs(t);
        let (lambdas, points, weights) = tri.map_rule(&rule);
        for ((l, p), w) in lambdas.iter().zip(&points).zip(&weights) {
            let uh = c[0] * l[0] + c[1] * l[1] + c[2] * l[2];
            e[0] += w * ((exact.u)(*p) - uh).powi(2);
            let v = exact.velocity(*p);
            e[1] += w * ((v[0] - vel[0]).powi(2) + (v[1] - vel[1]).powi(2));
            let h = (exact.hessian)(*p);
            e[2] += w * (0..3).map(|k| SYM_FROBENIUS[k] * (h[k] - ph[k]).powi(2)).sum::<f64>();
        }
    }
    Ok(e.map(f64::sqrt))
}

pub fn error_report(mesh: &Mesh, sol: &Solution, exact: Option<&ExactSolution>) -> Result<ErrorReport> {
    let errs = exact.map(|e| compute_errors(mesh, sol, e)).transpose()?;
    Ok(ErrorReport {
        n_elements: mesh.n_triangles(),
        dofs: sol.n_dofs(),
        h_max: mesh.h_max(),
        eta: sol.eta,
        eta_t: sol.eta_t.clone(),
        err_u: errs.map(|e| e[0]),
        err_vel: errs.map(|e| e[1]),
        err_p: errs.map(|e| e[2]),
    })
}

/// `∫ u_{h,1} dy` along the vertical line `x = x0`.
pub fn cross_section_flux(mesh: &Mesh, sol: &Solution, x0: f64) -> Result<f64> {
    let vel = postprocess_velocity(mesh, sol)?;
    section_integral(mesh, &vel.iter().map(|v| v[0]).collect::<Vec<_>>(), x0)
}

/// Integral of a piecewise constant field along `x = x0`, shifted by `1e-9`
/// when the line runs through mesh vertices.
pub fn section_integral(mesh: &Mesh, values: &[f64], x0: f64) -> Result<f64> {
    let (lo, hi) = mesh
        .vertices
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[0]), b.max(p[0])));
    if !(x0 > lo && x0 < hi) {
        return Err(Error::Range(format!("section x = {x0} outside ({lo}, {hi})")));
    }
    let x0 = if mesh.vertices.iter().any(|p| (p[0] - x0).abs() < 1e-12) {
        x0 + 1e-9
    } else {
        x0
    };
    let mut sum = 0.0;
    for t in 0..mesh.n_triangles() {
        let c = mesh.corners(t);
        let ys: Vec<f64> = (0..3)
            .filter_map(|i| {
                let (a, b) = (c[i], c[(i + 1) % 3]);
                ((a[0] - x0) * (b[0] - x0) < 0.0).then(|| a[1] + (x0 - a[0]) / (b[0] - a[0]) * (b[1] - a[1]))
            })
            .collect();
        if ys.len() == 2 {
            sum += values[t] * (ys[0] - ys[1]).abs();
        }
    }
    Ok(sum)
}
