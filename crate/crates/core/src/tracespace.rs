//! Skeleton unknowns and their element-boundary pairings.
//!
//! `û` is the trace of an `H²₀` function: per vertex a value and a gradient,
//! inducing a Hermite cubic along each edge and a linear normal derivative.
//! `p̂` is the trace of an `H(div Div)` tensor: per edge the normal-normal
//! moment and the effective shear (both constant), plus one corner jump per
//! element vertex. At interior vertices the jumps of the surrounding
//! elements sum to zero; the jump of the lowest-numbered element is
//! eliminated.

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};
pub use crate::polyquad::SymJet;
use crate::polyquad::{EdgeRule, Jet, Triangle};

/// Value and gradient of a function at a vertex.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VertexData {
    pub value: f64,
    pub grad: [f64; 2],
}

impl VertexData {
    pub const ZERO: VertexData = VertexData {
        value: 0.0,
        grad: [0.0, 0.0],
    };

    pub fn as_array(&self) -> [f64; 3] {
        [self.value, self.grad[0], self.grad[1]]
    }
}

/// Boundary data evaluated at `point` on the boundary segment containing
/// the boundary edge with midpoint `segment`.
pub type BoundaryFn = dyn Fn(Point, Point) -> VertexData + Send + Sync;

pub const CORNER_TOLERANCE: f64 = 1e-12;

/// Number of local trial DOFs per element: `u` (3), `P` (3), `û` (9), `p̂` (9).
pub const LOCAL_TRIAL: usize = 24;
pub const LOCAL_U: usize = 0;
pub const LOCAL_P: usize = 3;
pub const LOCAL_UHAT: usize = 6;
pub const LOCAL_PHAT_EDGE: usize = 15;
pub const LOCAL_JUMP: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpSlot {
    /// Owns the skeleton unknown with this index (relative to the `Q̂` block).
    Free(usize),
    /// Expressed as minus the sum of the other jumps at the vertex.
    Eliminated,
}

/// Global numbering of trial unknowns:
/// `[u (3 #T) | P (3 #T) | Û (3 #N₀) | Q̂ (2 #E + 3 #T - #N₀)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDofMap {
    pub n_elements: usize,
    pub n_uhat: usize,
    pub n_qhat: usize,
    /// First of the three `Û` unknowns of each interior vertex.
    pub uhat_index: Vec<Option<usize>>,
    /// Prescribed `(z, ∇z)` at boundary vertices.
    pub essential: Vec<Option<VertexData>>,
    pub jump_slots: Vec<[JumpSlot; 3]>,
    n_edges: usize,
}

/// Local-to-global map of one element: local DOF `i` equals
/// `fixed[i] + Σ c x[g]` over `targets[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGather {
    pub targets: Vec<Vec<(usize, f64)>>,
    pub fixed: [f64; LOCAL_TRIAL],
}

/// Builds the DOF map. `bc = None` means homogeneous data.
pub fn build_dof_map(mesh: &Mesh, bc: Option<&BoundaryFn>) -> Result<TrialDofMap> {
    let nv = mesh.n_vertices();
    let mut uhat_index = vec![None; nv];
    let mut essential = vec![None; nv];
    let mut n_uhat = 0;
    for v in 0..nv {
        if mesh.boundary_vertex[v] {
            essential[v] = Some(match bc {
                None => VertexData::ZERO,
                Some(f) => boundary_vertex_data(mesh, v, f)?,
            });
        } else {
            uhat_index[v] = Some(n_uhat);
            n_uhat += 3;
        }
    }
    let mut jump_slots = vec![[JumpSlot::Eliminated; 3]; mesh.n_triangles()];
    let mut next = 2 * mesh.n_edges();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for (i, &v) in tri.iter().enumerate() {
            let owner = mesh.vertex_patches[v][0];
            jump_slots[t][i] = if !mesh.boundary_vertex[v] && owner == t {
                JumpSlot::Eliminated
            } else {
                next += 1;
                JumpSlot::Free(next - 1)
            };
        }
    }
    Ok(TrialDofMap {
        n_elements: mesh.n_triangles(),
        n_uhat,
        n_qhat: next,
        uhat_index,
        essential,
        jump_slots,
        n_edges: mesh.n_edges(),
    })
}

fn boundary_vertex_data(mesh: &Mesh, v: usize, f: &BoundaryFn) -> Result<VertexData> {
    let p = mesh.vertices[v];
    let edges = mesh.boundary_edges_at(v);
    let data: Vec<VertexData> = edges.iter().map(|&e| f(p, mesh.edge_midpoint(e))).collect();
    let first = data[0];
    for d in &data[1..] {
        let disc = (d.value - first.value)
            .abs()
            .max((d.grad[0] - first.grad[0]).abs())
            .max((d.grad[1] - first.grad[1]).abs());
        if disc > CORNER_TOLERANCE {
            return Err(Error::DataCompatibility {
                vertex: v,
                x: p[0],
                y: p[1],
                discrepancy: disc,
            });
        }
    }
    Ok(first)
}

impl TrialDofMap {
    pub fn u_offset(&self) -> usize {
        0
    }

    pub fn p_offset(&self) -> usize {
        3 * self.n_elements
    }

    pub fn uhat_offset(&self) -> usize {
        6 * self.n_elements
    }

    pub fn qhat_offset(&self) -> usize {
        self.uhat_offset() + self.n_uhat
    }

    /// Start of the skeleton block (`Û` then `Q̂`).
    pub fn skeleton_offset(&self) -> usize {
        self.uhat_offset()
    }

    pub fn n_skeleton(&self) -> usize {
        self.n_uhat + self.n_qhat
    }

    /// Total trial unknowns after elimination.
    pub fn n_total(&self) -> usize {
        self.skeleton_offset() + self.n_skeleton()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn gather(&self, mesh: &Mesh, t: usize) -> LocalGather {
        let mut targets = vec![Vec::new(); LOCAL_TRIAL];
        let mut fixed = [0.0; LOCAL_TRIAL];
        for k in 0..3 {
            targets[LOCAL_U + k].push((self.u_offset() + 3 * t + k, 1.0));
            targets[LOCAL_P + k].push((self.p_offset() + 3 * t + k, 1.0));
        }
        let tri = mesh.triangles[t];
        for (i, &v) in tri.iter().enumerate() {
            match (self.uhat_index[v], self.essential[v]) {
                (Some(idx), _) => {
                    for k in 0..3 {
                        targets[LOCAL_UHAT + 3 * i + k].push((self.uhat_offset() + idx + k, 1.0));
                    }
                }
                (None, Some(data)) => {
                    fixed[LOCAL_UHAT + 3 * i..LOCAL_UHAT + 3 * i + 3].copy_from_slice(&data.as_array());
                }
                (None, None) => unreachable!("vertex {v} has neither unknowns nor data"),
            }
        }
        for (i, &(e, _)) in mesh.elem_edges[t].iter().enumerate() {
            for k in 0..2 {
                targets[LOCAL_PHAT_EDGE + 2 * i + k].push((self.qhat_offset() + 2 * e + k, 1.0));
            }
        }
        for (i, &v) in tri.iter().enumerate() {
            let slot = &mut targets[LOCAL_JUMP + i];
            match self.jump_slots[t][i] {
                JumpSlot::Free(idx) => slot.push((self.qhat_offset() + idx, 1.0)),
                JumpSlot::Eliminated => {
                    for &s in &mesh.vertex_patches[v] {
                        if s == t {
                            continue;
                        }
                        let li = mesh.triangles[s].iter().position(|&w| w == v).unwrap();
                        if let JumpSlot::Free(idx) = self.jump_slots[s][li] {
                            slot.push((self.qhat_offset() + idx, -1.0));
                        }
                    }
                }
            }
        }
        LocalGather { targets, fixed }
    }

    /// `(z, ∇z)` at vertex `v`: essential data or the unknowns in `x`.
    pub fn vertex_data(&self, v: usize, x: &[f64]) -> VertexData {
        match (self.uhat_index[v], self.essential[v]) {
            (Some(i), _) => {
                let o = self.uhat_offset() + i;
                VertexData {
                    value: x[o],
                    grad: [x[o + 1], x[o + 2]],
                }
            }
            (None, Some(d)) => d,
            (None, None) => VertexData::ZERO,
        }
    }

    /// Local trial coefficients of element `t` from a global vector.
    pub fn local_values(&self, mesh: &Mesh, t: usize, x: &[f64]) -> [f64; LOCAL_TRIAL] {
        let g = self.gather(mesh, t);
        let mut w = g.fixed;
        for (i, tg) in g.targets.iter().enumerate() {
            w[i] += tg.iter().map(|&(j, c)| c * x[j]).sum::<f64>();
        }
        w
    }
}

/// Oriented frame of local edge `i` (from local vertex `i` to `i + 1`) with
/// the element-outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalEdge {
    pub a: Point,
    pub b: Point,
    pub length: f64,
    pub tangent: Point,
    pub normal: Point,
}

pub fn local_edge(tri: &Triangle, i: usize) -> LocalEdge {
    let a = tri.vertices[i];
    let b = tri.vertices[(i + 1) % 3];
    let length = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let tangent = [(b[0] - a[0]) / length, (b[1] - a[1]) / length];
    LocalEdge {
        a,
        b,
        length,
        tangent,
        normal: [tangent[1], -tangent[0]],
    }
}

/// Barycentric coordinates of the point at parameter `s` on local edge `i`.
pub fn edge_lambda(i: usize, s: f64) -> [f64; 3] {
    let mut l = [0.0; 3];
    l[i] = 1.0 - s;
    l[(i + 1) % 3] = s;
    l
}

/// Cubic Hermite basis `(H00, H10, H01, H11)` on `[0, 1]`.
pub fn hermite(s: f64) -> [f64; 4] {
    let s2 = s * s;
    let s3 = s2 * s;
    [2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2]
}

/// Weights of `(z_a, ∂x z_a, ∂y z_a, z_b, ∂x z_b, ∂y z_b)` in the edge trace
/// `z(s)` and in the normal derivative `n·∇z(s)`, for the edge `a -> b` with
/// unit tangent `t`, normal `n` and length `length`.
pub fn uhat_edge_weights(tangent: Point, normal: Point, length: f64, s: f64) -> ([f64; 6], [f64; 6]) {
    let h = hermite(s);
    let z = [
        h[0],
        h[1] * length * tangent[0],
        h[1] * length * tangent[1],
        h[2],
        h[3] * length * tangent[0],
        h[3] * length * tangent[1],
    ];
    let dn = [
        0.0,
        (1.0 - s) * normal[0],
        (1.0 - s) * normal[1],
        0.0,
        s * normal[0],
        s * normal[1],
    ];
    (z, dn)
}

/// `(z(s), n·∇z(s))` of the `Û` trace on an edge from `a` to `b`, where `n`
/// is the normal `(t₂, -t₁)` of that orientation.
pub fn uhat_edge_values(a: Point, b: Point, za: VertexData, zb: VertexData, s: f64) -> (f64, f64) {
    let length = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let t = [(b[0] - a[0]) / length, (b[1] - a[1]) / length];
    let (wz, wn) = uhat_edge_weights(t, [t[1], -t[0]], length, s);
    let d = [za.value, za.grad[0], za.grad[1], zb.value, zb.grad[0], zb.grad[1]];
    (
        wz.iter().zip(&d).map(|(w, x)| w * x).sum(),
        wn.iter().zip(&d).map(|(w, x)| w * x).sum(),
    )
}


/// Boundary quantities of a tensor test function on one local edge:
/// effective shear `n·Div Q + ∂t(t·Qn)` and `n·Qn` at the quadrature points,
/// and `t·Qn` at both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorEdgeTrace {
    pub shear: Vec<f64>,
    pub normal_moment: Vec<f64>,
    pub twist_start: f64,
    pub twist_end: f64,
}

/// Tensor `Σ coeffs[c·n + i] φ_i e_c` from scalar jets `φ_i` (`n` members).
pub fn sym_jet(jets: &[Jet], coeffs: &[f64]) -> SymJet {
    let n = jets.len();
    let mut q = SymJet::default();
    for c in 0..3 {
        for (i, j) in jets.iter().enumerate() {
            let a = coeffs[c * n + i];
            q.val[c] += a * j.val;
            q.grad[c][0] += a * j.grad[0];
            q.grad[c][1] += a * j.grad[1];
        }
    }
    q
}

fn sym_form(q: &[f64; 3], a: Point, b: Point) -> f64 {
    a[0] * b[0] * q[0] + a[1] * b[1] * q[1] + (a[0] * b[1] + a[1] * b[0]) * q[2]
}

pub fn tensor_edge_trace(edge: &LocalEdge, rule: &EdgeRule, at: &dyn Fn(f64) -> SymJet) -> TensorEdgeTrace {
    let samples: Vec<SymJet> = rule.points.iter().map(|&s| at(s)).collect();
    tensor_edge_trace_from_samples(edge, &samples, &at(0.0).val, &at(1.0).val)
}

/// Like [`tensor_edge_trace`] from values at the rule points and the endpoints.
pub fn tensor_edge_trace_from_samples(
    edge: &LocalEdge,
    samples: &[SymJet],
    start: &[f64; 3],
    end: &[f64; 3],
) -> TensorEdgeTrace {
    let (t, n) = (edge.tangent, edge.normal);
    let mut shear = Vec::with_capacity(samples.len());
    let mut normal_moment = Vec::with_capacity(samples.len());
    for q in samples {
        let div = [q.grad[0][0] + q.grad[2][1], q.grad[2][0] + q.grad[1][1]];
        let dt = |c: usize| q.grad[c][0] * t[0] + q.grad[c][1] * t[1];
        let dt_twist = sym_form(&[dt(0), dt(1), dt(2)], t, n);
        shear.push(n[0] * div[0] + n[1] * div[1] + dt_twist);
        normal_moment.push(sym_form(&q.val, n, n));
    }
    TensorEdgeTrace {
        shear,
        normal_moment,
        twist_start: sym_form(start, t, n),
        twist_end: sym_form(end, t, n),
    }
}

/// Coefficients of the linear functional `û ↦ ⟨û, Q⟩_∂T` on the nine local
/// `û` DOFs.
pub fn uhat_pairing_row(tri: &Triangle, rule: &EdgeRule, traces: &[TensorEdgeTrace; 3]) -> [f64; 9] {
    let mut row = [0.0; 9];
    for (i, tr) in traces.iter().enumerate() {
        let e = local_edge(tri, i);
        let j = (i + 1) % 3;
        let slots = [3 * i, 3 * i + 1, 3 * i + 2, 3 * j, 3 * j + 1, 3 * j + 2];
        for (q, (&s, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
            let (wz, wn) = uhat_edge_weights(e.tangent, e.normal, e.length, s);
            for k in 0..6 {
                row[slots[k]] += w * e.length * (wz[k] * tr.shear[q] - wn[k] * tr.normal_moment[q]);
            }
        }
    }
    for i in 0..3 {
        row[3 * i] -= traces[(i + 2) % 3].twist_end - traces[i].twist_start;
    }
    row
}

/// `Σ_E [∫_E z (n·Div Q + ∂t(t·Qn)) - ∫_E ∂n z (n·Qn)] - Σ_x z(x) jump_T(Q)(x)`
/// for `û` given by the local vertex data (vertex-major `(z, ∂x z, ∂y z)`).
pub fn pair_uhat_with_test(
    tri: &Triangle,
    rule: &EdgeRule,
    traces: &[TensorEdgeTrace; 3],
    uhat: &[f64; 9],
) -> f64 {
    uhat_pairing_row(tri, rule, traces).iter().zip(uhat).map(|(a, b)| a * b).sum()
}

/// Boundary quantities of a scalar test function on one local edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarEdgeTrace {
    pub value: Vec<f64>,
    pub normal_derivative: Vec<f64>,
    pub start: f64,
}

pub fn scalar_edge_trace(
    edge: &LocalEdge,
    rule: &EdgeRule,
    at: &dyn Fn(f64) -> (f64, Point),
) -> ScalarEdgeTrace {
    let samples: Vec<(f64, Point)> = rule.points.iter().map(|&s| at(s)).collect();
    scalar_edge_trace_from_samples(edge, &samples, at(0.0).0)
}

pub fn scalar_edge_trace_from_samples(edge: &LocalEdge, samples: &[(f64, Point)], start: f64) -> ScalarEdgeTrace {
    ScalarEdgeTrace {
        value: samples.iter().map(|s| s.0).collect(),
        normal_derivative: samples
            .iter()
            .map(|(_, g)| g[0] * edge.normal[0] + g[1] * edge.normal[1])
            .collect(),
        start,
    }
}

/// Coefficients of `p̂ ↦ ⟨p̂, v⟩_∂T` on the local `p̂` DOFs, ordered
/// `(λ1, λ2)` per local edge, then the three jumps. `signs` relate the local
/// edge orientation to the global one.
pub fn phat_pairing_row(
    tri: &Triangle,
    rule: &EdgeRule,
    signs: [f64; 3],
    traces: &[ScalarEdgeTrace; 3],
) -> [f64; 9] {
    let mut row = [0.0; 9];
    for (i, tr) in traces.iter().enumerate() {
        let len = local_edge(tri, i).length;
        let int_v: f64 = rule.weights.iter().zip(&tr.value).map(|(w, v)| w * v).sum::<f64>() * len;
        let int_dn: f64 = rule
            .weights
            .iter()
            .zip(&tr.normal_derivative)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            * len;
        row[2 * i] = -int_dn;
        row[2 * i + 1] = signs[i] * int_v;
        row[6 + i] = -tr.start;
    }
    row
}

/// `Σ_E [σ λ2_E ∫_E v - λ1_E ∫_E ∂n v] - Σ_x j_{T,x} v(x)`.
pub fn pair_phat_with_test(
    tri: &Triangle,
    rule: &EdgeRule,
    signs: [f64; 3],
    traces: &[ScalarEdgeTrace; 3],
    phat: &[f64; 9],
) -> f64 {
    phat_pairing_row(tri, rule, signs, traces).iter().zip(phat).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate, DomainId};
    use crate::polyquad::edge_rule;

    use crate::polyquad::{tri_rule, ScalarBasis};
    use proptest::prelude::*;

    fn constant_tensor(q: [f64; 3]) -> impl Fn(f64) -> SymJet {
        move |_| SymJet {
            val: q,
            grad: [[0.0; 2]; 3],
        }
    }

    fn quadratic_data(p: Point) -> VertexData {
        VertexData {
            value: p[0] * p[0],
            grad: [2.0 * p[0], 0.0],
        }
    }

    #[test]
    fn dimensions_on_small_meshes() {
        let m = generate(DomainId::UnitSquare(1));
        let d = build_dof_map(&m, None).unwrap();
        assert_eq!(d.n_uhat, 3);
        assert_eq!(d.n_qhat, 27);
        for m in [
            generate(DomainId::UnitSquare(2)).refine_red(),
            generate(DomainId::ChannelStep),
        ] {
            let d = build_dof_map(&m, None).unwrap();
            let n0 = m.n_interior_vertices();
            assert_eq!(d.n_uhat, 3 * n0);
            assert_eq!(d.n_qhat, 2 * m.n_edges() + 3 * m.n_triangles() - n0);
        }
    }

    #[test]
    fn homogeneous_boundary_data_is_zero() {
        let m = generate(DomainId::UnitSquare(2));
        let d = build_dof_map(&m, None).unwrap();
        for v in 0..m.n_vertices() {
            assert_eq!(d.essential[v].is_some(), m.boundary_vertex[v]);
            if let Some(data) = d.essential[v] {
                assert_eq!(data, VertexData::ZERO);
            }
        }
    }

    #[test]
    fn incompatible_corner_data_is_rejected() {
        let m = generate(DomainId::UnitSquare(1));
        let bc = |_p: Point, seg: Point| VertexData {
            value: 0.0,
            grad: [0.0, if (seg[1] - 1.0).abs() < 1e-12 { 1.0 } else { 0.0 }],
        };
        assert!(matches!(
            build_dof_map(&m, Some(&bc)),
            Err(Error::DataCompatibility { .. })
        ));
    }

    #[test]
    fn eliminated_jumps_sum_to_zero() {
        let m = generate(DomainId::UnitSquare(2)).refine_red();
        let d = build_dof_map(&m, None).unwrap();
        let x: Vec<f64> = (0..d.n_total()).map(|i| ((i * 7919) % 113) as f64 / 17.0 - 3.0).collect();
        let mut sums = vec![0.0; m.n_vertices()];
        for t in 0..m.n_triangles() {
            let w = d.local_values(&m, t, &x);
            for (i, &v) in m.triangles[t].iter().enumerate() {
                sums[v] += w[LOCAL_JUMP + i];
            }
        }
        for v in 0..m.n_vertices() {
            if !m.boundary_vertex[v] {
                assert!(sums[v].abs() < 1e-14, "vertex {v}: {}", sums[v]);
            }
        }
    }

    #[test]
    fn boundary_quadratic_round_trip() {
        let q = |p: Point| 1.0 + 2.0 * p[0] - p[1] + 0.5 * p[0] * p[0] + p[0] * p[1] - 3.0 * p[1] * p[1];
        let qg = |p: Point| [2.0 + p[0] + p[1], -1.0 + p[0] - 6.0 * p[1]];
        let bc = move |p: Point, _seg: Point| VertexData {
            value: q(p),
            grad: qg(p),
        };
        for m in [generate(DomainId::ChannelStep), generate(DomainId::UnitSquare(3))] {
            let d = build_dof_map(&m, Some(&bc)).unwrap();
            let x = vec![0.0; d.n_total()];
            for e in (0..m.n_edges()).filter(|&e| m.boundary_edge[e]) {
                let f = m.edge_frame(e);
                let [va, vb] = m.edges[e];
                for s in [0.0, 0.21, 0.5, 0.9, 1.0] {
                    let p = [f.a[0] + s * (f.b[0] - f.a[0]), f.a[1] + s * (f.b[1] - f.a[1])];
                    let (z, dn) = uhat_edge_values(f.a, f.b, d.vertex_data(va, &x), d.vertex_data(vb, &x), s);
                    let g = qg(p);
                    assert!((z - q(p)).abs() < 1e-12);
                    assert!((dn - (g[0] * f.normal[0] + g[1] * f.normal[1])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hermite_edge_trace() {
        let (a, b) = ([0.0, 0.0], [1.0, 0.5]);
        assert_eq!(uhat_edge_values(a, b, VertexData::ZERO, VertexData::ZERO, 0.3), (0.0, 0.0));
        let one = VertexData {
            value: 1.0,
            grad: [0.0, 0.0],
        };
        let (z, _) = uhat_edge_values(a, b, one, one, 0.5);
        assert!((z - 1.0).abs() < 1e-15);
        // z = x² has a quadratic edge trace and a linear normal derivative.
        for (a, b) in [([0.2f64, -0.3], [1.1f64, 0.4]), ([0.5, 1.0], [-0.5, 0.0])] {
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let t = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
            let n = [t[1], -t[0]];
            for s in [0.0, 0.13, 0.5, 0.77, 1.0] {
                let p = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                let (z, dn) = uhat_edge_values(a, b, quadratic_data(a), quadratic_data(b), s);
                assert!((z - p[0] * p[0]).abs() < 1e-14);
                assert!((dn - 2.0 * p[0] * n[0]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn x_squared_against_constant_e11() {
        let tri = Triangle::reference();
        let rule = edge_rule(6).unwrap();
        let traces = [0, 1, 2].map(|i| tensor_edge_trace(&local_edge(&tri, i), &rule, &constant_tensor([1.0, 0.0, 0.0])));
        let mut uhat = [0.0; 9];
        for i in 0..3 {
            let d = quadratic_data(tri.vertices[i]).as_array();
            uhat[3 * i..3 * i + 3].copy_from_slice(&d);
        }
        let p = pair_uhat_with_test(&tri, &rule, &traces, &uhat);
        assert!((p + 1.0).abs() < 1e-14, "{p}");
        let p0 = pair_uhat_with_test(&tri, &rule, &traces, &[0.0; 9]);
        assert_eq!(p0, 0.0);
    }

    #[test]
    fn phat_pairing_examples() {
        let tri = Triangle::new([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]).unwrap();
        let rule = edge_rule(6).unwrap();
        let signs = [1.0, -1.0, 1.0];
        let trace_of = |f: &dyn Fn(Point) -> (f64, Point)| {
            [0, 1, 2].map(|i| {
                let e = local_edge(&tri, i);
                scalar_edge_trace(&e, &rule, &|s| f(tri.point(edge_lambda(i, s))))
            })
        };
        let one = trace_of(&|_| (1.0, [0.0, 0.0]));
        let mut phat = [0.0; 9];
        phat[0] = 1.0;
        assert_eq!(pair_phat_with_test(&tri, &rule, signs, &one, &phat), 0.0);
        // v = y has ∂n v = -1 on the bottom edge (local edge 0, length 2).
        let y = trace_of(&|p| (p[1], [0.0, 1.0]));
        let val = pair_phat_with_test(&tri, &rule, signs, &y, &phat);
        assert!((val - 2.0).abs() < 1e-14, "{val}");
        let mut jump = [0.0; 9];
        jump[6] = 1.0;
        assert_eq!(pair_phat_with_test(&tri, &rule, signs, &one, &jump), -1.0);
    }

    fn triangle_from(p: [f64; 6]) -> Option<Triangle> {
        let t = Triangle::new([[p[0], p[1]], [p[2], p[3]], [p[4], p[5]]]).ok()?;
        let h = (0..3)
            .map(|i| local_edge(&t, i).length)
            .fold(0.0, f64::max);
        (t.area > 0.05 * h * h).then_some(t)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn boundary_pairing_matches_volume_form(
            verts in prop::array::uniform6(-2.0f64..2.0),
            zc in prop::array::uniform6(-1.0f64..1.0),
            qc in prop::collection::vec(-1.0f64..1.0, 45),
        ) {
            let Some(tri) = triangle_from(verts) else { return Ok(()) };
            let z = |p: Point| {
                zc[0] + zc[1] * p[0] + zc[2] * p[1] + zc[3] * p[0] * p[0]
                    + zc[4] * p[0] * p[1] + zc[5] * p[1] * p[1]
            };
            let zgrad = |p: Point| [
                zc[1] + 2.0 * zc[3] * p[0] + zc[4] * p[1],
                zc[2] + zc[4] * p[0] + 2.0 * zc[5] * p[1],
            ];
            let zhess = [2.0 * zc[3], 2.0 * zc[5], zc[4]];
            let basis = ScalarBasis::new(4).unwrap();

            let (lambdas, points, weights) = tri.map_rule(&tri_rule(10).unwrap());
            let mut volume = 0.0;
            let mut scale = 0.0;
            for ((l, p), w) in lambdas.iter().zip(&points).zip(&weights) {
                let jets = basis.eval(&tri, *l);
                let mut dd = 0.0;
                let mut frob = 0.0;
                for (i, j) in jets.iter().enumerate() {
                    dd += qc[i] * j.hess[0] + qc[15 + i] * j.hess[1] + 2.0 * qc[30 + i] * j.hess[2];
                    frob += zhess[0] * qc[i] * j.val + zhess[1] * qc[15 + i] * j.val
                        + 2.0 * zhess[2] * qc[30 + i] * j.val;
                }
                volume += w * (z(*p) * dd - frob);
                scale += w * ((z(*p) * dd).abs() + frob.abs());
            }

            let rule = edge_rule(6).unwrap();
            let traces = [0, 1, 2].map(|i| {
                tensor_edge_trace(&local_edge(&tri, i), &rule, &|s| {
                    sym_jet(&basis.eval(&tri, edge_lambda(i, s)), &qc)
                })
            });
            let mut uhat = [0.0; 9];
            for i in 0..3 {
                let p = tri.vertices[i];
                let g = zgrad(p);
                uhat[3 * i..3 * i + 3].copy_from_slice(&[z(p), g[0], g[1]]);
            }
            let boundary = pair_uhat_with_test(&tri, &rule, &traces, &uhat);
            prop_assert!((boundary - volume).abs() <= 1e-10 * scale.max(1e-300),
                "boundary {boundary} volume {volume} scale {scale}");
        }
    }
}
