//! Piecewise-linear regularization of the load `rot f`.
//!
//! `P_h' = J_h' + (1 - J_h') B_h'` where `J_h'` is the adjoint of a
//! quasi-interpolation with a biorthogonal dual system `ψ_x` and `B_h'` is
//! the adjoint of the element-bubble correction. `rot f` only ever acts
//! through `⟨rot f, w⟩ = (f, curl w)` with `curl w = (∂y w, -∂x w)`.

use crate::error::Result;
use crate::mesh::{Mesh, Point};
use crate::polyquad::{tri_rule, Triangle, DEFAULT_TRI_EXACTNESS};

/// A discontinuous piecewise-linear field, stored by its three vertex values
/// per element (ordered like the element's vertices).
#[derive(Debug, Clone, PartialEq)]
pub struct P1Field {
    pub coeffs: Vec<[f64; 3]>,
}

impl P1Field {
    pub fn zeros(n_elements: usize) -> Self {
        P1Field {
            coeffs: vec![[0.0; 3]; n_elements],
        }
    }

    pub fn eval(&self, t: usize, lambda: [f64; 3]) -> f64 {
        (0..3).map(|a| self.coeffs[t][a] * lambda[a]).sum()
    }
}

/// Dual functions `ψ_x` of the interior vertices, as element-wise vertex
/// values on the patch of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBasis {
    /// `psi[x]` lists `(element, vertex values)`; empty for boundary vertices.
    pub psi: Vec<Vec<(usize, [f64; 3])>>,
}

/// `ψ_x|T = θ_{x,T} / m_x` with the local dual `θ_{x,T} = (3/|T|)(3λ_x - λ_y - λ_z)`
/// and `m_x` the number of elements around `x`.
pub fn build_dual_basis(mesh: &Mesh) -> Result<DualBasis> {
    let mut psi = vec![Vec::new(); mesh.n_vertices()];
    for (x, patch) in mesh.vertex_patches.iter().enumerate() {
        if mesh.boundary_vertex[x] {
            continue;
        }
        let m = patch.len() as f64;
        for &t in patch {
            let area = Triangle::new(mesh.corners(t))?.area;
            let mut vals = [-3.0 / area / m; 3];
            let a = mesh.triangles[t].iter().position(|&v| v == x).unwrap();
            vals[a] = 9.0 / area / m;
            psi[x].push((t, vals));
        }
    }
    Ok(DualBasis { psi })
}

/// `∫_T λ_a λ_b`.
pub fn p1_mass(area: f64, a: usize, b: usize) -> f64 {
    if a == b {
        area / 6.0
    } else {
        area / 12.0
    }
}

/// `(ψ_x, η_y)` for an interior vertex `x` and any vertex `y`.
pub fn dual_pairing(mesh: &Mesh, dual: &DualBasis, x: usize, y: usize) -> Result<f64> {
    let mut sum = 0.0;
    for &(t, vals) in &dual.psi[x] {
        if let Some(b) = mesh.triangles[t].iter().position(|&v| v == y) {
            let area = Triangle::new(mesh.corners(t))?.area;
            sum += (0..3).map(|a| vals[a] * p1_mass(area, a, b)).sum::<f64>();
        }
    }
    Ok(sum)
}

/// Element bubble `η_b = (60/|T|) λ₁λ₂λ₃` and its gradient.
pub fn bubble(tri: &Triangle, lambda: [f64; 3]) -> (f64, Point) {
    let c = 60.0 / tri.area;
    let [l1, l2, l3] = lambda;
    let g = &tri.grad_lambda;
    let d = [l2 * l3, l1 * l3, l1 * l2];
    (
        c * l1 * l2 * l3,
        [
            c * (d[0] * g[0][0] + d[1] * g[1][0] + d[2] * g[2][0]),
            c * (d[0] * g[0][1] + d[1] * g[1][1] + d[2] * g[2][1]),
        ],
    )
}

fn curl(grad: Point) -> Point {
    [grad[1], -grad[0]]
}

/// Per-element `∫_T f` and `(f, curl η_{b,T})_T`.
fn element_moments(mesh: &Mesh, f: &dyn Fn(Point) -> Point) -> Result<(Vec<Point>, Vec<f64>)> {
    let rule = tri_rule(DEFAULT_TRI_EXACTNESS)?;
    let mut mean = Vec::with_capacity(mesh.n_triangles());
    let mut bub = Vec::with_capacity(mesh.n_triangles());
    for t in 0..mesh.n_triangles() {
        let tri = Triangle::new(mesh.corners(t))?;
        let (lambdas, points, weights) = tri.map_rule(&rule);
        let mut m = [0.0; 2];
        let mut b = 0.0;
        for ((l, p), w) in lambdas.iter().zip(&points).zip(&weights) {
            let fv = f(*p);
            let cb = curl(bubble(&tri, *l).1);
            m[0] += w * fv[0];
            m[1] += w * fv[1];
            b += w * (fv[0] * cb[0] + fv[1] * cb[1]);
        }
        mean.push(m);
        bub.push(b);
    }
    Ok((mean, bub))
}

/// `(f, curl η_x)` for every vertex (zero at boundary vertices).
pub fn hat_functional(mesh: &Mesh, f: &dyn Fn(Point) -> Point) -> Result<Vec<f64>> {
    let (mean, _) = element_moments(mesh, f)?;
    hat_functional_from(mesh, &mean)
}

fn hat_functional_from(mesh: &Mesh, mean: &[Point]) -> Result<Vec<f64>> {
    let mut c = vec![0.0; mesh.n_vertices()];
    for (t, tri_v) in mesh.triangles.iter().enumerate() {
        let tri = Triangle::new(mesh.corners(t))?;
        for (a, &x) in tri_v.iter().enumerate() {
            if !mesh.boundary_vertex[x] {
                let cl = curl(tri.grad_lambda[a]);
                c[x] += mean[t][0] * cl[0] + mean[t][1] * cl[1];
            }
        }
    }
    Ok(c)
}

/// `f̃ = P_h' rot f = Σ_x (f, curl η_x) ψ_x + g - Σ_x (g, η_x) ψ_x` with the
/// piecewise constant `g = Σ_T (f, curl η_{b,T}) χ_T`.
pub fn apply_ph_rot(mesh: &Mesh, dual: &DualBasis, f: &dyn Fn(Point) -> Point) -> Result<P1Field> {
    let (mean, g) = element_moments(mesh, f)?;
    let c = hat_functional_from(mesh, &mean)?;
    let mut g_hat = vec![0.0; mesh.n_vertices()];
    for (t, tri_v) in mesh.triangles.iter().enumerate() {
        let area = Triangle::new(mesh.corners(t))?.area;
        for &x in tri_v {
            g_hat[x] += g[t] * area / 3.0;
        }
    }
    let mut out = P1Field {
        coeffs: g.iter().map(|&gt| [gt; 3]).collect(),
    };
    for (x, terms) in dual.psi.iter().enumerate() {
        let a = c[x] - g_hat[x];
        for &(t, vals) in terms {
            for k in 0..3 {
                out.coeffs[t][k] += a * vals[k];
            }
        }
    }
    Ok(out)
}

/// `∫ f̃ η_x` for every vertex.
pub fn field_against_hats(mesh: &Mesh, field: &P1Field) -> Result<Vec<f64>> {
    let mut out = vec![0.0; mesh.n_vertices()];
    for (t, tri_v) in mesh.triangles.iter().enumerate() {
        let area = Triangle::new(mesh.corners(t))?.area;
        for (b, &y) in tri_v.iter().enumerate() {
            out[y] += (0..3).map(|a| field.coeffs[t][a] * p1_mass(area, a, b)).sum::<f64>();
        }
    }
    Ok(out)
}
