//! Bernstein bases on triangles and quadrature rules.
//!
//! Basis functions are evaluated in barycentric coordinates; physical
//! derivatives follow from the constant barycentric gradients of the
//! affine element map.

use crate::error::{Error, Result};
use crate::mesh::Point;

/// Quadrature rule on the reference triangle `{x, y >= 0, x + y <= 1}` or
/// on the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule<P> {
    pub points: Vec<P>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

pub type TriRule = QuadRule<Point>;
pub type EdgeRule = QuadRule<f64>;

pub const MAX_TRI_EXACTNESS: usize = 12;
pub const MAX_EDGE_POINTS: usize = 10;
/// Default volume rule exactness used for assembly and error integrals.
pub const DEFAULT_TRI_EXACTNESS: usize = 10;
pub const DEFAULT_EDGE_POINTS: usize = 6;

/// Gauss-Legendre rule with `n` points on `[0, 1]`, exact to degree `2n - 1`.
pub fn edge_rule(n: usize) -> Result<EdgeRule> {
    if n == 0 || n > MAX_EDGE_POINTS {
        return Err(Error::UnsupportedDegree(format!(
            "edge rule with {n} points (supported: 1..={MAX_EDGE_POINTS})"
        )));
    }
    let (x, w) = gauss_legendre(n);
    Ok(QuadRule {
        points: x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        weights: w.iter().map(|&w| 0.5 * w).collect(),
        exactness: 2 * n - 1,
    })
}

/// Collapsed (Duffy) product of Gauss-Legendre rules on the reference
/// triangle, exact for total degree `exactness`.
pub fn tri_rule(exactness: usize) -> Result<TriRule> {
    if exactness > MAX_TRI_EXACTNESS {
        return Err(Error::UnsupportedDegree(format!(
            "triangle rule of exactness {exactness} (supported: <= {MAX_TRI_EXACTNESS})"
        )));
    }
    // The Duffy Jacobian adds one degree in the collapsed direction.
    let n = (exactness + 2).div_ceil(2).max(1);
    let (x, w) = gauss_legendre(n);
    let s: Vec<f64> = x.iter().map(|&t| 0.5 * (t + 1.0)).collect();
    let ws: Vec<f64> = w.iter().map(|&w| 0.5 * w).collect();
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            points.push([s[i], (1.0 - s[i]) * s[j]]);
            weights.push(ws[i] * ws[j] * (1.0 - s[i]));
        }
    }
    Ok(QuadRule {
        points,
        weights,
        exactness,
    })
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on the Legendre
/// three-term recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            } else {
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            z = 0.0;
            dp = 1.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Affine triangle with its barycentric gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub vertices: [Point; 3],
    pub area: f64,
    pub grad_lambda: [Point; 3],
}

impl Triangle {
    pub fn new(vertices: [Point; 3]) -> Result<Self> {
        let [a, b, c] = vertices;
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        if !(det > 0.0) {
            return Err(Error::Geometry { area: 0.5 * det });
        }
        let grad_lambda = [
            [(b[1] - c[1]) / det, (c[0] - b[0]) / det],
            [(c[1] - a[1]) / det, (a[0] - c[0]) / det],
            [(a[1] - b[1]) / det, (b[0] - a[0]) / det],
        ];
        Ok(Triangle {
            vertices,
            area: 0.5 * det,
            grad_lambda,
        })
    }

    pub fn reference() -> Self {
        Triangle::new([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    pub fn point(&self, lambda: [f64; 3]) -> Point {
        let v = &self.vertices;
        [
            lambda[0] * v[0][0] + lambda[1] * v[1][0] + lambda[2] * v[2][0],
            lambda[0] * v[0][1] + lambda[1] * v[1][1] + lambda[2] * v[2][1],
        ]
    }

    pub fn barycentric(&self, p: Point) -> [f64; 3] {
        let v0 = self.vertices[0];
        let l1 = self.grad_lambda[1][0] * (p[0] - v0[0]) + self.grad_lambda[1][1] * (p[1] - v0[1]);
        let l2 = self.grad_lambda[2][0] * (p[0] - v0[0]) + self.grad_lambda[2][1] * (p[1] - v0[1]);
        [1.0 - l1 - l2, l1, l2]
    }

    pub fn centroid(&self) -> Point {
        self.point([1.0 / 3.0; 3])
    }

    /// Volume quadrature mapped onto this element.
    pub fn map_rule(&self, rule: &TriRule) -> (Vec<[f64; 3]>, Vec<Point>, Vec<f64>) {
        let lambdas: Vec<[f64; 3]> = rule
            .points
            .iter()
            .map(|p| [1.0 - p[0] - p[1], p[0], p[1]])
            .collect();
        let points = lambdas.iter().map(|&l| self.point(l)).collect();
        let weights = rule.weights.iter().map(|w| w * 2.0 * self.area).collect();
        (lambdas, points, weights)
    }
}

/// Value, gradient and Hessian `(xx, yy, xy)` of one scalar function.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub val: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

/// Bernstein basis of degree `k` in barycentric coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBasis {
    pub degree: usize,
    exponents: Vec<[u32; 3]>,
    coefficients: Vec<f64>,
}

/// Barycentric derivatives of all members at one point: values, first
/// derivatives `d/dλ_a` and the symmetric second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaJets {
    pub val: Vec<f64>,
    pub d1: Vec<[f64; 3]>,
    pub d2: Vec<[[f64; 3]; 3]>,
}

pub fn poly_dim(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `x^e` and its first two derivatives.
fn pow_derivs(x: f64, e: u32) -> (f64, f64, f64) {
    let p = |m: u32| if m == 0 { 1.0 } else { x.powi(m as i32) };
    let v = p(e);
    let d1 = if e >= 1 { e as f64 * p(e - 1) } else { 0.0 };
    let d2 = if e >= 2 {
        (e * (e - 1)) as f64 * p(e - 2)
    } else {
        0.0
    };
    (v, d1, d2)
}

impl ScalarBasis {
    pub fn new(degree: usize) -> Result<Self> {
        if degree > 4 {
            return Err(Error::UnsupportedDegree(format!(
                "polynomial degree {degree} (supported: <= 4)"
            )));
        }
        let k = degree as u32;
        let mut exponents = Vec::with_capacity(poly_dim(degree));
        for i in (0..=k).rev() {
            for j in (0..=(k - i)).rev() {
                exponents.push([i, j, k - i - j]);
            }
        }
        let coefficients = exponents
            .iter()
            .map(|e| factorial(k) / (factorial(e[0]) * factorial(e[1]) * factorial(e[2])))
            .collect();
        Ok(ScalarBasis {
            degree,
            exponents,
            coefficients,
        })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[[u32; 3]] {
        &self.exponents
    }

    pub fn eval_lambda(&self, lambda: [f64; 3]) -> LambdaJets {
        let n = self.dim();
        let mut out = LambdaJets {
            val: Vec::with_capacity(n),
            d1: Vec::with_capacity(n),
            d2: Vec::with_capacity(n),
        };
        for (e, &c) in self.exponents.iter().zip(&self.coefficients) {
            let p: Vec<(f64, f64, f64)> = (0..3).map(|a| pow_derivs(lambda[a], e[a])).collect();
            out.val.push(c * p[0].0 * p[1].0 * p[2].0);
            let mut d1 = [0.0; 3];
            let mut d2 = [[0.0; 3]; 3];
            for a in 0..3 {
                let mut g = c * p[a].1;
                for b in 0..3 {
                    if b != a {
                        g *= p[b].0;
                    }
                }
                d1[a] = g;
                for b in 0..3 {
                    let mut h = c;
                    for m in 0..3 {
                        let order = (m == a) as u8 + (m == b) as u8;
                        h *= match order {
                            0 => p[m].0,
                            1 => p[m].1,
                            _ => p[m].2,
                        };
                    }
                    d2[a][b] = h;
                }
            }
            out.d1.push(d1);
            out.d2.push(d2);
        }
        out
    }

    /// Maps barycentric derivatives to physical jets on `tri`.
    pub fn map(&self, lj: &LambdaJets, tri: &Triangle) -> Vec<Jet> {
        let g = &tri.grad_lambda;
        (0..lj.val.len())
            .map(|i| {
                let mut jet = Jet {
                    val: lj.val[i],
                    ..Jet::default()
                };
                for a in 0..3 {
                    jet.grad[0] += lj.d1[i][a] * g[a][0];
                    jet.grad[1] += lj.d1[i][a] * g[a][1];
                    for b in 0..3 {
                        let d = lj.d2[i][a][b];
                        jet.hess[0] += d * g[a][0] * g[b][0];
                        jet.hess[1] += d * g[a][1] * g[b][1];
                        jet.hess[2] += d * g[a][0] * g[b][1];
                    }
                }
                jet
            })
            .collect()
    }

    pub fn eval(&self, tri: &Triangle, lambda: [f64; 3]) -> Vec<Jet> {
        self.map(&self.eval_lambda(lambda), tri)
    }
}

/// Physical basis jets at every point of a mapped rule.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub jets: Vec<Vec<Jet>>,
}

pub fn basis_tables(k: usize, rule: &TriRule, tri: &Triangle) -> Result<BasisTable> {
    let basis = ScalarBasis::new(k)?;
    if !(tri.area > 0.0) {
        return Err(Error::Geometry { area: tri.area });
    }
    let (lambdas, points, weights) = tri.map_rule(rule);
    let jets = lambdas.iter().map(|&l| basis.eval(tri, l)).collect();
    Ok(BasisTable {
        points,
        weights,
        jets,
    })
}

/// Symmetric unit tensors `e11`, `e22`, `e12` and their Frobenius norms squared.
pub const SYM_UNIT: [[[f64; 2]; 2]; 3] = [
    [[1.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 1.0]],
    [[0.0, 1.0], [1.0, 0.0]],
];
pub const SYM_FROBENIUS: [f64; 3] = [1.0, 1.0, 2.0];

/// `a . e_c b` for the symmetric unit tensor `e_c`.
pub fn sym_bilinear(c: usize, a: Point, b: Point) -> f64 {
    match c {
        0 => a[0] * b[0],
        1 => a[1] * b[1],
        _ => a[0] * b[1] + a[1] * b[0],
    }
}

/// Tensor-valued basis `phi_i * e_c`, indexed `c * dim + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensorBasis {
    pub scalar: ScalarBasis,
}

impl SymTensorBasis {
    pub fn new(degree: usize) -> Result<Self> {
        Ok(SymTensorBasis {
            scalar: ScalarBasis::new(degree)?,
        })
    }

    pub fn dim(&self) -> usize {
        3 * self.scalar.dim()
    }

    /// `(component, scalar index)` of member `m`.
    pub fn split(&self, m: usize) -> (usize, usize) {
        (m / self.scalar.dim(), m % self.scalar.dim())
    }

    /// Pointwise value of member `m` given the scalar jets.
    pub fn value(&self, m: usize, jets: &[Jet]) -> [[f64; 2]; 2] {
        let (c, i) = self.split(m);
        let v = jets[i].val;
        let e = SYM_UNIT[c];
        [[v * e[0][0], v * e[0][1]], [v * e[1][0], v * e[1][1]]]
    }
}

/// `div Div (phi e_c)`.
pub fn div_div(c: usize, jet: &Jet) -> f64 {
    match c {
        0 => jet.hess[0],
        1 => jet.hess[1],
        _ => 2.0 * jet.hess[2],
    }
}

/// Row-wise divergence `Div (phi e_c)`.
pub fn row_div(c: usize, jet: &Jet) -> Point {
    match c {
        0 => [jet.grad[0], 0.0],
        1 => [0.0, jet.grad[1]],
        _ => [jet.grad[1], jet.grad[0]],
    }
}

/// Frobenius product of a Hessian `(xx, yy, xy)` with `e_c`.
pub fn hess_dot_unit(c: usize, hess: &[f64; 3]) -> f64 {
    match c {
        0 => hess[0],
        1 => hess[1],
        _ => 2.0 * hess[2],
    }
}

/// Symmetric tensor `(Qxx, Qyy, Qxy)` with its component gradients.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SymJet {
    pub val: [f64; 3],
    pub grad: [[f64; 2]; 3],
}

/// Monomials `ξ^a η^b` of total degree `<= k` in the local coordinates
/// `(ξ, η) = (p - center) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMonomials {
    pub degree: usize,
    exponents: Vec<[u32; 2]>,
}

impl ScaledMonomials {
    pub fn new(degree: usize) -> Result<Self> {
        if degree > 4 {
            return Err(Error::UnsupportedDegree(format!(
                "polynomial degree {degree} (supported: <= 4)"
            )));
        }
        let k = degree as u32;
        let exponents = (0..=k).flat_map(|d| (0..=d).rev().map(move |a| [a, d - a])).collect();
        Ok(ScaledMonomials { degree, exponents })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[[u32; 2]] {
        &self.exponents
    }

    pub fn index_of(&self, a: u32, b: u32) -> Option<usize> {
        self.exponents.iter().position(|&e| e == [a, b])
    }

    /// Physical jets of all members at `p`.
    pub fn eval(&self, center: Point, scale: f64, p: Point) -> Vec<Jet> {
        let xi = (p[0] - center[0]) / scale;
        let eta = (p[1] - center[1]) / scale;
        let h2 = scale * scale;
        self.exponents
            .iter()
            .map(|&[a, b]| {
                let (xa, dxa, ddxa) = pow_derivs(xi, a);
                let (yb, dyb, ddyb) = pow_derivs(eta, b);
                Jet {
                    val: xa * yb,
                    grad: [dxa * yb / scale, xa * dyb / scale],
                    hess: [ddxa * yb / h2, xa * ddyb / h2, dxa * dyb / h2],
                }
            })
            .collect()
    }
}

/// Element of a symmetric-tensor basis as a combination
/// `Σ coef · m_k e_c` over `(c, k, coef)` of scaled monomials `m_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorMember {
    pub terms: Vec<(usize, usize, f64)>,
}

/// Value, component gradients and `div Div` of a tensor member.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TensorJet {
    pub q: SymJet,
    pub div_div: f64,
}

impl TensorMember {
    pub fn eval(&self, jets: &[Jet]) -> TensorJet {
        let mut out = TensorJet::default();
        for &(c, k, coef) in &self.terms {
            let j = &jets[k];
            out.q.val[c] += coef * j.val;
            out.q.grad[c][0] += coef * j.grad[0];
            out.q.grad[c][1] += coef * j.grad[1];
            out.div_div += coef * div_div(c, j);
        }
        out
    }
}

/// Basis of `ℙ^{k,s}` adapted to `div Div`: every member either lies in its
/// kernel or is the single representative mapped onto one monomial of
/// degree `k - 2`. The mass and `div Div` parts of the test norm then scale
/// separately, which keeps element Gram matrices well conditioned.
pub fn div_div_adapted_basis(monomials: &ScaledMonomials) -> Vec<TensorMember> {
    let k = monomials.degree as u32;
    let mut kernel = Vec::new();
    let mut groups: Vec<([u32; 2], Vec<(usize, usize, f64)>)> = Vec::new();
    for (idx, &[a, b]) in monomials.exponents().iter().enumerate() {
        for c in 0..3 {
            let image = match c {
                0 if a >= 2 => Some(([a - 2, b], (a * (a - 1)) as f64)),
                1 if b >= 2 => Some(([a, b - 2], (b * (b - 1)) as f64)),
                2 if a >= 1 && b >= 1 => Some(([a - 1, b - 1], (2 * a * b) as f64)),
                _ => None,
            };
            match image {
                None => kernel.push(TensorMember {
                    terms: vec![(c, idx, 1.0)],
                }),
                Some((target, coef)) => match groups.iter_mut().find(|g| g.0 == target) {
                    Some(g) => g.1.push((c, idx, coef)),
                    None => groups.push((target, vec![(c, idx, coef)])),
                },
            }
        }
    }
    debug_assert!(groups.iter().all(|g| g.0[0] + g.0[1] + 2 <= k));
    let mut range = Vec::new();
    for (_, members) in &groups {
        let (rc, ri, rcoef) = members[0];
        range.push(TensorMember {
            terms: vec![(rc, ri, 1.0)],
        });
        for &(c, idx, coef) in &members[1..] {
            kernel.push(TensorMember {
                terms: vec![(c, idx, 1.0), (rc, ri, -coef / rcoef)],
            });
        }
    }
    kernel.extend(range);
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫_ref x^a y^b = a! b! / (a + b + 2)!` (barycentric factorial formula).
    fn monomial_exact(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn triangle_rules_integrate_monomials() {
        for deg in 0..=MAX_TRI_EXACTNESS {
            let rule = tri_rule(deg).unwrap();
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - 0.5).abs() < 1e-15);
            for a in 0..=deg as u32 {
                for b in 0..=(deg as u32 - a) {
                    let q: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                        .sum();
                    let exact = monomial_exact(a, b);
                    assert!(
                        ((q - exact) / exact).abs() <= 1e-13,
                        "deg {deg} x^{a} y^{b}: {q} vs {exact}"
                    );
                }
            }
        }
        assert!(matches!(tri_rule(13), Err(Error::UnsupportedDegree(_))));
    }

    #[test]
    fn simple_triangle_integrals() {
        let rule = tri_rule(10).unwrap();
        let int = |f: &dyn Fn(Point) -> f64| -> f64 {
            rule.points.iter().zip(&rule.weights).map(|(p, w)| w * f(*p)).sum()
        };
        assert!((int(&|_| 1.0) - 0.5).abs() < 1e-15);
        assert!((int(&|p| p[0]) - 1.0 / 6.0).abs() < 1e-15);
        let bubble = int(&|p| (1.0 - p[0] - p[1]) * p[0] * p[1]);
        assert!((bubble - 0.5 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn edge_rules() {
        let r1 = edge_rule(1).unwrap();
        assert_eq!(r1.points, vec![0.5]);
        assert_eq!(r1.weights, vec![1.0]);
        let r2 = edge_rule(2).unwrap();
        let cube: f64 = r2.points.iter().zip(&r2.weights).map(|(s, w)| w * s.powi(3)).sum();
        assert!((cube - 0.25).abs() < 1e-15);
        for n in 1..=MAX_EDGE_POINTS {
            let r = edge_rule(n).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for p in 0..=(2 * n - 1) as i32 {
                let q: f64 = r.points.iter().zip(&r.weights).map(|(s, w)| w * s.powi(p)).sum();
                assert!((q - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "n={n} p={p}");
            }
        }
        assert!(edge_rule(0).is_err());
        assert!(edge_rule(11).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(ScalarBasis::new(3).unwrap().dim(), 10);
        assert_eq!(ScalarBasis::new(4).unwrap().dim(), 15);
        assert_eq!(SymTensorBasis::new(4).unwrap().dim(), 45);
        assert!(ScalarBasis::new(5).is_err());
    }

    #[test]
    fn partition_of_unity() {
        for k in 0..=4 {
            let b = ScalarBasis::new(k).unwrap();
            for l in [[0.2, 0.3, 0.5], [1.0, 0.0, 0.0], [0.1, 0.7, 0.2]] {
                let s: f64 = b.eval_lambda(l).val.iter().sum();
                assert!((s - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let tri = Triangle::new([[0.3, -0.2], [1.4, 0.1], [0.5, 0.9]]).unwrap();
        let step = 1e-5;
        for k in 0..=4 {
            let b = ScalarBasis::new(k).unwrap();
            for l in [[0.2, 0.3, 0.5], [0.6, 0.25, 0.15]] {
                let p = tri.point(l);
                let jets = b.eval(&tri, l);
                let at = |dx: f64, dy: f64| b.eval(&tri, tri.barycentric([p[0] + dx, p[1] + dy]));
                let (xp, xm, yp, ym) = (at(step, 0.0), at(-step, 0.0), at(0.0, step), at(0.0, -step));
                for i in 0..b.dim() {
                    let gx = (xp[i].val - xm[i].val) / (2.0 * step);
                    let gy = (yp[i].val - ym[i].val) / (2.0 * step);
                    assert!((gx - jets[i].grad[0]).abs() < 1e-6);
                    assert!((gy - jets[i].grad[1]).abs() < 1e-6);
                    let hxx = (xp[i].grad[0] - xm[i].grad[0]) / (2.0 * step);
                    let hyy = (yp[i].grad[1] - ym[i].grad[1]) / (2.0 * step);
                    let hxy = (yp[i].grad[0] - ym[i].grad[0]) / (2.0 * step);
                    assert!((hxx - jets[i].hess[0]).abs() < 1e-6);
                    assert!((hyy - jets[i].hess[1]).abs() < 1e-6);
                    assert!((hxy - jets[i].hess[2]).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn reference_x_squared_hessian() {
        // On the reference element x = λ1, so x^2 is the Bernstein member λ1^2.
        let b = ScalarBasis::new(2).unwrap();
        let idx = b.exponents().iter().position(|e| *e == [0, 2, 0]).unwrap();
        let jets = b.eval(&Triangle::reference(), [0.2, 0.5, 0.3]);
        assert_eq!(jets[idx].hess, [2.0, 0.0, 0.0]);
        let c = ScalarBasis::new(0).unwrap().eval(&Triangle::reference(), [0.2, 0.5, 0.3]);
        assert_eq!((c[0].grad, c[0].hess), ([0.0; 2], [0.0; 3]));
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(matches!(
            Triangle::new([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]),
            Err(Error::Geometry { .. })
        ));
    }

    #[test]
    fn tensor_members_are_symmetric() {
        let b = SymTensorBasis::new(4).unwrap();
        let jets = b.scalar.eval(&Triangle::reference(), [0.1, 0.6, 0.3]);
        for m in 0..b.dim() {
            let q = b.value(m, &jets);
            assert_eq!(q[0][1], q[1][0]);
        }
    }
}
