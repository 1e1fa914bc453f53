//! Built-in benchmark problems.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{generate, DomainId, Point};
use crate::tracespace::{build_dof_map, BoundaryFn, VertexData};

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(Point) -> Point + Send + Sync>;
/// Hessian as `(xx, yy, xy)`.
pub type HessianFn = Arc<dyn Fn(Point) -> [f64; 3] + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Smooth,
    Cavity,
    Channel,
    Plate,
}

impl ProblemId {
    pub const ALL: [ProblemId; 4] = [ProblemId::Smooth, ProblemId::Cavity, ProblemId::Channel, ProblemId::Plate];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::Smooth => "smooth",
            ProblemId::Cavity => "cavity",
            ProblemId::Channel => "channel",
            ProblemId::Plate => "plate",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Range(format!("unknown problem '{s}'")))
    }
}

#[derive(Clone)]
pub enum Load {
    Zero,
    /// `rot f`, regularized by `P_h'`, plus an optional `L₂` part.
    Vector { f: VectorFn, l2: Option<ScalarFn> },
    /// `L₂` load tested directly.
    Scalar(ScalarFn),
}

#[derive(Clone)]
pub struct ExactSolution {
    pub u: ScalarFn,
    pub grad: VectorFn,
    pub hessian: HessianFn,
}

impl ExactSolution {
    /// `curl u = (∂y u, -∂x u)`.
    pub fn velocity(&self, p: Point) -> Point {
        let g = (self.grad)(p);
        [g[1], -g[0]]
    }
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub domain: DomainId,
    pub gamma: f64,
    pub load: Load,
    /// `None` means homogeneous data.
    pub boundary: Option<Arc<BoundaryFn>>,
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("gamma", &self.gamma)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

/// `s(t) = sin²(πt)` and its first four derivatives.
fn sine_factor(t: f64) -> [f64; 5] {
    let (s2, c2) = (2.0 * PI * t).sin_cos();
    [
        (PI * t).sin().powi(2),
        PI * s2,
        2.0 * PI * PI * c2,
        -4.0 * PI.powi(3) * s2,
        -8.0 * PI.powi(4) * c2,
    ]
}

/// `u = sin²(πx) sin²(πy)`.
pub fn smooth_exact() -> ExactSolution {
    ExactSolution {
        u: Arc::new(|p| sine_factor(p[0])[0] * sine_factor(p[1])[0]),
        grad: Arc::new(|p| {
            let (a, b) = (sine_factor(p[0]), sine_factor(p[1]));
            [a[1] * b[0], a[0] * b[1]]
        }),
        hessian: Arc::new(|p| {
            let (a, b) = (sine_factor(p[0]), sine_factor(p[1]));
            [a[2] * b[0], a[0] * b[2], a[1] * b[1]]
        }),
    }
}

/// `Δ²u` for the smooth solution.
pub fn smooth_bilaplacian(p: Point) -> f64 {
    let (a, b) = (sine_factor(p[0]), sine_factor(p[1]));
    a[4] * b[0] + 2.0 * a[2] * b[2] + a[0] * b[4]
}

/// `f = -Δ curl u = (-Δ∂y u, Δ∂x u)`, so that `rot f = Δ²u`.
pub fn smooth_force(p: Point) -> Point {
    let (a, b) = (sine_factor(p[0]), sine_factor(p[1]));
    let lap_dx = a[3] * b[0] + a[1] * b[2];
    let lap_dy = a[2] * b[1] + a[0] * b[3];
    [-lap_dy, lap_dx]
}

fn gamma_term(gamma: f64, exact: &ExactSolution) -> Option<ScalarFn> {
    (gamma != 0.0).then(|| {
        let u = exact.u.clone();
        Arc::new(move |p| gamma * u(p)) as ScalarFn
    })
}

pub fn smooth() -> ProblemSpec {
    smooth_with_gamma(0.0)
}

/// Smooth problem for `Δ²u + γu`; the `γu` part enters as an `L₂` load.
pub fn smooth_with_gamma(gamma: f64) -> ProblemSpec {
    let exact = smooth_exact();
    ProblemSpec {
        id: ProblemId::Smooth,
        domain: DomainId::UnitSquare(1),
        gamma,
        load: Load::Vector {
            f: Arc::new(smooth_force),
            l2: gamma_term(gamma, &exact),
        },
        boundary: None,
        exact: Some(exact),
    }
}

pub fn plate_manufactured() -> ProblemSpec {
    plate_with_gamma(0.0)
}

pub fn plate_with_gamma(gamma: f64) -> ProblemSpec {
    let exact = smooth_exact();
    let u = exact.u.clone();
    ProblemSpec {
        id: ProblemId::Plate,
        domain: DomainId::UnitSquare(1),
        gamma,
        load: Load::Scalar(Arc::new(move |p| smooth_bilaplacian(p) + gamma * u(p))),
        boundary: None,
        exact: Some(exact),
    }
}

/// Regularized lid profile: 1 on `(0.1, 0.9)`, blending smoothly to 0 at the corners.
pub fn cavity_profile(x: f64) -> f64 {
    let blend = |d: f64| 1.0 - 0.25 * (1.0 - (d / 0.1 * PI).cos()).powi(2);
    if x <= 0.1 {
        blend(0.1 - x)
    } else if x >= 0.9 {
        blend(x - 0.9)
    } else {
        1.0
    }
}

fn on_line(v: f64, c: f64) -> bool {
    (v - c).abs() < 1e-9
}

pub fn cavity() -> ProblemSpec {
    cavity_with_gamma(0.0)
}

pub fn cavity_with_gamma(gamma: f64) -> ProblemSpec {
    ProblemSpec {
        id: ProblemId::Cavity,
        domain: DomainId::UnitSquare(1),
        gamma,
        load: Load::Zero,
        boundary: Some(Arc::new(|p: Point, seg: Point| VertexData {
            value: 0.0,
            grad: [0.0, if on_line(seg[1], 1.0) { cavity_profile(p[0]) } else { 0.0 }],
        })),
        exact: None,
    }
}

/// Stream-function data on the channel boundary: parabolic inflow at `x = 0`,
/// parabolic outflow at `x = 10`, and constant values on the walls.
pub fn channel_boundary(p: Point, seg: Point) -> VertexData {
    let y = p[1];
    if on_line(seg[0], 0.0) {
        VertexData {
            value: -(2.0 * y + 1.0) * (y - 1.0).powi(2) / 6.0,
            grad: [0.0, y * (1.0 - y)],
        }
    } else if on_line(seg[0], 10.0) {
        VertexData {
            value: -(y - 1.0).powi(2) * (y + 2.0) / 24.0,
            grad: [0.0, (1.0 - y) * (1.0 + y) / 8.0],
        }
    } else if on_line(seg[1], 1.0) {
        VertexData::ZERO
    } else {
        VertexData {
            value: -1.0 / 6.0,
            grad: [0.0, 0.0],
        }
    }
}

pub fn channel() -> ProblemSpec {
    channel_with_gamma(0.0)
}

pub fn channel_with_gamma(gamma: f64) -> ProblemSpec {
    ProblemSpec {
        id: ProblemId::Channel,
        domain: DomainId::ChannelStep,
        gamma,
        load: Load::Zero,
        boundary: Some(Arc::new(channel_boundary)),
        exact: None,
    }
}

pub fn builtin(id: ProblemId, gamma: f64) -> ProblemSpec {
    match id {
        ProblemId::Smooth => smooth_with_gamma(gamma),
        ProblemId::Cavity => cavity_with_gamma(gamma),
        ProblemId::Channel => channel_with_gamma(gamma),
        ProblemId::Plate => plate_with_gamma(gamma),
    }
}

/// Analytic volume flux through a vertical section of the channel.
pub const CHANNEL_FLUX: f64 = 1.0 / 6.0;

impl ProblemSpec {
    pub fn boundary_data(&self, p: Point, seg: Point) -> VertexData {
        match &self.boundary {
            Some(f) => f(p, seg),
            None => VertexData::ZERO,
        }
    }

    /// Corner compatibility of the boundary data and agreement of the exact
    /// solution with it at 100 boundary points.
    pub fn validate(&self) -> Result<()> {
        if self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::Range(format!("gamma = {} must be >= 0", self.gamma)));
        }
        let mesh = generate(self.domain);
        build_dof_map(&mesh, self.boundary.as_deref())?;
        let Some(exact) = &self.exact else {
            return Ok(());
        };
        let edges: Vec<usize> = (0..mesh.n_edges()).filter(|&e| mesh.boundary_edge[e]).collect();
        for k in 0..100 {
            let e = edges[k % edges.len()];
            let s = ((k / edges.len()) as f64 + 0.5) * 0.618_033_988_75 % 1.0;
            let f = mesh.edge_frame(e);
            let p = [f.a[0] + s * (f.b[0] - f.a[0]), f.a[1] + s * (f.b[1] - f.a[1])];
            let d = self.boundary_data(p, mesh.edge_midpoint(e));
            let g = (exact.grad)(p);
            let disc = (d.value - (exact.u)(p))
                .abs()
                .max((d.grad[0] - g[0]).abs())
                .max((d.grad[1] - g[1]).abs());
            if disc > 1e-10 {
                return Err(Error::DataCompatibility {
                    vertex: usize::MAX,
                    x: p[0],
                    y: p[1],
                    discrepancy: disc,
                });
            }
        }
        Ok(())
    }
}
