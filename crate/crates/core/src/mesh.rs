//! Conforming triangulations of the benchmark domains.
//!
//! Meshes are built from unit cells split into four triangles through the
//! cell center ("criss-cross") and refined uniformly by edge bisection.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Initial geometries understood by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainId {
    /// `(0,1)^2` split into `n x n` cells.
    UnitSquare(usize),
    /// `(0,10) x (-1,1)` minus the step `[0,2] x [-1,0]`, 18 unit cells.
    ChannelStep,
}

/// A conforming triangulation with its edge topology.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    /// Vertex triples, counter-clockwise.
    pub triangles: Vec<[usize; 3]>,
    /// `(lo, hi)` pairs, sorted lexicographically.
    pub edges: Vec<[usize; 2]>,
    /// Local edge `i` of a triangle runs from local vertex `i` to `i+1`.
    /// The sign is `+1` iff the element's outward normal equals the global
    /// edge normal.
    pub elem_edges: Vec<[(usize, f64); 3]>,
    pub boundary_vertex: Vec<bool>,
    pub boundary_edge: Vec<bool>,
    /// Longest edge per element.
    pub h: Vec<f64>,
    /// Elements sharing each vertex, ascending.
    pub vertex_patches: Vec<Vec<usize>>,
}

/// Oriented geometry of a global edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrame {
    pub a: Point,
    pub b: Point,
    pub length: f64,
    pub tangent: Point,
    pub normal: Point,
}

pub fn generate(domain: DomainId) -> Mesh {
    let cells: Vec<(i64, i64)> = match domain {
        DomainId::UnitSquare(n) => {
            let n = n.max(1) as i64;
            (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).collect()
        }
        DomainId::ChannelStep => (-1..1)
            .flat_map(|j| (0..10).map(move |i| (i, j)))
            .filter(|&(i, j)| !(j == -1 && i < 2))
            .collect(),
    };
    let scale = match domain {
        DomainId::UnitSquare(n) => 1.0 / n.max(1) as f64,
        DomainId::ChannelStep => 1.0,
    };
    criss_cross(&cells, scale)
}

/// Builds the four-triangle split of every listed cell. Cells are given by
/// integer lower-left corners; coordinates are multiplied by `scale`.
fn criss_cross(cells: &[(i64, i64)], scale: f64) -> Mesh {
    // Keys are doubled integer coordinates so that cell centers stay integral.
    let mut corner_ids: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for &(i, j) in cells {
        for (di, dj) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
            corner_ids.insert((2 * (j + dj), 2 * (i + di)), 0);
        }
    }
    let mut vertices = Vec::with_capacity(corner_ids.len() + cells.len());
    for (idx, (key, id)) in corner_ids.iter_mut().enumerate() {
        *id = idx;
        vertices.push([key.1 as f64 * 0.5 * scale, key.0 as f64 * 0.5 * scale]);
    }
    let mut triangles = Vec::with_capacity(4 * cells.len());
    for &(i, j) in cells {
        let id = |di: i64, dj: i64| corner_ids[&(2 * (j + dj), 2 * (i + di))];
        let (a, b, c, d) = (id(0, 0), id(1, 0), id(1, 1), id(0, 1));
        let m = vertices.len();
        vertices.push([(i as f64 + 0.5) * scale, (j as f64 + 0.5) * scale]);
        triangles.extend_from_slice(&[[a, b, m], [b, c, m], [c, d, m], [d, a, m]]);
    }
    Mesh::from_triangles(vertices, triangles).expect("criss-cross meshes are manifold")
}

impl Mesh {
    /// Builds topology for a CCW triangle list.
    pub fn from_triangles(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let (edges, elem_edges, boundary_edge) = topology(vertices.len(), &triangles)?;
        let mut boundary_vertex = vec![false; vertices.len()];
        for (e, &[lo, hi]) in edges.iter().enumerate() {
            if boundary_edge[e] {
                boundary_vertex[lo] = true;
                boundary_vertex[hi] = true;
            }
        }
        let h = triangles
            .iter()
            .map(|t| {
                (0..3)
                    .map(|i| dist(vertices[t[i]], vertices[t[(i + 1) % 3]]))
                    .fold(0.0, f64::max)
            })
            .collect();
        let mut vertex_patches = vec![Vec::new(); vertices.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                vertex_patches[v].push(t);
            }
        }
        Ok(Mesh {
            vertices,
            triangles,
            edges,
            elem_edges,
            boundary_vertex,
            boundary_edge,
            h,
            vertex_patches,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_interior_vertices(&self) -> usize {
        self.boundary_vertex.iter().filter(|b| !**b).count()
    }

    pub fn n_boundary_edges(&self) -> usize {
        self.boundary_edge.iter().filter(|b| **b).count()
    }

    pub fn h_max(&self) -> f64 {
        self.h.iter().copied().fold(0.0, f64::max)
    }

    /// `#V - #E + #T`.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_triangles() as i64
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.signed_area(t)).sum()
    }

    pub fn edge_frame(&self, e: usize) -> EdgeFrame {
        let [lo, hi] = self.edges[e];
        let (a, b) = (self.vertices[lo], self.vertices[hi]);
        let length = dist(a, b);
        let tangent = [(b[0] - a[0]) / length, (b[1] - a[1]) / length];
        EdgeFrame {
            a,
            b,
            length,
            tangent,
            normal: [tangent[1], -tangent[0]],
        }
    }

    pub fn edge_midpoint(&self, e: usize) -> Point {
        let [lo, hi] = self.edges[e];
        midpoint(self.vertices[lo], self.vertices[hi])
    }

    /// Boundary edges incident to vertex `v`.
    pub fn boundary_edges_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &t in &self.vertex_patches[v] {
            for (e, _) in self.elem_edges[t] {
                if self.boundary_edge[e] && self.edges[e].contains(&v) && !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Uniform red refinement. Parent vertices keep their indices; the
    /// midpoint of global edge `e` becomes vertex `#V + e`.
    pub fn refine_red(&self) -> Mesh {
        let nv = self.n_vertices();
        let mut vertices = self.vertices.clone();
        vertices.extend(
            self.edges
                .iter()
                .map(|&[lo, hi]| midpoint(self.vertices[lo], self.vertices[hi])),
        );
        let mut triangles = Vec::with_capacity(4 * self.n_triangles());
        for (t, &[a, b, c]) in self.triangles.iter().enumerate() {
            let [(e0, _), (e1, _), (e2, _)] = self.elem_edges[t];
            let (mab, mbc, mca) = (nv + e0, nv + e1, nv + e2);
            triangles.push([a, mab, mca]);
            triangles.push([mab, b, mbc]);
            triangles.push([mca, mbc, c]);
            triangles.push([mab, mbc, mca]);
        }
        Mesh::from_triangles(vertices, triangles).expect("refinement preserves conformity")
    }

    pub fn refined(&self, times: usize) -> Mesh {
        let mut m = self.clone();
        for _ in 0..times {
            m = m.refine_red();
        }
        m
    }
}

type Topology = (Vec<[usize; 2]>, Vec<[(usize, f64); 3]>, Vec<bool>);

/// Enumerates edges, element-edge incidences and boundary flags.
pub fn topology(n_vertices: usize, triangles: &[[usize; 3]]) -> Result<Topology> {
    let mut incidence: BTreeMap<[usize; 2], Vec<(usize, usize)>> = BTreeMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            if a == b || a >= n_vertices || b >= n_vertices {
                return Err(Error::Topology(format!("invalid triangle {t}: {tri:?}")));
            }
            incidence.entry([a.min(b), a.max(b)]).or_default().push((t, i));
        }
    }
    let mut edges = Vec::with_capacity(incidence.len());
    let mut elem_edges = vec![[(usize::MAX, 0.0); 3]; triangles.len()];
    let mut boundary = Vec::with_capacity(incidence.len());
    for (e, (key, inc)) in incidence.iter().enumerate() {
        if inc.len() > 2 {
            return Err(Error::Topology(format!(
                "edge {key:?} is shared by {} triangles",
                inc.len()
            )));
        }
        if inc.len() == 2 {
            let s0 = triangles[inc[0].0][inc[0].1] < triangles[inc[0].0][(inc[0].1 + 1) % 3];
            let s1 = triangles[inc[1].0][inc[1].1] < triangles[inc[1].0][(inc[1].1 + 1) % 3];
            if s0 == s1 {
                return Err(Error::Topology(format!(
                    "edge {key:?} is traversed in the same direction by both neighbours"
                )));
            }
        }
        edges.push(*key);
        boundary.push(inc.len() == 1);
        for &(t, i) in inc {
            let sign = if triangles[t][i] < triangles[t][(i + 1) % 3] {
                1.0
            } else {
                -1.0
            };
            elem_edges[t][i] = (e, sign);
        }
    }
    Ok((edges, elem_edges, boundary))
}

pub fn dist(a: Point, b: Point) -> f64 {
    ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
}

pub fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}
