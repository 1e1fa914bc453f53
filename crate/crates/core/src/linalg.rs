//! Dense Cholesky for element Gram matrices and sparse SPD solvers for the
//! condensed global system.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a dense SPD matrix.
#[derive(Debug, Clone)]
pub struct DenseSpd {
    n: usize,
    /// Row-major lower triangle, `l[i * n + j]` for `j <= i`.
    l: Vec<f64>,
}

pub fn dense_cholesky(a: &DMatrix<f64>) -> Result<DenseSpd> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "dense_cholesky needs a square matrix");
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::NotSpd { pivot: i, value: s });
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(DenseSpd { n, l })
}

impl DenseSpd {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if j <= i { self.l[i * self.n + j] } else { 0.0 })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.forward_in_place(b);
        self.backward_in_place(b);
    }

    /// `b <- L^{-1} b`.
    pub fn forward_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s = b[i] - dot(row, &b[..i]);
            b[i] = s / self.l[i * n + i];
        }
    }

    /// `b <- L^{-T} b`.
    pub fn backward_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone();
        self.solve_in_place(x.as_mut_slice());
        x
    }

    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let mut x = b.clone();
        for mut col in x.column_iter_mut() {
            self.solve_in_place(col.as_mut_slice());
        }
        x
    }
}

/// Square sparse matrix in compressed sparse row form, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl Csr {
    /// Zero matrix with the given (per-row, unsorted) column pattern.
    pub fn from_pattern(n: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for mut cols in rows {
            cols.sort_unstable();
            cols.dedup();
            col_idx.extend(cols);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Csr {
            n,
            row_ptr,
            col_idx,
            values: vec![0.0; nnz],
        }
    }

    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows = vec![Vec::new(); n];
        for &(i, j, _) in triplets {
            rows[i].push(j);
        }
        let mut m = Csr::from_pattern(n, rows);
        for &(i, j, v) in triplets {
            m.add(i, j, v);
        }
        m
    }

    pub fn from_dense(a: &DMatrix<f64>) -> Self {
        let mut t = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if a[(i, j)] != 0.0 {
                    t.push((i, j, a[(i, j)]));
                }
            }
        }
        Csr::from_triplets(a.nrows(), &t)
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Adds `v` to an entry of the pattern. Panics if `(i, j)` is not stored.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let start = self.row_ptr[i];
        let cols = &self.col_idx[start..self.row_ptr[i + 1]];
        let k = cols
            .binary_search(&j)
            .unwrap_or_else(|_| panic!("entry ({i}, {j}) outside the sparsity pattern"));
        self.values[start + k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|k| vals[k]).unwrap_or(0.0)
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d = d.max((v - self.get(j, i)).abs());
            }
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| self.row(i).0.iter().copied().filter(|&j| j != i).collect())
            .collect()
    }
}

/// Sum over rows of `i - (first stored column)` under the given ordering,
/// where `perm[k]` is the original index placed at position `k`.
pub fn profile(adjacency: &[Vec<usize>], perm: &[usize]) -> usize {
    let inv = inverse_permutation(perm);
    (0..perm.len())
        .map(|k| {
            let first = adjacency[perm[k]].iter().map(|&j| inv[j]).filter(|&j| j < k).min();
            first.map_or(0, |f| k - f)
        })
        .sum()
}

pub fn bandwidth(adjacency: &[Vec<usize>], perm: &[usize]) -> usize {
    let inv = inverse_permutation(perm);
    adjacency
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().map(move |&j| (i, j)))
        .map(|(i, j)| inv[i].abs_diff(inv[j]))
        .max()
        .unwrap_or(0)
}

pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// Reverse Cuthill-McKee ordering. `perm[k]` is the original index placed
/// at position `k`. Each connected component starts from a pseudo-peripheral
/// vertex; ties are broken by degree, then index.
pub fn rcm_order(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&i| (degree[i], i));
    for &seed in &seeds {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(adjacency, seed, &degree);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            next.dedup();
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// BFS levels from `root` restricted to its component: (eccentricity, last level).
fn level_structure(adjacency: &[Vec<usize>], root: usize) -> (usize, Vec<usize>) {
    let mut dist = std::collections::HashMap::new();
    dist.insert(root, 0usize);
    let mut frontier = vec![root];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &adjacency[v] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(depth + 1);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return (depth, frontier);
        }
        depth += 1;
        frontier = next;
    }
}

fn pseudo_peripheral(adjacency: &[Vec<usize>], seed: usize, degree: &[usize]) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = level_structure(adjacency, root);
    for _ in 0..8 {
        let cand = *last.iter().min_by_key(|&&v| (degree[v], v)).unwrap();
        let (e, l) = level_structure(adjacency, cand);
        if e <= ecc {
            break;
        }
        root = cand;
        ecc = e;
        last = l;
    }
    root
}

/// Variable-band (skyline) Cholesky factor under a fill-reducing permutation.
#[derive(Debug, Clone)]
pub struct Skyline {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl Skyline {
    pub fn factor(a: &Csr, perm: Vec<usize>) -> Result<Self> {
        let n = a.n;
        let inv = inverse_permutation(&perm);
        let mut first = vec![0; n];
        for (k, fk) in first.iter_mut().enumerate() {
            let (cols, _) = a.row(perm[k]);
            *fk = cols.iter().map(|&j| inv[j]).filter(|&j| j <= k).min().unwrap_or(k);
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for k in 0..n {
            let s = start[k] + (k - first[k] + 1);
            start.push(s);
        }
        let mut data = vec![0.0; start[n]];
        for k in 0..n {
            let (cols, vals) = a.row(perm[k]);
            for (&j, &v) in cols.iter().zip(vals) {
                let jk = inv[j];
                if jk <= k {
                    data[start[k] + jk - first[k]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let row_i = start[i];
            for j in fi..=i {
                let fj = first[j];
                let row_j = start[j];
                let lo = fi.max(fj);
                let len = j - lo;
                let a_off = row_i + lo - fi;
                let b_off = row_j + lo - fj;
                let s = data[row_i + j - fi]
                    - dot(&data[a_off..a_off + len], &data[b_off..b_off + len]);
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::NotSpd {
                            pivot: perm[i],
                            value: s,
                        });
                    }
                    data[row_i + i - fi] = s.sqrt();
                } else {
                    data[row_i + j - fi] = s / data[row_j + j - fj];
                }
            }
        }
        Ok(Skyline {
            perm,
            first,
            start,
            data,
        })
    }

    pub fn stored_entries(&self) -> usize {
        self.data.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let f = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let s = y[i] - dot(&row[..i - f], &y[f..i]);
            y[i] = s / row[i - f];
        }
        for i in (0..n).rev() {
            let f = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - f];
            let yi = y[i];
            for (k, &l) in row[..i - f].iter().enumerate() {
                y[f + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMethod {
    #[default]
    Direct,
    Pcg,
}

impl std::str::FromStr for SolverMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SolverMethod::Direct),
            "pcg" => Ok(SolverMethod::Pcg),
            other => Err(Error::Range(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `||S x - r|| / ||r||`.
    pub relative_residual: f64,
}

pub const PCG_TOLERANCE: f64 = 1e-10;
/// Residual that [`sparse_solve`] iterates towards before settling for
/// [`PCG_TOLERANCE`] at the iteration cap. The skeleton systems amplify the
/// residual by about 3e4 in the solution.
pub const PCG_TARGET: f64 = 1e-13;

/// Solves `S x = r` for SPD `S`.
pub fn sparse_solve(s: &Csr, r: &[f64], method: SolverMethod) -> Result<SolveReport> {
    if let Some(i) = (0..s.n).find(|&i| s.row(i).0.is_empty() || s.get(i, i) == 0.0) {
        return Err(Error::NotSpd {
            pivot: i,
            value: 0.0,
        });
    }
    match method {
        SolverMethod::Direct => {
            let perm = rcm_order(&s.adjacency());
            let x = Skyline::factor(s, perm)?.solve(r);
            let relative_residual = relative_residual(s, &x, r);
            Ok(SolveReport {
                x,
                iterations: 0,
                relative_residual,
            })
        }
        SolverMethod::Pcg => {
            let max_iter = (200.0 * (s.n as f64).sqrt()).ceil() as usize;
            let (x, iterations, _) = pcg_core(s, r, PCG_TARGET, max_iter, None)?;
            let relative_residual = relative_residual(s, &x, r);
            if relative_residual <= PCG_TOLERANCE {
                Ok(SolveReport {
                    x,
                    iterations,
                    relative_residual,
                })
            } else {
                Err(Error::NoConvergence {
                    iterations,
                    residual: relative_residual,
                })
            }
        }
    }
}

pub fn relative_residual(s: &Csr, x: &[f64], r: &[f64]) -> f64 {
    let mut ax = vec![0.0; s.n];
    s.mul_vec(x, &mut ax);
    let num: f64 = ax.iter().zip(r).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let den: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Jacobi-preconditioned conjugate gradients. The optional history receives
/// the preconditioned residual norm `sqrt(r^T M^{-1} r)` after each step.
pub fn pcg(s: &Csr, b: &[f64], tol: f64, history: Option<&mut Vec<f64>>) -> Result<SolveReport> {
    let max_iter = (200.0 * (s.n as f64).sqrt()).ceil() as usize;
    let (x, iterations, converged) = pcg_core(s, b, tol, max_iter, history)?;
    let relative_residual = relative_residual(s, &x, b);
    if converged {
        Ok(SolveReport {
            x,
            iterations,
            relative_residual,
        })
    } else {
        Err(Error::NoConvergence {
            iterations,
            residual: relative_residual,
        })
    }
}

/// The PCG iterate after exactly `steps` steps (fewer if the residual
/// vanishes first).
pub fn pcg_steps(s: &Csr, b: &[f64], steps: usize) -> Result<Vec<f64>> {
    Ok(pcg_core(s, b, 0.0, steps, None)?.0)
}

fn pcg_core(
    s: &Csr,
    b: &[f64],
    tol: f64,
    max_iter: usize,
    mut history: Option<&mut Vec<f64>>,
) -> Result<(Vec<f64>, usize, bool)> {
    let n = s.n;
    let inv_diag: Vec<f64> = s.diagonal().iter().map(|d| 1.0 / d).collect();
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, 0, true));
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    for it in 1..=max_iter {
        s.mul_vec(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::NotSpd {
                pivot: it,
                value: pq,
            });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        if let Some(h) = history.as_deref_mut() {
            h.push(rz_new.max(0.0).sqrt());
        }
        if rnorm <= tol * bnorm || rz_new == 0.0 {
            return Ok((x, it, rnorm <= tol * bnorm));
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Ok((x, max_iter, false))
}
