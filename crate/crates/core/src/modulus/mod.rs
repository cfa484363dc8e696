//! Finite-difference conformal modulus: extremal distance between boundary
//! sets as the reciprocal of the discrete Dirichlet energy of the mixed
//! boundary-value potential (0 on E, 1 on F, zero normal derivative on the
//! free boundary).
//!
//! Problems are posed on a cartesian grid or on a log-polar chart
//! `(log|z - center|, arg(z - center))`. Laplace's equation is conformally
//! invariant, so the chart problem uses the flat five-point scheme; large
//! radial extents then cost only `O(log r)` rows. Conductances follow the
//! finite-volume rule (half weight along free boundaries), which makes the
//! rectangle and concentric-annulus moduli exact up to rounding.

pub mod reduced;
pub mod tables;

pub use reduced::{reduced_extremal_distance_full, ReducedResult};

use crate::geometry::{BoundaryPiece, Point};
use crate::{Error, Result};

/// Coordinate chart a problem is discretized on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Cartesian,
    LogPolar,
}

/// Role of a grid node in the mixed problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    /// Unknown; free (Neumann) boundary arises naturally where edges stop.
    Interior,
    /// Potential 0 (the E set).
    Zero,
    /// Potential 1 (the F set).
    One,
}

#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub w: f64,
}

/// A masked grid problem: active nodes, their classes, and edge conductances.
pub struct ModulusProblem {
    pub chart: Chart,
    pub grid_h: f64,
    class: Vec<NodeClass>,
    edges: Vec<Edge>,
    /// Chart coordinates per node (diagnostics and property tests).
    pos: Vec<(f64, f64)>,
    /// Dual-cell area per node in chart coordinates.
    dual_area: Vec<f64>,
}

impl ModulusProblem {
    pub fn node_count(&self) -> usize {
        self.class.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_class(&self, i: usize) -> NodeClass {
        self.class[i]
    }

    pub fn node_pos(&self, i: usize) -> (f64, f64) {
        self.pos[i]
    }

    pub fn dual_area(&self, i: usize) -> f64 {
        self.dual_area[i]
    }

    fn validate(&self) -> Result<()> {
        let has_zero = self.class.iter().any(|c| *c == NodeClass::Zero);
        let has_one = self.class.iter().any(|c| *c == NodeClass::One);
        if !has_zero || !has_one {
            return Err(Error::InvalidParameter(
                "modulus problem needs nonempty E and F sets".into(),
            ));
        }
        Ok(())
    }
}

pub struct Solved {
    /// Extremal distance between E and F (reciprocal Dirichlet energy).
    pub modulus: f64,
    pub energy: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Potential per active node, Dirichlet values included.
    pub values: Vec<f64>,
}

/// Extremal distance for the problem; convenience wrapper over [`solve`].
pub fn extremal_distance(problem: &ModulusProblem) -> Result<f64> {
    Ok(solve(problem, None)?.modulus)
}

const CG_TOL: f64 = 1e-10;
const CG_MAX_ITER: usize = 200_000;

/// Solve the mixed problem by conjugate gradients on the interior unknowns
/// (Jacobi preconditioned) to relative residual `1e-10`, optionally warm
/// started from a previous solution on the same grid.
pub fn solve(problem: &ModulusProblem, init: Option<&[f64]>) -> Result<Solved> {
    problem.validate()?;
    let n = problem.node_count();
    let mut unknown = vec![u32::MAX; n];
    let mut n_unknown = 0u32;
    for (i, c) in problem.class.iter().enumerate() {
        if *c == NodeClass::Interior {
            unknown[i] = n_unknown;
            n_unknown += 1;
        }
    }
    let nu = n_unknown as usize;

    // CSR assembly over unknowns
    let mut deg = vec![0usize; nu];
    for e in &problem.edges {
        let (a, b) = (e.a as usize, e.b as usize);
        if unknown[a] != u32::MAX && unknown[b] != u32::MAX {
            deg[unknown[a] as usize] += 1;
            deg[unknown[b] as usize] += 1;
        }
    }
    let mut row_ptr = vec![0usize; nu + 1];
    for i in 0..nu {
        row_ptr[i + 1] = row_ptr[i] + deg[i];
    }
    let nnz = row_ptr[nu];
    let mut col = vec![0u32; nnz];
    let mut val = vec![0f64; nnz];
    let mut fill = row_ptr.clone();
    let mut diag = vec![0f64; nu];
    let mut rhs = vec![0f64; nu];

    let bc = |c: NodeClass| match c {
        NodeClass::Zero => 0.0,
        NodeClass::One => 1.0,
        NodeClass::Interior => f64::NAN,
    };

    for e in &problem.edges {
        let (a, b) = (e.a as usize, e.b as usize);
        let (ua, ub) = (unknown[a], unknown[b]);
        match (ua, ub) {
            (u32::MAX, u32::MAX) => {}
            (ua, u32::MAX) => {
                let i = ua as usize;
                diag[i] += e.w;
                rhs[i] += e.w * bc(problem.class[b]);
            }
            (u32::MAX, ub) => {
                let i = ub as usize;
                diag[i] += e.w;
                rhs[i] += e.w * bc(problem.class[a]);
            }
            (ua, ub) => {
                let (i, j) = (ua as usize, ub as usize);
                diag[i] += e.w;
                diag[j] += e.w;
                col[fill[i]] = ub;
                val[fill[i]] = -e.w;
                fill[i] += 1;
                col[fill[j]] = ua;
                val[fill[j]] = -e.w;
                fill[j] += 1;
            }
        }
    }

    let matvec = |x: &[f64], y: &mut [f64]| {
        for i in 0..nu {
            let mut acc = diag[i] * x[i];
            for k in row_ptr[i]..row_ptr[i + 1] {
                acc += val[k] * x[col[k] as usize];
            }
            y[i] = acc;
        }
    };

    let ic = IncompleteCholesky::factor(nu, &row_ptr, &col, &val, &diag);

    // isolated unknowns (no edges at all) are harmless: pin them to zero
    let mut x = vec![0f64; nu];
    match init {
        Some(prev) if prev.len() == n => {
            for i in 0..n {
                if unknown[i] != u32::MAX {
                    x[unknown[i] as usize] = prev[i];
                }
            }
        }
        _ => {
            for i in 0..nu {
                if diag[i] > 0.0 {
                    x[i] = rhs[i] / diag[i];
                }
            }
        }
    }

    let b_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut r = vec![0f64; nu];
    let mut iterations = 0usize;
    let mut residual = 0.0f64;
    if nu > 0 {
        matvec(&x, &mut r);
        for i in 0..nu {
            r[i] = rhs[i] - r[i];
        }
        let inv_diag: Vec<f64> =
            diag.iter().map(|d| if *d > 0.0 { 1.0 / d } else { 0.0 }).collect();
        let precond = |r: &[f64], z: &mut Vec<f64>| match &ic {
            Some(f) => f.apply(r, z),
            None => {
                for i in 0..r.len() {
                    z[i] = r[i] * inv_diag[i];
                }
            }
        };
        let mut z = vec![0f64; nu];
        precond(&r, &mut z);
        let mut p = z.clone();
        let mut rz: f64 = (0..nu).map(|i| r[i] * z[i]).sum();
        let mut ap = vec![0f64; nu];
        let tol = CG_TOL * b_norm.max(1e-300);
        residual = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        while residual > tol {
            if iterations >= CG_MAX_ITER {
                return Err(Error::SolverDiverged { residual: residual / b_norm.max(1e-300), iterations });
            }
            matvec(&p, &mut ap);
            let pap: f64 = (0..nu).map(|i| p[i] * ap[i]).sum();
            if pap <= 0.0 {
                break; // numerically singular component; x is as good as it gets
            }
            let alpha = rz / pap;
            for i in 0..nu {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            precond(&r, &mut z);
            let rz_new: f64 = (0..nu).map(|i| r[i] * z[i]).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..nu {
                p[i] = z[i] + beta * p[i];
            }
            residual = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            iterations += 1;
        }
    }

    let mut values = vec![0f64; n];
    for i in 0..n {
        values[i] = match problem.class[i] {
            NodeClass::Interior => x[unknown[i] as usize],
            NodeClass::Zero => 0.0,
            NodeClass::One => 1.0,
        };
    }
    let mut energy = 0.0;
    for e in &problem.edges {
        let d = values[e.a as usize] - values[e.b as usize];
        energy += e.w * d * d;
    }
    if !(energy > 1e-14) {
        return Err(Error::DisconnectedMask);
    }
    Ok(Solved {
        modulus: 1.0 / energy,
        energy,
        iterations,
        residual: residual / b_norm.max(1e-300),
        values,
    })
}

/// Zero-fill incomplete Cholesky preconditioner. The assembled operator is a
/// weighted graph Laplacian (an M-matrix), for which the factorization cannot
/// break down; isolated or singular rows fall back to identity scaling.
struct IncompleteCholesky {
    ldiag: Vec<f64>,
    lower_ptr: Vec<usize>,
    lower_col: Vec<u32>,
    lower_val: Vec<f64>,
    // transpose access for the backward sweep: entries L[j][i] with j > i
    upper_ptr: Vec<usize>,
    upper_row: Vec<u32>,
    upper_idx: Vec<usize>,
}

impl IncompleteCholesky {
    fn factor(
        n: usize,
        row_ptr: &[usize],
        col: &[u32],
        val: &[f64],
        diag: &[f64],
    ) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let mut lower_ptr = vec![0usize; n + 1];
        for i in 0..n {
            let mut cnt = 0;
            for k in row_ptr[i]..row_ptr[i + 1] {
                if (col[k] as usize) < i {
                    cnt += 1;
                }
            }
            lower_ptr[i + 1] = lower_ptr[i] + cnt;
        }
        let nnz_l = lower_ptr[n];
        let mut lower_col = vec![0u32; nnz_l];
        let mut lower_a = vec![0f64; nnz_l];
        for i in 0..n {
            let mut fill = lower_ptr[i];
            let mut entries: Vec<(u32, f64)> = (row_ptr[i]..row_ptr[i + 1])
                .filter(|k| (col[*k] as usize) < i)
                .map(|k| (col[k], val[k]))
                .collect();
            entries.sort_by_key(|e| e.0);
            for (c, v) in entries {
                lower_col[fill] = c;
                lower_a[fill] = v;
                fill += 1;
            }
        }
        let mut lower_val = vec![0f64; nnz_l];
        let mut ldiag = vec![0f64; n];
        for i in 0..n {
            let (lo, hi) = (lower_ptr[i], lower_ptr[i + 1]);
            for k in lo..hi {
                let j = lower_col[k] as usize;
                let mut s = lower_a[k];
                // common sparsity of rows i and j below column j
                let (jlo, jhi) = (lower_ptr[j], lower_ptr[j + 1]);
                let mut a = lo;
                let mut b = jlo;
                while a < k && b < jhi {
                    match lower_col[a].cmp(&lower_col[b]) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            s -= lower_val[a] * lower_val[b];
                            a += 1;
                            b += 1;
                        }
                    }
                }
                lower_val[k] = if ldiag[j] > 0.0 { s / ldiag[j] } else { 0.0 };
            }
            let mut d = diag[i];
            for k in lo..hi {
                d -= lower_val[k] * lower_val[k];
            }
            ldiag[i] = if d > 1e-13 * diag[i].max(1e-300) { d.sqrt() } else { 1.0 };
        }
        // transpose index for the backward sweep
        let mut upper_ptr = vec![0usize; n + 1];
        for k in 0..nnz_l {
            upper_ptr[lower_col[k] as usize + 1] += 1;
        }
        for i in 0..n {
            upper_ptr[i + 1] += upper_ptr[i];
        }
        let mut upper_row = vec![0u32; nnz_l];
        let mut upper_idx = vec![0usize; nnz_l];
        let mut cursor = upper_ptr.clone();
        for i in 0..n {
            for k in lower_ptr[i]..lower_ptr[i + 1] {
                let j = lower_col[k] as usize;
                upper_row[cursor[j]] = i as u32;
                upper_idx[cursor[j]] = k;
                cursor[j] += 1;
            }
        }
        Some(IncompleteCholesky {
            ldiag,
            lower_ptr,
            lower_col,
            lower_val,
            upper_ptr,
            upper_row,
            upper_idx,
        })
    }

    /// `z = (L L^T)^{-1} r`.
    fn apply(&self, r: &[f64], z: &mut Vec<f64>) {
        let n = r.len();
        for i in 0..n {
            let mut s = r[i];
            for k in self.lower_ptr[i]..self.lower_ptr[i + 1] {
                s -= self.lower_val[k] * z[self.lower_col[k] as usize];
            }
            z[i] = s / self.ldiag[i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in self.upper_ptr[i]..self.upper_ptr[i + 1] {
                s -= self.lower_val[self.upper_idx[k]] * z[self.upper_row[k] as usize];
            }
            z[i] = s / self.ldiag[i];
        }
    }
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

/// Cartesian tensor grid over `origin + [0, nx*h] x [0, ny*h]`.
///
/// `active` masks nodes, `classify` assigns boundary roles to active nodes,
/// `walls` cut edges they cross (interior Neumann slits).
pub fn cartesian_grid(
    origin: Point,
    nx: usize,
    ny: usize,
    h: f64,
    active: &dyn Fn(Point) -> bool,
    classify: &dyn Fn(Point) -> NodeClass,
    walls: &[BoundaryPiece],
) -> ModulusProblem {
    let cols = nx + 1;
    let rows = ny + 1;
    let point = |i: usize, j: usize| Point::new(origin.x + i as f64 * h, origin.y + j as f64 * h);
    let mut id = vec![u32::MAX; cols * rows];
    let mut class = Vec::new();
    let mut pos = Vec::new();
    for j in 0..rows {
        for i in 0..cols {
            let p = point(i, j);
            if active(p) {
                id[j * cols + i] = class.len() as u32;
                class.push(classify(p));
                pos.push((p.x, p.y));
            }
        }
    }
    let mut dual_area = vec![0.0; class.len()];
    // cell (i,j) spans nodes (i..i+1, j..j+1)
    let cell_active = |i: usize, j: usize, id: &[u32]| -> bool {
        id[j * cols + i] != u32::MAX
            && id[j * cols + i + 1] != u32::MAX
            && id[(j + 1) * cols + i] != u32::MAX
            && id[(j + 1) * cols + i + 1] != u32::MAX
    };
    let mut cells = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if cell_active(i, j, &id) {
                cells[j * nx + i] = true;
                let quarter = h * h / 4.0;
                for (ci, cj) in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
                    dual_area[id[cj * cols + ci] as usize] += quarter;
                }
            }
        }
    }
    let mut edges = Vec::new();
    let mut push_edge = |a: u32, b: u32, w: f64, pa: Point, pb: Point| {
        if w > 0.0 && !walls.iter().any(|wp| wp.crosses_segment(pa, pb)) {
            edges.push(Edge { a, b, w });
        }
    };
    for j in 0..rows {
        for i in 0..cols {
            let a = id[j * cols + i];
            if a == u32::MAX {
                continue;
            }
            // horizontal edge to (i+1, j): flanking cells (i, j-1) and (i, j)
            if i + 1 < cols {
                let b = id[j * cols + i + 1];
                if b != u32::MAX {
                    let mut w = 0.0;
                    if j > 0 && cells[(j - 1) * nx + i] {
                        w += 0.5;
                    }
                    if j < ny && cells[j * nx + i] {
                        w += 0.5;
                    }
                    push_edge(a, b, w, point(i, j), point(i + 1, j));
                }
            }
            // vertical edge to (i, j+1): flanking cells (i-1, j) and (i, j)
            if j + 1 < rows {
                let b = id[(j + 1) * cols + i];
                if b != u32::MAX {
                    let mut w = 0.0;
                    if i > 0 && cells[j * nx + i - 1] {
                        w += 0.5;
                    }
                    if i < nx && cells[j * nx + i] {
                        w += 0.5;
                    }
                    push_edge(a, b, w, point(i, j), point(i, j + 1));
                }
            }
        }
    }
    ModulusProblem { chart: Chart::Cartesian, grid_h: h, class, edges, pos, dual_area }
}

/// Log-polar tensor grid: nodes at `center + exp(s_j + i*phi_i)`.
pub struct LogPolarSpec {
    pub center: Point,
    /// Strictly increasing radial coordinates `s = log|z - center|`.
    pub s: Vec<f64>,
    pub phi0: f64,
    pub phi_span: f64,
    /// Node count across the angular span (cell count when periodic).
    pub n_phi: usize,
    pub periodic: bool,
}

impl LogPolarSpec {
    pub fn phi_step(&self) -> f64 {
        if self.periodic {
            self.phi_span / self.n_phi as f64
        } else {
            self.phi_span / (self.n_phi - 1) as f64
        }
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.phi0 + i as f64 * self.phi_step()
    }

    pub fn z(&self, i: usize, j: usize) -> Point {
        self.center + Point::from_polar(self.s[j].exp(), self.phi(i))
    }
}

/// Build a masked problem on a log-polar chart. `classify` sees the angular
/// and radial indices plus the mapped plane point; wall crossing is tested on
/// plane-space chords of grid edges.
pub fn log_polar_grid(
    spec: &LogPolarSpec,
    active: &dyn Fn(Point) -> bool,
    classify: &dyn Fn(usize, usize, Point) -> NodeClass,
    walls: &[BoundaryPiece],
) -> ModulusProblem {
    let np = spec.n_phi;
    let ns = spec.s.len();
    let dphi = spec.phi_step();
    let mut id = vec![u32::MAX; np * ns];
    let mut class = Vec::new();
    let mut pos = Vec::new();
    for j in 0..ns {
        for i in 0..np {
            let z = spec.z(i, j);
            if active(z) {
                id[j * np + i] = class.len() as u32;
                class.push(classify(i, j, z));
                pos.push((spec.phi(i), spec.s[j]));
            }
        }
    }
    // chart cell between angular rows i,i+1 (wrap if periodic) and radial
    // columns j,j+1
    let next_phi = |i: usize| -> Option<usize> {
        if i + 1 < np {
            Some(i + 1)
        } else if spec.periodic {
            Some(0)
        } else {
            None
        }
    };
    let n_cells_phi = if spec.periodic { np } else { np - 1 };
    let mut cells = vec![false; n_cells_phi * (ns - 1)];
    let mut dual_area = vec![0.0; class.len()];
    for j in 0..ns - 1 {
        let ds = spec.s[j + 1] - spec.s[j];
        for i in 0..n_cells_phi {
            let i2 = next_phi(i).unwrap();
            let corners = [
                id[j * np + i],
                id[j * np + i2],
                id[(j + 1) * np + i],
                id[(j + 1) * np + i2],
            ];
            if corners.iter().all(|c| *c != u32::MAX) {
                cells[j * n_cells_phi + i] = true;
                let quarter = ds * dphi / 4.0;
                for c in corners {
                    dual_area[c as usize] += quarter;
                }
            }
        }
    }
    let cell_at = |i: usize, j: usize| -> bool {
        if j >= ns - 1 {
            return false;
        }
        cells[j * n_cells_phi + i]
    };
    // cell on the angular side below node-row i (between rows i-1 and i)
    let prev_cell_row = |i: usize| -> Option<usize> {
        if i > 0 {
            Some(i - 1)
        } else if spec.periodic {
            Some(np - 1)
        } else {
            None
        }
    };
    let mut edges = Vec::new();
    let mut push_edge = |a: u32, b: u32, w: f64, za: Point, zb: Point| {
        if w > 0.0 && !walls.iter().any(|wp| wp.crosses_segment(za, zb)) {
            edges.push(Edge { a, b, w });
        }
    };
    for j in 0..ns {
        for i in 0..np {
            let a = id[j * np + i];
            if a == u32::MAX {
                continue;
            }
            // radial edge (i, j) -> (i, j+1)
            if j + 1 < ns {
                let b = id[(j + 1) * np + i];
                if b != u32::MAX {
                    let ds = spec.s[j + 1] - spec.s[j];
                    let mut face = 0.0;
                    if let Some(ip) = prev_cell_row(i) {
                        if cell_at(ip, j) {
                            face += dphi / 2.0;
                        }
                    }
                    if i < n_cells_phi && cell_at(i, j) {
                        face += dphi / 2.0;
                    }
                    push_edge(a, b, face / ds, spec.z(i, j), spec.z(i, j + 1));
                }
            }
            // angular edge (i, j) -> (i+1 mod, j)
            if let Some(i2) = next_phi(i) {
                let cell_col = i; // cells are indexed by their lower angular row
                let b = id[j * np + i2];
                if b != u32::MAX && cell_col < n_cells_phi {
                    let mut face = 0.0;
                    if j > 0 && cell_at(cell_col, j - 1) {
                        face += (spec.s[j] - spec.s[j - 1]) / 2.0;
                    }
                    if j + 1 < ns && cell_at(cell_col, j) {
                        face += (spec.s[j + 1] - spec.s[j]) / 2.0;
                    }
                    push_edge(a, b, face / dphi, spec.z(i, j), spec.z(i2, j));
                }
            }
        }
    }
    ModulusProblem { chart: Chart::LogPolar, grid_h: dphi, class, edges, pos, dual_area }
}

/// Radial coordinates from `s_from` up to `s_to`, spaced `h_fine` near `s_to`
/// and geometrically coarsened (factor `growth`, capped at `h_max`) away from
/// it. Optionally also refined near `s_from`.
pub fn graded_radial(
    s_from: f64,
    s_to: f64,
    h_fine: f64,
    h_max: f64,
    growth: f64,
    fine_at_start: bool,
) -> Vec<f64> {
    assert!(s_to > s_from && h_fine > 0.0 && growth > 1.0 && h_max >= h_fine);
    let span = s_to - s_from;
    let mut steps_end = Vec::new();
    let mut h = h_fine;
    let mut covered = 0.0;
    while covered < span {
        steps_end.push(h);
        covered += h;
        if h < h_max {
            h = (h * growth).min(h_max);
        }
        if !fine_at_start && h >= h_max {
            break;
        }
    }
    let mut steps_start = Vec::new();
    if fine_at_start {
        let mut h = h_fine;
        let mut c = 0.0;
        while c < span / 2.0 && h < h_max {
            steps_start.push(h);
            c += h;
            h = (h * growth).min(h_max);
        }
    }
    let fixed: f64 = steps_end.iter().chain(steps_start.iter()).sum();
    let mut coords = vec![s_to];
    let mut s = s_to;
    for st in &steps_end {
        s -= st;
        if s <= s_from + 1e-12 {
            break;
        }
        coords.push(s);
    }
    if fixed < span {
        // uniform middle section
        let lo = s_from + steps_start.iter().sum::<f64>();
        let hi = s;
        if hi > lo + 1e-12 {
            let n_mid = ((hi - lo) / h_max).ceil().max(1.0) as usize;
            let dm = (hi - lo) / n_mid as f64;
            for k in 1..=n_mid {
                coords.push(hi - k as f64 * dm);
            }
        }
        let mut s2 = lo;
        for st in &steps_start {
            s2 -= st;
            if s2 <= s_from + 1e-12 {
                break;
            }
            coords.push(s2);
        }
    }
    if *coords.last().unwrap() > s_from + 1e-12 {
        coords.push(s_from);
    }
    coords.reverse();
    coords.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    coords
}

#[cfg(test)]
mod solver_tests {
    use super::*;
    use std::f64::consts::PI;

    fn rectangle_problem(h: f64) -> ModulusProblem {
        // 2 x 1 rectangle, E and F the short sides
        let nx = (2.0 / h).round() as usize;
        let ny = (1.0 / h).round() as usize;
        cartesian_grid(
            Point::new(0.0, 0.0),
            nx,
            ny,
            h,
            &|_| true,
            &|p| {
                if p.x <= 1e-12 {
                    NodeClass::Zero
                } else if p.x >= 2.0 - 1e-12 {
                    NodeClass::One
                } else {
                    NodeClass::Interior
                }
            },
            &[],
        )
    }

    #[test]
    fn rectangle_modulus_is_aspect_ratio() {
        let p = rectangle_problem(1.0 / 64.0);
        let m = extremal_distance(&p).unwrap();
        assert!((m - 2.0).abs() < 0.02 * 2.0, "got {m}");
        // the finite-volume weights actually make this exact
        assert!((m - 2.0).abs() < 1e-8, "got {m}");
    }

    fn annulus_spec(eps: f64, n_phi: usize) -> LogPolarSpec {
        let s: Vec<f64> = graded_radial(eps.ln(), 0.0, 0.02, 0.02, 1.5, false);
        LogPolarSpec {
            center: Point::new(0.0, 0.0),
            s,
            phi0: 0.0,
            phi_span: 2.0 * PI,
            n_phi,
            periodic: true,
        }
    }

    fn annulus_problem(eps: f64, walls: &[BoundaryPiece]) -> ModulusProblem {
        let spec = annulus_spec(eps, 256);
        let ns = spec.s.len();
        log_polar_grid(
            &spec,
            &|_| true,
            &|_, j, _| {
                if j == 0 {
                    NodeClass::Zero
                } else if j == ns - 1 {
                    NodeClass::One
                } else {
                    NodeClass::Interior
                }
            },
            walls,
        )
    }

    #[test]
    fn annulus_modulus() {
        let eps = 1e-2;
        let m = extremal_distance(&annulus_problem(eps, &[])).unwrap();
        let exact = (1.0 / eps).ln() / (2.0 * PI);
        assert!((m - exact).abs() < 0.01 * exact, "got {m}, want {exact}");
    }

    #[test]
    fn radial_slits_leave_annulus_modulus_unchanged() {
        let eps = 1e-2;
        let mut walls = Vec::new();
        for k in 0..4 {
            let ang = k as f64 * PI / 2.0 + 0.1;
            walls.push(
                BoundaryPiece::segment(Point::from_polar(eps, ang), Point::from_polar(1.0, ang))
                    .unwrap(),
            );
        }
        let m = extremal_distance(&annulus_problem(eps, &walls)).unwrap();
        let exact = (1.0 / eps).ln() / (2.0 * PI);
        assert!((m - exact).abs() < 0.01 * exact, "got {m}, want {exact}");
    }

    #[test]
    fn scaling_leaves_modulus_unchanged() {
        // same rectangle scaled by 3: identical discrete problem
        let h = 1.0 / 32.0;
        let m1 = extremal_distance(&rectangle_problem(h)).unwrap();
        let s = 3.0;
        let nx = (2.0 / h).round() as usize;
        let ny = (1.0 / h).round() as usize;
        let p2 = cartesian_grid(
            Point::new(0.0, 0.0),
            nx,
            ny,
            h * s,
            &|_| true,
            &|p| {
                if p.x <= 1e-12 {
                    NodeClass::Zero
                } else if p.x >= s * 2.0 - 1e-12 {
                    NodeClass::One
                } else {
                    NodeClass::Interior
                }
            },
            &[],
        );
        let m2 = extremal_distance(&p2).unwrap();
        assert!((m1 - m2).abs() < 1e-10);
    }

    #[test]
    fn disconnected_mask_is_reported() {
        // two separated strips, E in one, F in the other
        let p = cartesian_grid(
            Point::new(0.0, 0.0),
            20,
            10,
            0.1,
            &|q| q.x < 0.65 || q.x > 1.35,
            &|q| {
                if q.x <= 1e-12 {
                    NodeClass::Zero
                } else if q.x >= 2.0 - 1e-12 {
                    NodeClass::One
                } else {
                    NodeClass::Interior
                }
            },
            &[],
        );
        assert!(matches!(extremal_distance(&p), Err(Error::DisconnectedMask)));
    }

    #[test]
    fn grid_convergence_rectangle_with_slit() {
        // slit composition changes the modulus smoothly under refinement
        let run = |h: f64| {
            let nx = (2.0 / h).round() as usize;
            let ny = (1.0 / h).round() as usize;
            let wall = [BoundaryPiece::segment(Point::new(1.0, 0.0), Point::new(1.0, 0.6)).unwrap()];
            let p = cartesian_grid(
                Point::new(0.0, 0.0),
                nx,
                ny,
                h,
                &|_| true,
                &|q| {
                    if q.x <= 1e-12 {
                        NodeClass::Zero
                    } else if q.x >= 2.0 - 1e-12 {
                        NodeClass::One
                    } else {
                        NodeClass::Interior
                    }
                },
                &wall,
            );
            extremal_distance(&p).unwrap()
        };
        let coarse = run(1.0 / 64.0);
        let fine = run(1.0 / 128.0);
        // tip singularity limits the order; 2% is the near-slit tolerance
        assert!((coarse - fine).abs() / fine < 0.02, "coarse {coarse} fine {fine}");
        assert!(fine > 2.0); // the slit lengthens the crossing family
    }
}
