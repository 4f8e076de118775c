//! A five-point finite-difference solver for
//! `(-Δ - 2αδ(x) - E) ψ = f` with an optional edge on `{y = 0, x ≥ a}` and
//! Dirichlet data on the outer boundary.
//!
//! The delta line is a potential column `-2α/dx` on the `x = 0` nodes. A
//! Dirichlet edge pins its nodes to zero. A Neumann edge gives every edge
//! node to the right of the tip two unknowns, one per face, each closed with
//! a mirror ghost; their rows are halved so the matrix stays symmetric.
//! Pinned values are moved to the right-hand side.

mod compare;
mod tail;

pub use compare::{compare, CompareReport, RegionReport};
pub use tail::{fd_tail_scan, FdTailConfig};

use faer::sparse::{SparseColMat, Triplet};
use faer::linalg::solvers::Solve;
use faer::{Col, Mat};
use num_complex::Complex64;

use crate::geometry::Side;
use crate::grid::{FieldGrid, GridSpec, NodeKind};
use crate::sommerfeld::BoundaryCondition;
use crate::{Error, Result};

/// Largest accepted `max(dx, dy) · √(|E| + α²)`.
pub const MAX_RESOLUTION: f64 = 0.5;

type Sampler<'a> = Box<dyn Fn(f64, f64, Side) -> Result<Complex64> + Sync + 'a>;

pub struct FdProblem<'a> {
    pub grid: GridSpec,
    /// Decay rate of the delta line at `x = 0`, if present.
    pub alpha: Option<f64>,
    /// Tip abscissa and condition of the edge, if present.
    pub edge: Option<(f64, BoundaryCondition)>,
    pub energy: f64,
    boundary: Option<Sampler<'a>>,
    source: Option<Box<dyn Fn(f64, f64) -> Complex64 + Sync + 'a>>,
}

impl<'a> FdProblem<'a> {
    pub fn new(grid: GridSpec, energy: f64) -> Self {
        Self {
            grid,
            alpha: None,
            edge: None,
            energy,
            boundary: None,
            source: None,
        }
    }

    pub fn with_delta_line(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_edge(mut self, a: f64, bc: BoundaryCondition) -> Self {
        self.edge = Some((a, bc));
        self
    }

    /// Dirichlet data on the outer boundary. Without it the data is zero.
    pub fn with_boundary(mut self, f: impl Fn(f64, f64, Side) -> Result<Complex64> + Sync + 'a) -> Self {
        self.boundary = Some(Box::new(f));
        self
    }

    /// Right-hand side `f`; zero by default.
    pub fn with_source(mut self, f: impl Fn(f64, f64) -> Complex64 + Sync + 'a) -> Self {
        self.source = Some(Box::new(f));
        self
    }

    fn check(&self) -> Result<()> {
        let g = &self.grid;
        let alpha = self.alpha.unwrap_or(0.0);
        if self.alpha.is_some() {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
            }
            if g.column_of(0.0).is_none() {
                return Err(Error::Misaligned {
                    what: "the delta line x = 0",
                    value: 0.0,
                });
            }
        }
        if let Some((a, _)) = self.edge {
            if g.column_of(a).is_none() {
                return Err(Error::Misaligned {
                    what: "the edge tip x = a",
                    value: a,
                });
            }
            if g.row_of(0.0).is_none() {
                return Err(Error::Misaligned {
                    what: "the edge row y = 0",
                    value: 0.0,
                });
            }
        }
        let resolution = g.dx.max(g.dy) * (self.energy.abs() + alpha * alpha).sqrt();
        if resolution > MAX_RESOLUTION {
            return Err(Error::Resolution(resolution));
        }
        Ok(())
    }

    pub fn mask(&self) -> Vec<NodeKind> {
        self.grid.mask(self.edge.map(|e| e.0), self.alpha.is_some())
    }

    fn x(&self, i: usize) -> f64 {
        let specials: Vec<f64> = self.edge.map(|e| e.0).into_iter().collect();
        self.grid.x_snapped(i, &specials)
    }

    fn boundary_value(&self, i: usize, j: usize, side: Side) -> Result<Complex64> {
        match &self.boundary {
            Some(f) => f(self.x(i), self.grid.y(j), side),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }
}

/// What a stencil neighbour refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Unknown(usize),
    Pinned(Complex64),
}

/// Unknown numbering for the grid, including the lower copies of Neumann
/// edge nodes.
struct Layout {
    top: Vec<Option<usize>>,
    bottom: Vec<Option<usize>>,
    pinned_top: Vec<Complex64>,
    pinned_bottom: Vec<Complex64>,
    dim: usize,
}

/// Sparse system in triplet form, with the layout needed to map back.
pub struct SparseSystem {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
    pub rhs: Vec<Complex64>,
    layout: Layout,
    mask: Vec<NodeKind>,
    grid: GridSpec,
}

impl SparseSystem {
    /// Nonzero count of each row.
    pub fn row_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim];
        for &(r, _, _) in &self.entries {
            counts[r] += 1;
        }
        counts
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        use std::collections::HashMap;
        let mut map: HashMap<(usize, usize), Complex64> = HashMap::new();
        for &(r, c, v) in &self.entries {
            *map.entry((r, c)).or_default() += v;
        }
        map.iter()
            .map(|(&(r, c), v)| (v - map.get(&(c, r)).copied().unwrap_or_default()).norm())
            .fold(0.0, f64::max)
    }

    /// The operator applied to a full set of unknowns.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }
}

pub fn assemble(p: &FdProblem<'_>) -> Result<SparseSystem> {
    p.check()?;
    let g = p.grid;
    let mask = p.mask();
    let neumann_tip = match p.edge {
        Some((a, BoundaryCondition::Neumann)) => Some(a),
        _ => None,
    };
    let edge_row = p.edge.and_then(|_| g.row_of(0.0));

    // number the unknowns
    let n = g.len();
    let mut layout = Layout {
        top: vec![None; n],
        bottom: vec![None; n],
        pinned_top: vec![Complex64::new(0.0, 0.0); n],
        pinned_bottom: vec![Complex64::new(0.0, 0.0); n],
        dim: 0,
    };
    let on_boundary = |i: usize, j: usize| i == 0 || j == 0 || i + 1 == g.nx || j + 1 == g.ny;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let idx = g.index(i, j);
            let x = p.x(i);
            match mask[idx] {
                NodeKind::Edge => match neumann_tip {
                    None => {}
                    Some(_) if on_boundary(i, j) => {
                        layout.pinned_top[idx] = p.boundary_value(i, j, Side::Top)?;
                        layout.pinned_bottom[idx] = p.boundary_value(i, j, Side::Bottom)?;
                    }
                    Some(a) => {
                        layout.top[idx] = Some(layout.dim);
                        layout.dim += 1;
                        if x > a {
                            layout.bottom[idx] = Some(layout.dim);
                            layout.dim += 1;
                        }
                    }
                },
                NodeKind::OuterBoundary => {
                    let v = p.boundary_value(i, j, Side::Auto)?;
                    layout.pinned_top[idx] = v;
                    layout.pinned_bottom[idx] = v;
                }
                NodeKind::Interior | NodeKind::DeltaLine => {
                    layout.top[idx] = Some(layout.dim);
                    layout.dim += 1;
                }
            }
        }
    }

    let slot = |idx: usize, lower: bool| -> Slot {
        let (u, pin) = if lower {
            (layout.bottom[idx].or(layout.top[idx]), layout.pinned_bottom[idx])
        } else {
            (layout.top[idx], layout.pinned_top[idx])
        };
        match u {
            Some(u) => Slot::Unknown(u),
            None => Slot::Pinned(pin),
        }
    };

    let (cx, cy) = (1.0 / (g.dx * g.dx), 1.0 / (g.dy * g.dy));
    let delta = p.alpha.map(|a| -2.0 * a / g.dx);
    let mut entries = Vec::with_capacity(5 * layout.dim);
    let mut rhs = vec![Complex64::new(0.0, 0.0); layout.dim];

    for j in 0..g.ny {
        for i in 0..g.nx {
            let idx = g.index(i, j);
            let x = p.x(i);
            let y = g.y(j);
            let potential = match delta {
                Some(v) if x == 0.0 => v,
                _ => 0.0,
            };
            let diag = 2.0 * cx + 2.0 * cy + potential - p.energy;
            let f = p.source.as_ref().map_or(Complex64::new(0.0, 0.0), |s| s(x, y));
            let in_edge_row = edge_row == Some(j);
            let is_edge_copy = mask[idx] == NodeKind::Edge && layout.bottom[idx].is_some();

            if is_edge_copy {
                // halved mirror rows for the two faces
                for lower in [false, true] {
                    let row = if lower { layout.bottom[idx] } else { layout.top[idx] }.expect("copy");
                    entries.push((row, row, Complex64::new(0.5 * diag, 0.0)));
                    rhs[row] += 0.5 * f;
                    add(row, slot(g.index(i - 1, j), lower), -0.5 * cx, &mut entries, &mut rhs);
                    add(row, slot(g.index(i + 1, j), lower), -0.5 * cx, &mut entries, &mut rhs);
                    let off = if lower { g.index(i, j - 1) } else { g.index(i, j + 1) };
                    add(row, slot(off, false), -cy, &mut entries, &mut rhs);
                }
                continue;
            }
            let Some(row) = layout.top[idx] else { continue };
            entries.push((row, row, Complex64::new(diag, 0.0)));
            rhs[row] += f;
            // horizontal neighbours; the tip's right neighbour is split
            // between the two faces
            for ni in [i - 1, i + 1] {
                let nidx = g.index(ni, j);
                let split = in_edge_row
                    && mask[nidx] == NodeKind::Edge
                    && neumann_tip.is_some_and(|a| p.x(ni) > a);
                if split {
                    add(row, slot(nidx, false), -0.5 * cx, &mut entries, &mut rhs);
                    add(row, slot(nidx, true), -0.5 * cx, &mut entries, &mut rhs);
                } else {
                    add(row, slot(nidx, false), -cx, &mut entries, &mut rhs);
                }
            }
            // vertical neighbours: a node below the ray sees its lower face
            add(row, slot(g.index(i, j - 1), false), -cy, &mut entries, &mut rhs);
            add(row, slot(g.index(i, j + 1), true), -cy, &mut entries, &mut rhs);
        }
    }

    Ok(SparseSystem {
        dim: layout.dim,
        entries,
        rhs,
        layout,
        mask,
        grid: g,
    })
}

fn add(row: usize, s: Slot, coef: f64, entries: &mut Vec<(usize, usize, Complex64)>, rhs: &mut [Complex64]) {
    match s {
        Slot::Unknown(c) => entries.push((row, c, Complex64::new(coef, 0.0))),
        Slot::Pinned(v) => rhs[row] -= coef * v,
    }
}

/// Solution of an [`FdProblem`]: the field on the grid (upper face on a
/// Neumann edge) and the lower-face values of the edge nodes.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub field: FieldGrid,
    pub lower_face: Vec<(usize, Complex64)>,
    pub relative_residual: f64,
}

/// Sparse LU solve with one step of iterative refinement.
pub fn solve(s: &SparseSystem, tol: f64) -> Result<FdSolution> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(Error::InvalidParameter(format!("solver tolerance {tol} outside [1e-12, 1e-6]")));
    }
    let (x, relative_residual) = solve_raw(s, tol)?;
    let g = s.grid;
    let mut values = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut lower_face = Vec::new();
    for idx in 0..g.len() {
        values[idx] = match s.layout.top[idx] {
            Some(u) => x[u],
            None => s.layout.pinned_top[idx],
        };
        if let Some(u) = s.layout.bottom[idx] {
            lower_face.push((idx, x[u]));
        }
    }
    Ok(FdSolution {
        field: FieldGrid::new(g, values, s.mask.clone())?,
        lower_face,
        relative_residual,
    })
}

fn solve_raw(s: &SparseSystem, tol: f64) -> Result<(Vec<Complex64>, f64)> {
    solve_triplets(s.dim, &s.entries, &s.rhs, tol)
}

/// Solves `A x = b` for `A` given as (row, column, value) triplets, with
/// duplicates summed.
pub fn solve_triplets(
    dim: usize,
    entries: &[(usize, usize, Complex64)],
    rhs: &[Complex64],
    tol: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let b_norm = rhs.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if dim == 0 || b_norm == 0.0 {
        return Ok((vec![Complex64::new(0.0, 0.0); dim], 0.0));
    }
    let triplets: Vec<Triplet<usize, usize, Complex64>> =
        entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
    let a = SparseColMat::<usize, Complex64>::try_new_from_triplets(dim, dim, &triplets)
        .map_err(|e| Error::InvalidParameter(format!("sparse assembly failed: {e:?}")))?;
    let lu = a
        .sp_lu()
        .map_err(|e| Error::InvalidParameter(format!("sparse factorisation failed: {e:?}")))?;
    let b = Col::<Complex64>::from_fn(dim, |i| rhs[i]);
    let residual = |x: &Col<Complex64>| -> Col<Complex64> { &b - &a * x };
    let mut x = lu.solve(&b);
    let r = residual(&x);
    x += lu.solve(&r);
    let achieved = residual(&x).norm_l2() / b_norm;
    if !(achieved <= tol) {
        return Err(Error::Solver { achieved, tol });
    }
    Ok(((0..dim).map(|i| x[i]).collect(), achieved))
}

/// Assembles and solves in one step.
pub fn run(p: &FdProblem<'_>, tol: f64) -> Result<FdSolution> {
    solve(&assemble(p)?, tol)
}

/// Lowest eigenpair of the discrete transverse operator
/// `-D² - (2α/dx) δ_{x,0}` on `n` nodes centred on the well, with zero
/// ends.
pub fn transverse_bound_state(alpha: f64, dx: f64, n: usize) -> Result<(f64, Vec<f64>)> {
    if n < 3 || n % 2 == 0 || n > 4001 {
        return Err(Error::InvalidParameter(format!("need an odd node count in [3, 4001], got {n}")));
    }
    let c = 1.0 / (dx * dx);
    let mid = n / 2;
    let m = Mat::<f64>::from_fn(n, n, |r, col| {
        if r == col {
            2.0 * c - if r == mid { 2.0 * alpha / dx } else { 0.0 }
        } else if r.abs_diff(col) == 1 {
            -c
        } else {
            0.0
        }
    });
    let eig = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::InvalidParameter(format!("eigensolver failed: {e:?}")))?;
    let energy = eig.S()[0];
    let mut v: Vec<f64> = (0..n).map(|r| eig.U()[(r, 0)]).collect();
    if v[mid] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok((energy, v))
}

/// Exact lowest eigenvalue of the discrete transverse operator on an
/// unbounded lattice, `-(2√(1 + α²dx²) - 2)/dx²`.
pub fn lattice_bound_energy(alpha: f64, dx: f64) -> f64 {
    -(2.0 * (1.0 + alpha * alpha * dx * dx).sqrt() - 2.0) / (dx * dx)
}

#[cfg(test)]
mod tests;
