//! The tail-stability scaling measured directly on finite-difference
//! solutions, without perturbation theory.
//!
//! For each edge position `a` the guided wave `e^{-α|x|} e^{iky}` is imposed
//! on the outer boundary and the problem is solved with and without a
//! Dirichlet edge at `{y = 0, x ≥ a}`. The difference is the scattered
//! field; its projection on the transverse bound state along a probe row
//! far from the edge is the amplitude that is fitted against `a`.

use num_complex::Complex64;

use super::{run, FdProblem};
use crate::fit::fit_line;
use crate::green::TailScanResult;
use crate::grid::GridSpec;
use crate::sommerfeld::BoundaryCondition;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdTailConfig {
    pub alpha: f64,
    pub k: f64,
    /// Cells per unit `1/α`.
    pub cells_per_decay: usize,
    /// Domain `x ∈ [-left/α, right/α]`, `y ∈ [-half_height/α, half_height/α]`.
    pub left: f64,
    pub right: f64,
    pub half_height: f64,
    /// Probe row `y = probe/α`.
    pub probe: f64,
}

impl FdTailConfig {
    pub fn new(alpha: f64, k: f64) -> Self {
        Self {
            alpha,
            k,
            cells_per_decay: 10,
            left: 5.0,
            right: 8.0,
            half_height: 20.0,
            probe: 10.0,
        }
    }

    fn grid(&self) -> Result<GridSpec> {
        let h = 1.0 / (self.alpha * self.cells_per_decay as f64);
        let n = self.cells_per_decay as f64;
        let nx = ((self.left + self.right) * n).round() as usize + 1;
        let ny = (2.0 * self.half_height * n).round() as usize + 1;
        GridSpec::new(-self.left / self.alpha, -self.half_height / self.alpha, h, h, nx, ny)
    }
}

/// Bound-channel amplitude of the edge-scattered field for each position.
pub fn fd_tail_scan(cfg: &FdTailConfig, positions: &[f64], tol: f64) -> Result<TailScanResult> {
    if positions.len() < 4 {
        return Err(Error::InvalidParameter("tail scan needs at least 4 positions".into()));
    }
    if positions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("positions must be strictly increasing".into()));
    }
    let (alpha, k) = (cfg.alpha, cfg.k);
    let grid = cfg.grid()?;
    let energy = k * k - alpha * alpha;
    let guided = move |x: f64, y: f64, _| Ok((-alpha * x.abs()).exp() * Complex64::from_polar(1.0, k * y));
    let problem = |edge: Option<f64>| {
        let p = FdProblem::new(grid, energy)
            .with_delta_line(alpha)
            .with_boundary(guided);
        match edge {
            Some(a) => p.with_edge(a, BoundaryCondition::Dirichlet),
            None => p,
        }
    };
    let free = run(&problem(None), tol)?.field;
    let row = grid
        .row_of(cfg.probe / alpha)
        .ok_or(Error::Misaligned { what: "the probe row", value: cfg.probe / alpha })?;
    let mut amplitudes = Vec::with_capacity(positions.len());
    for &a in positions {
        let edged = run(&problem(Some(a)), tol)?.field;
        // trapezoidal projection on √α e^{-α|x|}
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..grid.nx {
            let w = if i == 0 || i + 1 == grid.nx { 0.5 } else { 1.0 };
            let phi0 = alpha.sqrt() * (-alpha * grid.x(i).abs()).exp();
            sum += w * phi0 * (edged.at(i, row) - free.at(i, row));
        }
        amplitudes.push((sum * grid.dx).norm());
    }
    if amplitudes.iter().all(|v| *v < 1e-300) {
        return Err(Error::DegenerateFit("all amplitudes underflow".into()));
    }
    let logs: Vec<f64> = amplitudes.iter().map(|v| v.ln()).collect();
    let fit = fit_line(positions, &logs)?;
    Ok(TailScanResult {
        positions: positions.to_vec(),
        amplitudes,
        slope: fit.slope,
        residual: fit.residual,
    })
}
