//! Diffraction of a plane wave by the edge `{y = 0, x ≥ a}` with no waveguide.
//!
//! In parabolic coordinates the field is
//!
//! ```text
//! ψ = C₀ [e^{-iky} F(ξ) ∓ e^{iky} F(η)]
//! ```
//!
//! with the minus sign for a Dirichlet edge and the plus sign for a Neumann
//! edge. On the edge ray `ξ = η` and `y = 0`, so the Dirichlet combination
//! cancels exactly and the `y`-derivative of the Neumann one does too.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::{to_parabolic, PlanePoint, Side};
use crate::grid::{Exclusion, FieldGrid, GridSpec, NodeKind};
use crate::specfun::{fresnel_f, fresnel_f_derivative};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    #[default]
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    fn sign(self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => -1.0,
            BoundaryCondition::Neumann => 1.0,
        }
    }
}

/// The closed-form diffracted field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SommerfeldField {
    k: f64,
    a: f64,
    bc: BoundaryCondition,
    c0: Complex64,
}

impl SommerfeldField {
    pub fn new(k: f64, a: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!("wavenumber must be positive, got {k}")));
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter(format!("edge tip must satisfy a >= 0, got {a}")));
        }
        Ok(Self {
            k,
            a,
            bc,
            c0: Complex64::new(1.0, 0.0),
        })
    }

    pub fn with_amplitude(mut self, c0: Complex64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// `ψ(x, y)`; points on the edge ray take their face from `side`.
    pub fn eval(&self, x: f64, y: f64, side: Side) -> Result<Complex64> {
        let c = to_parabolic(PlanePoint::new(x, y, self.a), side)?;
        self.eval_parabolic(c.xi, c.eta, y)
    }

    /// `ψ` in terms of the coordinates, with `y = ξ² - η²` supplied exactly.
    pub fn eval_parabolic(&self, xi: Complex64, eta: Complex64, y: f64) -> Result<Complex64> {
        let phase = Complex64::from_polar(1.0, self.k * y);
        let f_xi = fresnel_f(self.k, xi)?.value;
        let f_eta = fresnel_f(self.k, eta)?.value;
        Ok(self.c0 * (phase.conj() * f_xi + self.bc.sign() * phase * f_eta))
    }

    /// Analytic gradient `(∂ₓψ, ∂ᵧψ)`.
    pub fn gradient(&self, x: f64, y: f64, side: Side) -> Result<(Complex64, Complex64)> {
        let c = to_parabolic(PlanePoint::new(x, y, self.a), side)?;
        let (xi, eta) = (c.xi, c.eta);
        let two_rho = 2.0 * (xi * xi + eta * eta);
        let phase = Complex64::from_polar(1.0, self.k * y);
        let ik = Complex64::new(0.0, self.k);
        let f_xi = fresnel_f(self.k, xi)?.value;
        let f_eta = fresnel_f(self.k, eta)?.value;
        let d_xi = fresnel_f_derivative(self.k, xi);
        let d_eta = fresnel_f_derivative(self.k, eta);
        let sign = self.bc.sign();
        // dξ/dx = η/2ρ, dη/dx = ξ/2ρ, dξ/dy = ξ/2ρ, dη/dy = -η/2ρ
        let dx = phase.conj() * d_xi * eta / two_rho + sign * phase * d_eta * xi / two_rho;
        let dy = phase.conj() * (d_xi * xi / two_rho - ik * f_xi)
            + sign * phase * (ik * f_eta - d_eta * eta / two_rho);
        Ok((self.c0 * dx, self.c0 * dy))
    }

    /// Samples the field on a grid. Edge nodes hold zero for a Dirichlet
    /// edge and the upper-face value for a Neumann edge.
    pub fn field_on_grid(&self, spec: GridSpec) -> Result<FieldGrid> {
        let mask = spec.mask(Some(self.a), false);
        let specials = [self.a];
        let values = (0..spec.len())
            .into_par_iter()
            .map(|n| {
                let (i, j) = (n % spec.nx, n / spec.nx);
                let (x, y) = (spec.x_snapped(i, &specials), spec.y(j));
                if mask[n] == NodeKind::Edge {
                    return match self.bc {
                        BoundaryCondition::Dirichlet => Ok(Complex64::new(0.0, 0.0)),
                        BoundaryCondition::Neumann if x == self.a => {
                            let f0 = fresnel_f(self.k, Complex64::new(0.0, 0.0))?.value;
                            Ok(self.c0 * 2.0 * f0)
                        }
                        BoundaryCondition::Neumann => self.eval(x, y, Side::Top),
                    };
                }
                self.eval(x, y, Side::Auto)
            })
            .collect::<Result<Vec<_>>>()?;
        FieldGrid::new(spec, values, mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// Largest nodal `|(Δ_h + E)ψ|`.
    pub max: f64,
    /// Area-weighted discrete L2 norm of the residual.
    pub l2: f64,
    pub nodes: usize,
    /// Set when `max(dx, dy)·√|E| > 0.5`.
    pub coarse: bool,
}

/// Five-point residual `(Δ_h + E)ψ` over the interior nodes not excluded.
pub fn helmholtz_residual(grid: &FieldGrid, energy: f64, exclusion: &Exclusion) -> Result<ResidualReport> {
    let spec = grid.spec;
    let (hx2, hy2) = (spec.dx * spec.dx, spec.dy * spec.dy);
    let specials: Vec<f64> = exclusion.edge_tip.into_iter().collect();
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    let mut nodes = 0;
    for j in 1..spec.ny - 1 {
        let y = spec.y(j);
        for i in 1..spec.nx - 1 {
            let x = spec.x_snapped(i, &specials);
            if exclusion.excludes(&spec, x, y) {
                continue;
            }
            let c = grid.at(i, j);
            let lap = (grid.at(i - 1, j) + grid.at(i + 1, j) - 2.0 * c) / hx2
                + (grid.at(i, j - 1) + grid.at(i, j + 1) - 2.0 * c) / hy2;
            let r = (lap + energy * c).norm();
            max = max.max(r);
            sum += r * r;
            nodes += 1;
        }
    }
    if nodes == 0 {
        return Err(Error::GridMismatch("no interior nodes left after exclusion".into()));
    }
    Ok(ResidualReport {
        max,
        l2: (sum * spec.dx * spec.dy).sqrt(),
        nodes,
        coarse: spec.dx.max(spec.dy) * energy.abs().sqrt() > 0.5,
    })
}
