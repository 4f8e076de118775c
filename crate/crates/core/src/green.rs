//! Green's function of `-Δ - 2αδ(x) - E` in the transverse eigenbasis, and
//! the first-order correction to the guided wave from a point impurity.
//!
//! The transverse operator has the bound state `φ₀ = √α e^{-α|x|}` at
//! `-α²` and two continua at `p² > 0`,
//!
//! ```text
//! odd:  sin(px) / √π,    even: cos(p|x| + δ_p) / √π,   tan δ_p = α / p,
//! ```
//!
//! normalised against `∫₀^∞ dp`. Each channel propagates along `y` with the
//! one-dimensional Green's function `g(y; μ) = e^{-s|y|} / (2s)`,
//! `s = √(-μ - i0)`, which is outgoing when the channel is open (`μ > 0`).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fit::fit_line;
use crate::geometry::PlanePoint;
use crate::quad::composite_gl16;
use crate::{Error, Result};

/// Panel doubling stops once successive estimates agree to this.
const CONTINUUM_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 1 << 14;
/// `e^{-40}` is below the doubling tolerance by many decades.
const DECAY_LENGTHS: f64 = 40.0;

/// One-dimensional Green's function `g(y; μ)` with the outgoing choice.
pub fn g1(y: f64, mu: f64) -> Complex64 {
    if mu < 0.0 {
        let s = (-mu).sqrt();
        Complex64::new((-s * y.abs()).exp() / (2.0 * s), 0.0)
    } else {
        let q = mu.sqrt();
        Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, q * y.abs()) / (2.0 * q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGreen {
    alpha: f64,
    energy: f64,
    p_max: f64,
}

/// A Green's function value with the change seen at the last panel doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue {
    pub value: Complex64,
    pub bound: Complex64,
    pub est_abs_error: f64,
}

impl ChannelGreen {
    pub fn new(alpha: f64, energy: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !energy.is_finite() || energy + alpha * alpha == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "energy {energy} sits on the bound-channel threshold"
            )));
        }
        Ok(Self {
            alpha,
            energy,
            p_max: 20.0 * alpha,
        })
    }

    /// Minimum momentum cutoff; the cutoff actually used also grows with
    /// `1/|y - y'|` so that the neglected tail stays below `e^{-40}`.
    pub fn with_p_max(mut self, p_max: f64) -> Self {
        self.p_max = p_max;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Normalised transverse bound state.
    pub fn phi0(&self, x: f64) -> f64 {
        self.alpha.sqrt() * (-self.alpha * x.abs()).exp()
    }

    /// `Σ_parity φ_p(x) φ_p(x')`.
    fn continuum_kernel(&self, p: f64, x: f64, xp: f64) -> f64 {
        let delta = (self.alpha / p).atan();
        ((p * x).sin() * (p * xp).sin() + (p * x.abs() + delta).cos() * (p * xp.abs() + delta).cos()) / PI
    }

    /// `G(to; from)`. Points on the source row are not supported: the
    /// continuum integral converges only conditionally there.
    pub fn eval(&self, from: PlanePoint, to: PlanePoint) -> Result<GreenValue> {
        let (xp, yp, x, y) = (from.x, from.y, to.x, to.y);
        if x == xp && y == yp {
            return Err(Error::Coincident { x, y });
        }
        let dy = (y - yp).abs();
        if dy == 0.0 {
            return Err(Error::InvalidParameter(
                "observation point on the source row (y = y')".into(),
            ));
        }
        let bound = g1(dy, self.energy + self.alpha * self.alpha) * (self.phi0(x) * self.phi0(xp));
        let p_max = self.p_max.max(DECAY_LENGTHS / dy);
        let e = self.energy;
        let kernel = |p: f64| self.continuum_kernel(p, x, xp);
        let (continuum, est) = if e > 0.0 {
            // open continuum for p < √E; p = √E sin θ removes the 1/√ singularity
            let root = e.sqrt();
            let (open, e1) = doubled(
                &|t: f64| {
                    Complex64::new(0.0, 0.5) * Complex64::from_polar(1.0, root * t.cos() * dy) * kernel(root * t.sin())
                },
                0.0,
                0.5 * PI,
            )?;
            // closed continuum above, p = √E cosh t
            let (closed, e2) = doubled(
                &|t: f64| Complex64::new(0.5 * (-root * t.sinh() * dy).exp() * kernel(root * t.cosh()), 0.0),
                0.0,
                (p_max / root).max(1.0).acosh(),
            )?;
            (open + closed, e1 + e2)
        } else {
            doubled(&|p: f64| g1(dy, e - p * p) * kernel(p), 0.0, p_max)?
        };
        Ok(GreenValue {
            value: bound + continuum,
            bound,
            est_abs_error: est,
        })
    }
}

fn doubled(f: &dyn Fn(f64) -> Complex64, lo: f64, hi: f64) -> Result<(Complex64, f64)> {
    let mut panels = 8;
    let mut prev = composite_gl16(&f, lo, hi, panels);
    loop {
        panels *= 2;
        let next = composite_gl16(&f, lo, hi, panels);
        let change = (next - prev).norm();
        if change <= CONTINUUM_TOL * next.norm().max(1.0) {
            return Ok((next, change));
        }
        if panels >= MAX_PANELS {
            return Err(Error::Quadrature {
                partial: next,
                error: change,
                subdivisions: panels,
            });
        }
        prev = next;
    }
}

/// First-order change of the guided wave `e^{-α|x|} e^{iky}` caused by the
/// impurity `λ δ(x - a) δ(y)`:
/// `ψ¹(r) = -λ G(r; a, 0) ψ₀(a, 0)`.
pub fn born_correction(alpha: f64, k: f64, strength: f64, a: f64, probe: PlanePoint) -> Result<Complex64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("impurity position must be positive, got {a}")));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    let green = ChannelGreen::new(alpha, k * k - alpha * alpha)?;
    let g = green.eval(PlanePoint::new(a, 0.0, a), probe)?;
    let psi0 = (-alpha * a).exp();
    Ok(-strength * psi0 * g.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailScanResult {
    pub positions: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Slope of `ln |ψ¹|` against `a`.
    pub slope: f64,
    /// RMS residual of the fit.
    pub residual: f64,
}

/// `|ψ¹(probe)|` for each impurity position, and the exponential rate fitted
/// to it.
pub fn tail_scan(alpha: f64, k: f64, strength: f64, positions: &[f64], probe: PlanePoint) -> Result<TailScanResult> {
    if positions.len() < 4 {
        return Err(Error::InvalidParameter("tail scan needs at least 4 positions".into()));
    }
    if positions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("positions must be strictly increasing".into()));
    }
    let amplitudes = positions
        .par_iter()
        .map(|&a| born_correction(alpha, k, strength, a, probe).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?;
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
