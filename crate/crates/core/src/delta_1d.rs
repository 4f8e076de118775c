//! The transverse Hamiltonian `-∂ₓ² - g δ(x)`.
//!
//! The well is parametrised by the decay rate `α` of its bound state
//! `e^{-α|x|}`; the matching condition `ψ'(0⁺) - ψ'(0⁻) = -g ψ(0)` then
//! fixes the delta strength to `g = 2α`. With that convention the bound
//! energy is `-α²` and the scattering coefficients have their pole at
//! `p = iα`.

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaWell {
    alpha: f64,
}

/// Coefficients of the scattering state `e^{ipx} + A e^{-ipx}` / `B e^{ipx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringCoefficients {
    pub p: f64,
    pub a: Complex64,
    pub b: Complex64,
}

impl ScatteringCoefficients {
    pub fn flux(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

impl DeltaWell {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decay rate must be positive, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Delta-potential coefficient `g = 2α`.
    pub fn strength(&self) -> f64 {
        2.0 * self.alpha
    }

    /// Bound-state energy `-α²`.
    pub fn bound_energy(&self) -> f64 {
        -self.alpha * self.alpha
    }

    /// Unnormalised bound state `e^{-α|x|}`.
    pub fn psi0(&self, x: f64) -> f64 {
        (-self.alpha * x.abs()).exp()
    }

    /// `A = iα/(p - iα)`, `B = p/(p - iα)` for a continuum momentum `p > 0`.
    pub fn scattering_coeffs(&self, p: f64) -> Result<ScatteringCoefficients> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scattering momentum must be positive, got {p}"
            )));
        }
        let (a, b) = self.coefficients_at(Complex64::new(p, 0.0));
        Ok(ScatteringCoefficients { p, a, b })
    }

    /// Analytic continuation of `(A, B)` to complex momentum.
    pub fn coefficients_at(&self, p: Complex64) -> (Complex64, Complex64) {
        let ia = Complex64::new(0.0, self.alpha);
        let denom = p - ia;
        (ia / denom, p / denom)
    }

    /// Pole of the S-matrix, found by Newton iteration on `1/A(p)`.
    pub fn smatrix_pole(&self) -> Complex64 {
        let inverse = |p: Complex64| 1.0 / self.coefficients_at(p).0;
        // start in the upper half plane, away from the pole
        let mut p = Complex64::new(self.alpha, 0.5 * self.alpha);
        let h = 1e-6 * self.alpha;
        for _ in 0..50 {
            let f = inverse(p);
            let df = (inverse(p + h) - inverse(p - h)) / (2.0 * h);
            let step = f / df;
            p -= step;
            if step.norm() <= 1e-15 * self.alpha {
                break;
            }
        }
        p
    }
}
