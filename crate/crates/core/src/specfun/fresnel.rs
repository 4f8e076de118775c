//! The Fresnel-type integral `F(ξ) = ∫_{-∞}^{ξ} exp(2ikτ²) dτ`.
//!
//! With `s = √(-2ik)`, `Re s > 0`, the substitution `t = sτ` turns the
//! integrand into `exp(-t²)` along a rotated ray, so
//!
//! ```text
//! F(ξ) = √π / (2s) · erfc(-sξ)     (= √π / (2s) · (1 + erf(sξ)))
//! ```
//!
//! For real `k` the rotation is by `∓π/4` and the formula is the Abel limit
//! of the conditionally convergent integral. For complex `k` (imaginary `κ`
//! in the bound-state problem) the integrand decays on the real axis itself.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::erf::erfc;
use crate::quad::integrate;
use crate::{Error, Result};

/// A value of `F` with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelValue {
    pub value: Complex64,
    pub est_abs_error: f64,
}

/// `√(-2ik)` on the branch with positive real part.
pub fn rotation(k: Complex64) -> Result<Complex64> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroWavenumber);
    }
    if !k.re.is_finite() || !k.im.is_finite() {
        return Err(Error::Domain(k));
    }
    let s = (Complex64::new(0.0, -2.0) * k).sqrt();
    if s.re <= 0.0 {
        return Err(Error::BranchAmbiguity(k));
    }
    Ok(s)
}

/// Closed-form `F(ξ)` through the complementary error function.
pub fn fresnel_f(k: impl Into<Complex64>, xi: Complex64) -> Result<FresnelValue> {
    let s = rotation(k.into())?;
    let u = s * xi;
    let value = erfc(-u)? * (PI.sqrt() / (2.0 * s));
    // Rounding of u propagates through erfc' = -2/√π exp(-u²).
    let gauss = (-(u * u)).exp().norm();
    let eps = f64::EPSILON;
    let est_abs_error = 8.0 * eps * value.norm() + 4.0 * eps * xi.norm() * gauss;
    Ok(FresnelValue {
        value,
        est_abs_error,
    })
}

/// `F(ξ)` by adaptive quadrature, independent of the error-function code.
///
/// After the rotation `t = sτ` the path runs along the real `t` axis from
/// far left to `Re(sξ)`, then vertically to `sξ`. On that path
/// `|exp(-t²)| <= max(1, |exp(-(sξ)²)|)`, so the sum is well conditioned.
pub fn fresnel_f_quadrature(k: impl Into<Complex64>, xi: Complex64, tol: f64) -> Result<FresnelValue> {
    if !(1e-14..=1e-4).contains(&tol) {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance {tol} outside [1e-14, 1e-4]"
        )));
    }
    let s = rotation(k.into())?;
    let u = s * xi;
    let (c, v) = (u.re, u.im);
    // exp(-100) is far below any tolerance we accept
    let lower = c.min(0.0) - 10.0;
    let max_subdivisions = 4000;
    let horizontal = integrate(
        |t| Complex64::new((-t * t).exp(), 0.0),
        lower,
        c,
        0.0,
        tol,
        max_subdivisions,
    )
    .map_err(|e| rescale(e, s))?;
    let vertical = integrate(
        |t| {
            let z = Complex64::new(c, t);
            (-(z * z)).exp() * Complex64::i()
        },
        0.0,
        v,
        0.0,
        tol,
        max_subdivisions,
    )
    .map_err(|e| rescale(e, s))?;
    let total = horizontal.value + vertical.value;
    let value = total / s;
    let est_abs_error =
        (horizontal.abs_error + vertical.abs_error) / s.norm() + 4.0 * f64::EPSILON * value.norm();
    Ok(FresnelValue {
        value,
        est_abs_error,
    })
}

fn rescale(e: Error, s: Complex64) -> Error {
    match e {
        Error::Quadrature {
            partial,
            error,
            subdivisions,
        } => Error::Quadrature {
            partial: partial / s,
            error: error / s.norm(),
            subdivisions,
        },
        other => other,
    }
}

/// `F'(ξ) = exp(2ikξ²)`.
pub fn fresnel_f_derivative(k: impl Into<Complex64>, xi: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0) * k.into() * xi * xi).exp()
}
