//! The parabolic double cover `y + i(x - a) = (ξ + iη)²` about the edge tip.
//!
//! The polar angle `φ` of `(x - a, y)` runs over the closed interval
//! `[0, 2π]`. The two ends are different sheets: the upper face of the
//! edge ray is `φ = 0`, the lower face `φ = 2π`. With `χ = φ - π/2`,
//!
//! ```text
//! ξ = √r cos(χ/2),   η = -√r sin(χ/2),
//! y = ξ² - η²,       x - a = 2ξη.
//! ```
//!
//! The bound-state problem uses the same construction with the angle shifted
//! into the complex plane by `-iλ`; see [`bound_parabolic`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// A point of the physical plane, with the tip abscissa `a` it is measured from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
    pub a: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64, a: f64) -> Self {
        Self { x, y, a }
    }

    /// Whether the point lies on the edge ray `{y = 0, x > a}`.
    pub fn on_ray(&self) -> bool {
        self.y == 0.0 && self.x > self.a
    }
}

/// Which face of the edge ray a point on the ray belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// `φ = 0`, approached from `y > 0`.
    Top,
    /// `φ = 2π`, approached from `y < 0`.
    Bottom,
    /// Decided by the sign bit of `y`: `+0` is the top face, `-0` the bottom.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicCoords {
    pub r: f64,
    pub phi: f64,
    pub xi: Complex64,
    pub eta: Complex64,
}

/// Polar radius and sheet angle `φ ∈ [0, 2π]` about the tip.
pub fn polar(p: PlanePoint, side: Side) -> Result<(f64, f64)> {
    let dx = p.x - p.a;
    if dx == 0.0 && p.y == 0.0 {
        return Err(Error::Tip { x: p.x, y: p.y });
    }
    let r = dx.hypot(p.y);
    if p.on_ray() {
        let bottom = match side {
            Side::Top => false,
            Side::Bottom => true,
            Side::Auto => p.y.is_sign_negative(),
        };
        return Ok((r, if bottom { 2.0 * PI } else { 0.0 }));
    }
    let mut phi = p.y.atan2(dx);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    // atan2(±0, x < 0) = ±π, both of which are the backward direction
    if p.y == 0.0 {
        phi = PI;
    }
    Ok((r, phi))
}

/// Real parabolic coordinates of a plane point.
///
/// On the edge ray and on its backward extension the coordinates are set
/// from their closed forms (`ξ = η = ±√(r/2)` and `ξ = -η = √(r/2)`), so
/// that cancellations between `F(ξ)` and `F(η)` are exact.
pub fn to_parabolic(p: PlanePoint, side: Side) -> Result<ParabolicCoords> {
    let (r, phi) = polar(p, side)?;
    let half = (0.5 * r).sqrt();
    let (xi, eta) = if p.y == 0.0 {
        if phi == 0.0 {
            (half, half)
        } else if phi == PI {
            (half, -half)
        } else {
            (-half, -half)
        }
    } else {
        let (s, c) = (0.5 * (phi - 0.5 * PI)).sin_cos();
        (r.sqrt() * c, -r.sqrt() * s)
    };
    Ok(ParabolicCoords {
        r,
        phi,
        xi: Complex64::new(xi, 0.0),
        eta: Complex64::new(eta, 0.0),
    })
}

/// Coordinates for an arbitrary real angle, without wrapping into `[0, 2π]`.
///
/// Used to continue a field analytically across the edge ray onto the
/// neighbouring sheet.
pub fn from_angle(r: f64, phi: f64) -> (f64, f64) {
    let (s, c) = (0.5 * (phi - 0.5 * PI)).sin_cos();
    (r.sqrt() * c, -r.sqrt() * s)
}

/// Inverse map `y = ξ² - η²`, `x = 2ξη + a`.
pub fn from_parabolic(xi: f64, eta: f64, a: f64) -> PlanePoint {
    PlanePoint {
        x: 2.0 * xi * eta + a,
        y: xi * xi - eta * eta,
        a,
    }
}

/// Complex coordinates of the bound-state problem,
///
/// ```text
/// ξ = √(r/2) (cos β + sin β),  η = √(r/2) (cos β - sin β),  β = (φ - iλ)/2.
/// ```
///
/// For `λ = 0` these coincide with [`to_parabolic`]. For real `λ` the two
/// faces of the ray satisfy `ξ = conj(η)`.
pub fn bound_parabolic(p: PlanePoint, side: Side, lambda: Complex64) -> Result<ParabolicCoords> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::Domain(lambda));
    }
    let (r, phi) = polar(p, side)?;
    let beta = (Complex64::new(phi, 0.0) - Complex64::i() * lambda) * 0.5;
    let (c, s) = (beta.cos(), beta.sin());
    let half = (0.5 * r).sqrt();
    Ok(ParabolicCoords {
        r,
        phi,
        xi: (c + s) * half,
        eta: (c - s) * half,
    })
}

/// Schwarz reflection of `η` in `λ`: `conj(η(conj λ))`.
///
/// This is the analytic function of `λ` that equals `conj(η)` whenever `λ`
/// is real, so it is the form of the conjugated coordinate that survives
/// continuation to complex `λ`. On either face of the edge ray it coincides
/// with `ξ`.
pub fn bound_eta_reflected(p: PlanePoint, side: Side, lambda: Complex64) -> Result<Complex64> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::Domain(lambda));
    }
    let (r, phi) = polar(p, side)?;
    let beta = (Complex64::new(phi, 0.0) + Complex64::i() * lambda) * 0.5;
    Ok((beta.cos() - beta.sin()) * (0.5 * r).sqrt())
}

/// The factor `1 / (4(ξ² + η²))` relating the `(ξ, η)` Laplacian to the
/// Cartesian one.
pub fn laplacian_factor(xi: Complex64, eta: Complex64) -> Result<Complex64> {
    let rho = xi * xi + eta * eta;
    if rho == Complex64::new(0.0, 0.0) {
        return Err(Error::Tip { x: xi.re, y: eta.re });
    }
    Ok(1.0 / (4.0 * rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn re(z: Complex64) -> f64 {
        assert_eq!(z.im, 0.0);
        z.re
    }

    #[test]
    fn ray_faces_and_backward_extension() {
        let top = to_parabolic(PlanePoint::new(2.0, 0.0, 0.0), Side::Top).unwrap();
        assert_eq!((re(top.xi), re(top.eta)), (1.0, 1.0));
        assert_eq!(top.phi, 0.0);
        let bottom = to_parabolic(PlanePoint::new(2.0, 0.0, 0.0), Side::Bottom).unwrap();
        assert_eq!((re(bottom.xi), re(bottom.eta)), (-1.0, -1.0));
        assert_eq!(bottom.phi, 2.0 * PI);
        let back = to_parabolic(PlanePoint::new(1.0, 0.0, 3.0), Side::Auto).unwrap();
        assert_eq!((re(back.xi), re(back.eta)), (1.0, -1.0));
        assert_eq!(back.phi, PI);
    }

    #[test]
    fn signed_zero_picks_the_face() {
        let p = to_parabolic(PlanePoint::new(5.0, 0.0, 3.0), Side::Auto).unwrap();
        let m = to_parabolic(PlanePoint::new(5.0, -0.0, 3.0), Side::Auto).unwrap();
        assert_eq!(p.phi, 0.0);
        assert_eq!(m.phi, 2.0 * PI);
        assert_eq!(p.xi, -m.xi);
        assert_eq!(p.eta, -m.eta);
    }

    #[test]
    fn tip_is_rejected() {
        assert!(matches!(
            to_parabolic(PlanePoint::new(1.5, 0.0, 1.5), Side::Top),
            Err(Error::Tip { .. })
        ));
        assert!(laplacian_factor(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_map_examples() {
        let p = from_parabolic(1.0, 1.0, 0.0);
        assert_eq!((p.x, p.y), (2.0, 0.0));
        let p = from_parabolic(1.0, -1.0, 3.0);
        assert_eq!((p.x, p.y), (1.0, 0.0));
    }

    #[test]
    fn laplacian_factor_values() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(laplacian_factor(one, one).unwrap(), Complex64::new(0.125, 0.0));
        assert_eq!(laplacian_factor(one, zero).unwrap(), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn laplacian_factor_matches_cartesian_stencil() {
        // u = x² y + y³ has Δu = 8y
        let u = |x: f64, y: f64| x * x * y + y * y * y;
        let (xi0, eta0) = (1.1, 0.4);
        let p = from_parabolic(xi0, eta0, 0.0);
        let h = 1e-3;
        let w = |a: f64, b: f64| {
            let q = from_parabolic(a, b, 0.0);
            u(q.x, q.y)
        };
        let lap_uv = (w(xi0 + h, eta0) + w(xi0 - h, eta0) + w(xi0, eta0 + h) + w(xi0, eta0 - h)
            - 4.0 * w(xi0, eta0))
            / (h * h);
        let factor = laplacian_factor(Complex64::new(xi0, 0.0), Complex64::new(eta0, 0.0)).unwrap();
        let lap = factor.re * lap_uv;
        assert!((lap - 8.0 * p.y).abs() < 1e-4, "{lap} vs {}", 8.0 * p.y);
    }

    #[test]
    fn bound_coordinates_reduce_at_zero_lambda() {
        let p = PlanePoint::new(0.0, 1.0, 0.0);
        let c = bound_parabolic(p, Side::Auto, Complex64::new(0.0, 0.0)).unwrap();
        assert!((c.xi - 1.0).norm() < 1e-15);
        assert!(c.eta.norm() < 1e-15);
    }

    #[test]
    fn bound_coordinates_conjugate_on_both_faces() {
        let lambda = Complex64::new(0.55, 0.0);
        for side in [Side::Top, Side::Bottom] {
            let c = bound_parabolic(PlanePoint::new(3.0, 0.0, 0.0), side, lambda).unwrap();
            assert!((c.xi - c.eta.conj()).norm() < 1e-12);
            let reflected = bound_eta_reflected(PlanePoint::new(3.0, 0.0, 0.0), side, lambda).unwrap();
            assert!((reflected - c.xi).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn round_trip_on_each_sheet(r in 1e-3f64..50.0, phi in 0.0f64..(2.0 * PI), a in 0.0f64..5.0) {
            let (xi, eta) = from_angle(r, phi);
            let p = from_parabolic(xi, eta, a);
            let c = to_parabolic(p, Side::Auto).unwrap();
            let tol = 1e-12 * r.sqrt().max(1.0);
            prop_assert!((c.xi.re - xi).abs() <= tol, "{} vs {}", c.xi.re, xi);
            prop_assert!((c.eta.re - eta).abs() <= tol);
            let q = from_parabolic(c.xi.re, c.eta.re, a);
            prop_assert!((q.x - p.x).abs() <= 1e-12 * r.max(1.0) + 1e-12 * a);
            prop_assert!((q.y - p.y).abs() <= 1e-12 * r.max(1.0));
        }

        #[test]
        fn sheet_consistency(x in -20.0f64..20.0, y in -20.0f64..20.0) {
            prop_assume!(x != 0.0 || y != 0.0);
            let c = to_parabolic(PlanePoint::new(x, y, 0.0), Side::Auto).unwrap();
            let (xi, eta) = (c.xi.re, c.eta.re);
            let lhs = 4.0 * xi * xi * eta * eta + (xi * xi - eta * eta).powi(2);
            prop_assert!((lhs - c.r * c.r).abs() <= 1e-12 * c.r * c.r);
        }

        #[test]
        fn faces_have_opposite_signs(r in 1e-3f64..50.0) {
            let p = PlanePoint::new(r, 0.0, 0.0);
            let t = to_parabolic(p, Side::Top).unwrap();
            let b = to_parabolic(p, Side::Bottom).unwrap();
            prop_assert_eq!(t.xi, -b.xi);
            prop_assert_eq!(t.eta, -b.eta);
        }

        #[test]
        fn bound_half_angle_identity(r in 0.1f64..10.0, phi in 0.01f64..6.27, lam in -2.0f64..2.0, lam_im in -1.0f64..1.0) {
            let lambda = Complex64::new(lam, lam_im);
            let (xi0, eta0) = from_angle(r, phi);
            let p = from_parabolic(xi0, eta0, 0.0);
            let c = bound_parabolic(p, Side::Auto, lambda).unwrap();
            let want = (Complex64::new(phi - 0.5 * PI, 0.0) - Complex64::i() * lambda).cos() * r;
            let got = c.xi * c.xi - c.eta * c.eta;
            prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(r));
        }

        #[test]
        fn bound_coordinates_continuous_in_lambda(r in 0.1f64..10.0, phi in 0.01f64..6.27) {
            let (xi0, eta0) = from_angle(r, phi);
            let p = from_parabolic(xi0, eta0, 0.0);
            let c0 = to_parabolic(p, Side::Auto).unwrap();
            let lam = 1e-6;
            let c = bound_parabolic(p, Side::Auto, Complex64::new(lam, 0.0)).unwrap();
            prop_assert!((c.xi - c0.xi).norm() <= 2.0 * lam * r.sqrt());
            prop_assert!((c.eta - c0.eta).norm() <= 2.0 * lam * r.sqrt());
        }
    }
}
