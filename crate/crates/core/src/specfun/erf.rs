//! Error function of complex argument.
//!
//! Three regimes, all evaluated in the closed first quadrant and mapped to the
//! other quadrants through `erf(-z) = -erf(z)` and `erf(z̄) = erf(z)̄`:
//!
//! * `|z| <= 1`: Maclaurin series of `erf`.
//! * `1 < |z| < 6`: `erfc(z) = exp(-z²) w(iz)` with Weideman's rational
//!   approximation of the Faddeeva function `w`.
//! * `|z| >= 6`: the same identity with the Laplace continued fraction for `w`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

pub(crate) const TAYLOR_RADIUS: f64 = 1.0;
pub(crate) const CONTINUED_FRACTION_RADIUS: f64 = 6.0;
const WEIDEMAN_TERMS: usize = 40;
const CONTINUED_FRACTION_DEPTH: usize = 40;
const MAX_ARGUMENT: f64 = 1e6;
// exp(x) overflows past ~709.78 and underflows to zero below ~-745.1.
const EXP_OVERFLOW: f64 = 709.0;
const EXP_UNDERFLOW: f64 = -745.0;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Value of `erf` together with the saturation flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfValue {
    pub value: Complex64,
    /// `exp(-z²)` underflowed, so the value is exactly `±1`.
    pub saturated: bool,
}

/// Error function of complex argument.
///
/// Fails for non-finite input, for `|z| > 1e6`, and with [`Error::Overflow`]
/// when `Re(-z²)` leaves the exponent range (`erf` itself is not
/// representable there).
pub fn erf(z: Complex64) -> Result<Complex64> {
    erf_checked(z).map(|v| v.value)
}

/// [`erf`] with the saturation flag.
pub fn erf_checked(z: Complex64) -> Result<ErfValue> {
    check_argument(z)?;
    let q = Complex64::new(z.re.abs(), z.im.abs());
    let v = erf_first_quadrant(q)?;
    let mut value = v.value;
    if z.im.is_sign_negative() {
        value = value.conj();
    }
    if z.re.is_sign_negative() {
        // erf(-conj(q)) = -conj(erf(q)); combined with the conjugation above
        // this covers both left-hand quadrants.
        value = -value.conj();
    }
    Ok(ErfValue {
        value,
        saturated: v.saturated,
    })
}

/// Complementary error function, `1 - erf(z)`, computed without the
/// cancellation of the subtraction where `erf(z)` is close to one.
pub fn erfc(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    if z.re.is_sign_negative() {
        // erfc(z) = 2 - erfc(-z)
        return Ok(Complex64::new(2.0, 0.0) - erfc(-z)?);
    }
    let flip = z.im.is_sign_negative();
    let q = if flip { z.conj() } else { z };
    let v = if q.norm() <= TAYLOR_RADIUS {
        Complex64::new(1.0, 0.0) - erf_taylor(q)
    } else {
        scaled_exp(q)?.map_or(Complex64::new(0.0, 0.0), |e| e * faddeeva_upper(q * Complex64::i()))
    };
    Ok(if flip { v.conj() } else { v })
}

/// Faddeeva function `w(z) = exp(-z²) erfc(-iz)`.
///
/// Evaluated directly in the closed upper half plane; below the real axis
/// the reflection `w(z) = 2 exp(-z²) - w(-z)` is used, which can overflow.
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    if z.im >= 0.0 {
        return Ok(faddeeva_upper(z));
    }
    let e = scaled_exp(z)?.unwrap_or(Complex64::new(0.0, 0.0));
    Ok(e * 2.0 - faddeeva_upper(-z))
}

fn check_argument(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_ARGUMENT {
        return Err(Error::Domain(z));
    }
    Ok(())
}

/// `exp(-z²)`, `None` on underflow.
fn scaled_exp(z: Complex64) -> Result<Option<Complex64>> {
    let exponent = -(z * z);
    if exponent.re > EXP_OVERFLOW {
        return Err(Error::Overflow(exponent.re));
    }
    if exponent.re < EXP_UNDERFLOW {
        return Ok(None);
    }
    Ok(Some(exponent.exp()))
}

fn erf_first_quadrant(q: Complex64) -> Result<ErfValue> {
    if q.norm() <= TAYLOR_RADIUS {
        return Ok(ErfValue {
            value: erf_taylor(q),
            saturated: false,
        });
    }
    // The first quadrant maps into the upper half plane under z -> iz.
    match scaled_exp(q)? {
        Some(e) => Ok(ErfValue {
            value: Complex64::new(1.0, 0.0) - e * faddeeva_upper(q * Complex64::i()),
            saturated: false,
        }),
        None => Ok(ErfValue {
            value: Complex64::new(1.0, 0.0),
            saturated: true,
        }),
    }
}

pub(crate) fn erf_taylor(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..80 {
        term *= -z2 / n as f64;
        let contribution = term / (2 * n + 1) as f64;
        sum += contribution;
        if contribution.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// `w(z)` for `Im z >= 0`.
pub(crate) fn faddeeva_upper(z: Complex64) -> Complex64 {
    if z.norm() >= CONTINUED_FRACTION_RADIUS {
        faddeeva_continued_fraction(z)
    } else {
        faddeeva_weideman(z)
    }
}

pub(crate) fn faddeeva_continued_fraction(z: Complex64) -> Complex64 {
    // w(z) = (i/√π) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
    let mut t = z;
    for m in (1..=CONTINUED_FRACTION_DEPTH).rev() {
        t = z - (m as f64 * 0.5) / t;
    }
    Complex64::i() / (PI.sqrt() * t)
}

struct Weideman {
    scale: f64,
    // polynomial coefficients, lowest degree first
    coeffs: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_TERMS;
        let m = 2 * n;
        let scale = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // Samples of exp(-t²)(L² + t²) at t = L tan(θ/2), θ = kπ/M.
        let samples: Vec<(f64, f64)> = (-(m as i64) + 1..m as i64)
            .map(|k| {
                let theta = k as f64 * PI / m as f64;
                let t = scale * (theta / 2.0).tan();
                (k as f64, (-t * t).exp() * (scale * scale + t * t))
            })
            .collect();
        let coeffs = (1..=n)
            .map(|j| {
                samples
                    .iter()
                    .map(|&(k, f)| f * (PI * k * j as f64 / m as f64).cos())
                    .sum::<f64>()
                    / (2 * m) as f64
            })
            .collect();
        Weideman { scale, coeffs }
    })
}

pub(crate) fn faddeeva_weideman(z: Complex64) -> Complex64 {
    let table = weideman();
    let l = table.scale;
    let iz = Complex64::i() * z;
    let denom = Complex64::new(l, 0.0) - iz;
    let ratio = (Complex64::new(l, 0.0) + iz) / denom;
    let mut poly = Complex64::new(0.0, 0.0);
    for c in table.coeffs.iter().rev() {
        poly = poly * ratio + c;
    }
    poly * 2.0 / (denom * denom) + 1.0 / (PI.sqrt() * denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values from a 40-digit evaluation (mpmath), rounded to 17
    // significant digits.
    const ERF_REFERENCE: &[(f64, f64, f64, f64)] = &[
        (0.5, 0.0, 0.52049987781304654, 0.0),
        (1.0, 1.0, 1.3161512816979476, 0.19045346923783469),
        (2.0, -1.5, 0.96361758085729283, -0.01100337385213795),
        (0.3, 2.5, 114.49450947459658, 26.191395067040959),
        (3.0, 3.0, 0.86782649757545114, -0.012152181790312257),
        (-4.5, 0.25, -1.0000000001397368, 1.5543661500001142e-10),
        (5.0, 6.0, 1660.0016790805035, -4000.4822311449733),
        (0.1, 9.5, 8.7989721837897748e+37, -2.9018090981832066e+37),
        (7.0710678118654755, -7.071067811865475, 0.94533050371617762, -0.013926504428655154),
        (1.2, -0.9, 1.161010696388538, -0.084397015413949749),
        (-2.2, 3.1, -8.235870126123436, 16.103802478953367),
        (9.0, -4.0, 1.0, 5.294031217900347e-31),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(x, y, re, im) in ERF_REFERENCE {
            let got = erf(c(x, y)).unwrap();
            let want = c(re, im);
            assert!(rel(got, want) < 1e-12, "erf({x}+{y}i) = {got}, want {want}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(erf(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let v = erf(c(1.0, 0.0)).unwrap();
        assert!((v.re - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn regimes_agree_at_their_seams() {
        for k in 0..64 {
            let arg = k as f64 * PI / 64.0;
            let dir = c(arg.cos(), arg.sin());
            for radius in [TAYLOR_RADIUS, CONTINUED_FRACTION_RADIUS] {
                let z = dir * radius;
                let a = faddeeva_weideman(z);
                let b = if radius == TAYLOR_RADIUS {
                    // w(z) = exp(-z²) erfc(-iz), from the series
                    (-(z * z)).exp() * (c(1.0, 0.0) - erf_taylor(-Complex64::i() * z))
                } else {
                    faddeeva_continued_fraction(z)
                };
                assert!(rel(a, b) < 1e-13, "seam at {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn saturates_and_overflows() {
        let v = erf_checked(c(30.0, 1.0)).unwrap();
        assert!(v.saturated);
        assert_eq!(v.value, c(1.0, 0.0));
        let v = erf_checked(c(-30.0, -1.0)).unwrap();
        assert_eq!(v.value, c(-1.0, -0.0));
        assert!(matches!(erf(c(0.0, 30.0)), Err(Error::Overflow(_))));
        assert!(matches!(erf(c(2e6, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(erf(c(f64::NAN, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn erfc_has_no_cancellation_in_the_tail() {
        // erfc(6) = 2.1519736712498913e-17
        let v = erfc(c(6.0, 0.0)).unwrap();
        assert!((v.re / 2.151_973_671_249_891_3e-17 - 1.0).abs() < 1e-13);
        let v = erfc(c(-6.0, 0.0)).unwrap();
        assert_eq!(v.re, 2.0);
    }

    #[test]
    fn faddeeva_reflection() {
        let z = c(1.5, -0.5);
        let w = faddeeva(z).unwrap();
        // w(z) = exp(-z²) erfc(-iz)
        let expected = (-(z * z)).exp() * erfc(-Complex64::i() * z).unwrap();
        assert!(rel(w, expected) < 1e-13);
    }
}
