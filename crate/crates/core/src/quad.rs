//! Quadrature rules used by the oracles: adaptive Gauss–Kronrod (7/15) for
//! complex integrands on finite intervals, and Gauss–Legendre nodes for the
//! fixed-panel continuum integrals.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

// QUADPACK 15-point Kronrod abscissae and weights; every other abscissa is a
// 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64) -> (Complex64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (value, error)
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[lo, hi]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |I|)`. Exceeding
/// `max_subdivisions` returns [`Error::Quadrature`] with the partial value.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    if lo == hi {
        return Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            subdivisions: 0,
        });
    }
    let (v, e) = kronrod15(&f, lo, hi);
    let mut pieces = vec![(lo, hi, v, e)];
    let mut total = v;
    let mut total_err = e;
    let mut subdivisions = 1;
    loop {
        if total_err <= abs_tol.max(rel_tol * total.norm()) {
            break;
        }
        if subdivisions >= max_subdivisions {
            return Err(Error::Quadrature {
                partial: total,
                error: total_err,
                subdivisions,
            });
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .expect("at least one piece");
        let (a, b, v_old, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let (v1, e1) = kronrod15(&f, a, mid);
        let (v2, e2) = kronrod15(&f, mid, b);
        total += v1 + v2 - v_old;
        pieces.push((a, mid, v1, e1));
        pieces.push((mid, b, v2, e2));
        // Re-sum the error rather than updating incrementally; the running
        // difference loses everything once the estimates span many decades.
        total_err = pieces.iter().map(|p| p.3).sum();
        subdivisions += 1;
    }
    // Re-sum the value too, so the result does not depend on the update order.
    let value = pieces.iter().map(|p| p.2).sum();
    Ok(Integral {
        value,
        abs_error: total_err,
        subdivisions,
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// The 16-point rule used for composite panel integration.
pub(crate) fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Composite 16-point Gauss–Legendre sum over `panels` equal panels.
pub(crate) fn composite_gl16<F: Fn(f64) -> Complex64>(
    f: &F,
    lo: f64,
    hi: f64,
    panels: usize,
) -> Complex64 {
    let (x, w) = gl16();
    let width = (hi - lo) / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = lo + width * p as f64;
        let c = a + 0.5 * width;
        let mut panel = Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            panel += f(c + 0.5 * width * xi) * *wi;
        }
        sum += panel * (0.5 * width);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        // exact for degree <= 31
        let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((approx - 2.0 / 31.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_gaussian() {
        let r = integrate(
            |t| Complex64::new((-t * t).exp(), 0.0),
            -10.0,
            10.0,
            1e-15,
            1e-14,
            200,
        )
        .unwrap();
        assert!((r.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn kronrod_reports_nonconvergence() {
        let err = integrate(
            |t| Complex64::new((1.0 / t).sin() / t, 0.0),
            1e-6,
            1.0,
            1e-15,
            1e-15,
            5,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Quadrature { subdivisions: 5, .. }));
    }

    #[test]
    fn composite_rule_oscillatory() {
        let v = composite_gl16(&|p: f64| Complex64::new((3.0 * p).cos(), 0.0), 0.0, 10.0, 8);
        assert!((v.re - (30.0f64).sin() / 3.0).abs() < 1e-12);
    }
}
