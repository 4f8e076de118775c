//! The waveguide bound state meeting a Dirichlet edge `{y = 0, x ≥ 0}`.
//!
//! With `E = k² - α² = κ²` and the per-half-plane substitutions
//! `k ± αε = κe^{±λ}`, `ε = sgn x`, the closed form is
//!
//! ```text
//! ψ = C₀ e^{-α|x|} (e^{-iky} F_κ(ξ) - e^{iky} F_κ(η̃))
//! ```
//!
//! where `F_κ` is the Fresnel integral at wavenumber `κ`, `ξ` comes from
//! [`bound_parabolic`] and `η̃` is the reflected coordinate of
//! [`bound_eta_reflected`], which equals `conj(η)` for real `λ`.
//!
//! For `k < α` the energy is negative, `κ = i√(α² - k²)` and `λ` is complex.
//! Each half-plane `x ≷ 0` then satisfies `(Δ + κ²)ψ = 0` and the ray
//! condition holds exactly. The matching across the delta line is *not*
//! implied by the construction; [`BoundEdgeField::delta_jump_check`] measures
//! how far it is off.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fit::{fit_line, LineFit};
use crate::geometry::{bound_eta_reflected, bound_parabolic, PlanePoint, Side};
use crate::grid::{FieldGrid, GridSpec, NodeKind};
use crate::specfun::fresnel_f;
use crate::{Error, Result};

/// `k`, `α` and the derived energy of a guided wave `e^{-α|x|} e^{iky}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams {
    alpha: f64,
    k: f64,
}

impl WaveguideParams {
    pub fn new(alpha: f64, k: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
        }
        if k == alpha {
            return Err(Error::InvalidParameter(
                "k = alpha is the branch point kappa = 0".into(),
            ));
        }
        Ok(Self { alpha, k })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `E = k² - α²`.
    pub fn energy(&self) -> f64 {
        self.k * self.k - self.alpha * self.alpha
    }

    /// `κ = √(k² - α²)` for `k > α`, `i√(α² - k²)` below threshold.
    pub fn kappa(&self) -> Complex64 {
        if self.k > self.alpha {
            Complex64::new((self.k * self.k - self.alpha * self.alpha).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (self.alpha * self.alpha - self.k * self.k).sqrt())
        }
    }

    /// `λ = Ln((k + αε)/κ)`, so that `κe^λ = k + αε` on the principal branch.
    pub fn lambda(&self, eps: f64) -> Complex64 {
        let eps = if eps >= 0.0 { 1.0 } else { -1.0 };
        (Complex64::new(self.k + self.alpha * eps, 0.0) / self.kappa()).ln()
    }
}

/// `(κ, λ)` for the given side `ε = ±1`.
pub fn kappa_lambda(alpha: f64, k: f64, eps: f64) -> Result<(Complex64, Complex64)> {
    let p = WaveguideParams::new(alpha, k)?;
    Ok((p.kappa(), p.lambda(eps)))
}

/// The closed-form bound-edge field, edge tip at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEdgeField {
    params: WaveguideParams,
    c0: Complex64,
}

/// Slope of `log|ψ|` against `|x|` on the far side of the waveguide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub y: f64,
    pub slope: f64,
    pub fit: LineFit,
}

impl BoundEdgeField {
    pub fn new(params: WaveguideParams) -> Self {
        Self {
            params,
            c0: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_amplitude(mut self, c0: Complex64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn params(&self) -> WaveguideParams {
        self.params
    }

    pub fn eval(&self, x: f64, y: f64, side: Side) -> Result<Complex64> {
        let p = PlanePoint::new(x, y, 0.0);
        let eps = if x >= 0.0 { 1.0 } else { -1.0 };
        let lambda = self.params.lambda(eps);
        let kappa = self.params.kappa();
        let xi = bound_parabolic(p, side, lambda)?.xi;
        // On the ray the two coordinates agree; use the same bits so the
        // difference cancels exactly.
        let eta = if p.on_ray() {
            xi
        } else {
            bound_eta_reflected(p, side, lambda)?
        };
        let phase = Complex64::from_polar(1.0, self.params.k * y);
        let f_xi = fresnel_f(kappa, xi)?.value;
        let f_eta = fresnel_f(kappa, eta)?.value;
        let envelope = (-self.params.alpha * x.abs()).exp();
        Ok(self.c0 * envelope * (phase.conj() * f_xi - phase * f_eta))
    }

    /// Samples the field; edge nodes, tip included, hold zero.
    pub fn field_on_grid(&self, spec: GridSpec) -> Result<FieldGrid> {
        let mask = spec.mask(Some(0.0), true);
        let values = (0..spec.len())
            .into_par_iter()
            .map(|n| {
                if mask[n] == NodeKind::Edge {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let (i, j) = (n % spec.nx, n / spec.nx);
                self.eval(spec.x(i), spec.y(j), Side::Auto)
            })
            .collect::<Result<Vec<_>>>()?;
        FieldGrid::new(spec, values, mask)
    }

    /// Relative defect of the matching condition at `(0, y)`,
    /// `|ψ'(0⁺) - ψ'(0⁻) + 2αψ(0)| / (2α|ψ(0)|)`, from one-sided differences.
    pub fn delta_jump_check(&self, y: f64, h: f64) -> Result<f64> {
        if y == 0.0 {
            return Err(Error::InvalidParameter("jump check needs y != 0".into()));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
        }
        let centre = self.eval(0.0, y, Side::Auto)?;
        let right = (self.eval(h, y, Side::Auto)? - centre) / h;
        let left = (centre - self.eval(-h, y, Side::Auto)?) / h;
        let g = 2.0 * self.params.alpha;
        Ok((right - left + g * centre).norm() / (g * centre.norm()))
    }

    /// `|ψ(0⁺, y) - ψ(0⁻, y)|`: the field's jump across the delta line.
    pub fn delta_line_jump(&self, y: f64) -> Result<f64> {
        let right = self.eval(0.0, y, Side::Auto)?;
        let left = self.eval(-f64::MIN_POSITIVE, y, Side::Auto)?;
        Ok((right - left).norm())
    }

    /// Largest `|ψ|` on `n` points of the ray `x ∈ (0, x_max]`, both faces.
    pub fn ray_defect(&self, x_max: f64, n: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for m in 1..=n {
            let x = x_max * m as f64 / n as f64;
            for side in [Side::Top, Side::Bottom] {
                worst = worst.max(self.eval(x, 0.0, side)?.norm());
            }
        }
        Ok(worst)
    }

    /// Fits `log|ψ(x, y)|` against `|x|` for `x ∈ [-20/α, -10/α]`.
    pub fn tail_fit(&self, y: f64, samples: usize) -> Result<TailFit> {
        let alpha = self.params.alpha;
        let (lo, hi) = (10.0 / alpha, 20.0 / alpha);
        let mut xs = Vec::with_capacity(samples);
        let mut logs = Vec::with_capacity(samples);
        for m in 0..samples {
            let d = lo + (hi - lo) * m as f64 / (samples as f64 - 1.0);
            let v = self.eval(-d, y, Side::Auto)?.norm();
            if v <= 1e-300 {
                return Err(Error::DegenerateFit(format!("|psi| underflows at x = {}", -d)));
            }
            xs.push(d);
            logs.push(v.ln());
        }
        let fit = fit_line(&xs, &logs)?;
        Ok(TailFit {
            y,
            slope: fit.slope,
            fit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Exclusion;
    use crate::sommerfeld::{helmholtz_residual, BoundaryCondition, SommerfeldField};

    #[test]
    fn substitutions_above_threshold() {
        let (kappa, lambda) = kappa_lambda(1.0, 2.0, 1.0).unwrap();
        assert!((kappa - 3f64.sqrt()).norm() < 1e-15);
        assert!((lambda - 0.5 * 3f64.ln()).norm() < 1e-15);
        assert!((kappa * lambda.exp() - 3.0).norm() < 1e-12);
        assert!((kappa * (-lambda).exp() - 1.0).norm() < 1e-12);
        let (_, flipped) = kappa_lambda(1.0, 2.0, -1.0).unwrap();
        assert!((flipped + lambda).norm() < 1e-15);
    }

    #[test]
    fn substitutions_below_threshold() {
        let p = WaveguideParams::new(1.0, 0.5).unwrap();
        let kappa = p.kappa();
        assert!((kappa - Complex64::new(0.0, 0.75f64.sqrt())).norm() < 1e-15);
        for eps in [1.0, -1.0] {
            let lambda = p.lambda(eps);
            assert!((kappa * lambda.exp() - (0.5 + eps)).norm() < 1e-12);
            assert!((kappa * (-lambda).exp() - (0.5 - eps)).norm() < 1e-12);
            assert!((kappa * kappa - p.energy()).norm() < 1e-12);
        }
        assert!((p.lambda(1.0) + p.lambda(-1.0)).norm() < 1e-15);
        assert!(WaveguideParams::new(1.0, 1.0).is_err());
    }

    #[test]
    fn ray_is_exactly_dirichlet() {
        for k in [0.5, 2.0] {
            let f = BoundEdgeField::new(WaveguideParams::new(1.0, k).unwrap());
            assert_eq!(f.ray_defect(10.0, 200).unwrap(), 0.0);
        }
    }

    #[test]
    fn tip_is_rejected() {
        let f = BoundEdgeField::new(WaveguideParams::new(1.0, 2.0).unwrap());
        assert!(matches!(f.eval(0.0, 0.0, Side::Auto), Err(Error::Tip { .. })));
    }

    #[test]
    fn weak_well_reduces_to_sommerfeld() {
        let k = 1.5;
        let f = BoundEdgeField::new(WaveguideParams::new(1e-6, k).unwrap());
        let s = SommerfeldField::new(k, 0.0, BoundaryCondition::Dirichlet).unwrap();
        for (x, y) in [(1.0, 1.0), (-2.0, 0.5), (0.7, -3.0), (-1.0, -1.0)] {
            let a = f.eval(x, y, Side::Auto).unwrap();
            let b = s.eval(x, y, Side::Auto).unwrap();
            assert!((a - b).norm() < 1e-5, "({x}, {y}): {a} vs {b}");
        }
    }

    #[test]
    fn each_half_plane_solves_helmholtz() {
        // residual of (Δ + κ²)ψ away from the ray, the delta line and the tip
        let f = BoundEdgeField::new(WaveguideParams::new(1.0, 0.5).unwrap());
        let energy = f.params().energy();
        let excl = Exclusion::edge(0.0).with_delta_line().with_tip_radius(1.0);
        let mut l2 = Vec::new();
        for n in [81, 161] {
            let g = f.field_on_grid(GridSpec::square(-4.0, 4.0, n).unwrap()).unwrap();
            l2.push(helmholtz_residual(&g, energy, &excl).unwrap().l2);
        }
        let order = (l2[0] / l2[1]).log2();
        assert!(order > 1.8, "order {order}, {l2:?}");
    }

    #[test]
    fn jump_check_on_the_pure_bound_state() {
        // ψ₀ = e^{-α|x|} satisfies the matching condition; one-sided
        // differences give a defect of order α h
        let alpha = 1.0;
        for h in [1e-3, 1e-4] {
            let psi = |x: f64| (-alpha * f64::abs(x)).exp();
            let d = ((psi(h) - psi(0.0)) / h - (psi(0.0) - psi(-h)) / h + 2.0 * alpha) / (2.0 * alpha);
            assert!(d.abs() <= alpha * h);
        }
    }

    #[test]
    fn jump_defect_is_finite_along_the_line() {
        let f = BoundEdgeField::new(WaveguideParams::new(1.0, 0.5).unwrap());
        for m in 1..=20 {
            let y = -0.5 * m as f64;
            let d = f.delta_jump_check(y, 1e-4).unwrap();
            assert!(d.is_finite());
        }
        assert!(f.delta_jump_check(0.0, 1e-4).is_err());
    }
}
