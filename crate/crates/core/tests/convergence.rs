use edgescatter::grid::{Exclusion, GridSpec};
use edgescatter::sommerfeld::{helmholtz_residual, BoundaryCondition, SommerfeldField};
use edgescatter::specfun::fresnel_f;
use edgescatter::Complex64;

/// `V(ξ) = F(ξ)` solves `V'' - 4ikξ V' = 0`; check it with central differences.
#[test]
fn fresnel_solves_its_ode_at_second_order() {
    let k = 1.3;
    let points = [-2.0, -0.7, 0.0, 0.4, 1.9];
    let defect = |h: f64| {
        points
            .iter()
            .map(|&x| {
                let f = |t: f64| fresnel_f(k, Complex64::new(t, 0.0)).unwrap().value;
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
                (d2 - Complex64::new(0.0, 4.0 * k * x) * d1).norm()
            })
            .fold(0.0, f64::max)
    };
    let e = [defect(0.02), defect(0.01), defect(0.005)];
    for w in e.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.8, "{e:?}");
    }
}

#[test]
fn neumann_residual_converges() {
    let f = SommerfeldField::new(1.5, 0.5, BoundaryCondition::Neumann).unwrap();
    let ex = Exclusion::edge(0.5).with_tip_radius(1.0);
    let l2: Vec<f64> = [101, 201, 401]
        .iter()
        .map(|&n| {
            let g = f.field_on_grid(GridSpec::square(-3.5, 4.5, n).unwrap()).unwrap();
            helmholtz_residual(&g, 1.5 * 1.5, &ex).unwrap().l2
        })
        .collect();
    for w in l2.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.8, "{l2:?}");
    }
}
