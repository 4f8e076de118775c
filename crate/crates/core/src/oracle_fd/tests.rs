use super::*;
use crate::bound_edge::{BoundEdgeField, WaveguideParams};
use crate::fit::fit_line;
use crate::grid::Exclusion;
use crate::sommerfeld::SommerfeldField;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn identity_system_returns_the_rhs() {
    let entries: Vec<_> = (0..5).map(|i| (i, i, c(1.0))).collect();
    let rhs: Vec<_> = (0..5).map(|i| Complex64::new(i as f64, -1.0)).collect();
    let (x, r) = solve_triplets(5, &entries, &rhs, 1e-12).unwrap();
    assert_eq!(x, rhs);
    assert_eq!(r, 0.0);
}

#[test]
fn tolerance_range_is_enforced() {
    let g = GridSpec::square(-1.0, 1.0, 11).unwrap();
    let s = assemble(&FdProblem::new(g, 0.0)).unwrap();
    assert!(solve(&s, 1e-3).is_err());
    assert!(solve(&s, 1e-13).is_err());
}

#[test]
fn laplacian_rows_annihilate_constants() {
    let g = GridSpec::square(-1.0, 1.0, 21).unwrap();
    let s = assemble(&FdProblem::new(g, 0.0)).unwrap();
    // every unknown at 1 together with unit boundary data balances exactly
    let p = FdProblem::new(g, 0.0).with_boundary(|_, _, _| Ok(c(1.0)));
    let with_data = assemble(&p).unwrap();
    let ones = vec![c(1.0); s.dim];
    let lhs = with_data.apply(&ones);
    for (l, r) in lhs.iter().zip(&with_data.rhs) {
        assert!((l - r).norm() < 1e-9);
    }
    let sol = solve(&with_data, 1e-12).unwrap();
    assert!(sol.field.values.iter().all(|v| (v - 1.0).norm() < 1e-10));
}

#[test]
fn stencil_shape_and_symmetry() {
    let g = GridSpec::square(-1.0, 1.0, 21).unwrap();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let p = FdProblem::new(g, 1.0).with_delta_line(1.0).with_edge(0.3, bc);
        let s = assemble(&p).unwrap();
        assert_eq!(s.asymmetry(), 0.0, "{bc:?}");
        let counts = s.row_counts();
        // a node two cells from every special line has the full stencil
        let deep = s.layout.top[g.index(4, 4)].unwrap();
        assert_eq!(counts[deep], 5);
        assert!(counts.iter().all(|&n| n <= 6));
    }
}

#[test]
fn misalignment_and_resolution_are_rejected() {
    let g = GridSpec::square(-1.0, 1.0, 21).unwrap();
    let p = FdProblem::new(g, 0.0).with_edge(0.33, BoundaryCondition::Dirichlet);
    assert!(matches!(assemble(&p), Err(Error::Misaligned { .. })));
    let shifted = GridSpec::new(-1.05, -1.0, 0.1, 0.1, 21, 21).unwrap();
    let p = FdProblem::new(shifted, 0.0).with_delta_line(1.0);
    assert!(matches!(assemble(&p), Err(Error::Misaligned { .. })));
    let p = FdProblem::new(g, 100.0);
    assert!(matches!(assemble(&p), Err(Error::Resolution(_))));
}

#[test]
fn dirichlet_edge_nodes_are_exactly_zero() {
    let g = GridSpec::square(-2.0, 2.0, 41).unwrap();
    let p = FdProblem::new(g, 4.0)
        .with_edge(0.0, BoundaryCondition::Dirichlet)
        .with_boundary(|_, y, _| Ok(Complex64::from_polar(1.0, 2.0 * y)));
    let sol = run(&p, 1e-10).unwrap();
    for (v, k) in sol.field.values.iter().zip(&sol.field.mask) {
        if *k == NodeKind::Edge {
            assert_eq!(*v, c(0.0));
        }
    }
}

fn manufactured_error(n: usize) -> f64 {
    // ψ = sin(x) cos(2y): (-Δ - 1)ψ = 4ψ
    let exact = |x: f64, y: f64| c(x.sin() * (2.0 * y).cos());
    let g = GridSpec::square(-1.0, 1.0, n).unwrap();
    let p = FdProblem::new(g, 1.0)
        .with_boundary(move |x, y, _| Ok(exact(x, y)))
        .with_source(move |x, y| 4.0 * exact(x, y));
    let sol = run(&p, 1e-12).unwrap();
    (0..g.len())
        .map(|n| (sol.field.values[n] - exact(g.x(n % g.nx), g.y(n / g.nx))).norm())
        .fold(0.0, f64::max)
}

#[test]
fn manufactured_solution_converges_at_second_order() {
    let e1 = manufactured_error(21);
    let e2 = manufactured_error(41);
    let ratio = e1 / e2;
    assert!(e1 < 1e-3);
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn transverse_bound_state_matches_the_lattice_formula() {
    let alpha = 1.0;
    let mut errs = Vec::new();
    for dx in [0.1, 0.05] {
        let (e, v) = transverse_bound_state(alpha, dx, 401).unwrap();
        // the zero ends at |x| = 200 dx shift the level by about e^{-400 α dx}
        assert!((e - lattice_bound_energy(alpha, dx)).abs() < 1e-7, "{e}");
        errs.push((e + alpha * alpha).abs());
        // eigenvector decays as e^{-α|x|} up to O(dx²) in the rate
        let mid = 200;
        let xs: Vec<f64> = (5..60).map(|m| m as f64 * dx).collect();
        let logs: Vec<f64> = (5..60).map(|m| v[mid + m].ln()).collect();
        let slope = fit_line(&xs, &logs).unwrap().slope;
        assert!((slope + alpha).abs() < alpha * dx * dx, "slope {slope}");
    }
    // the bound energy converges at second order in dx
    assert!((errs[0] / errs[1] - 4.0).abs() < 0.1, "{errs:?}");
}

fn sommerfeld_discrepancy(bc: BoundaryCondition, n: usize) -> CompareReport {
    let k = 2.0;
    let field = SommerfeldField::new(k, 0.0, bc).unwrap();
    let g = GridSpec::square(-4.0, 4.0, n).unwrap();
    let exact = field.field_on_grid(g).unwrap();
    let p = FdProblem::new(g, k * k)
        .with_edge(0.0, bc)
        .with_boundary(move |x, y, side| field.eval(x, y, side));
    let sol = run(&p, 1e-10).unwrap();
    compare(&exact, &sol.field, &Exclusion::edge(0.0)).unwrap()
}

#[test]
fn dirichlet_oracle_matches_the_closed_form() {
    let r = sommerfeld_discrepancy(BoundaryCondition::Dirichlet, 201);
    assert!(r.l2_rel <= 0.02, "{r:?}");
}

#[test]
fn neumann_oracle_matches_the_closed_form() {
    let errs: Vec<f64> = [101, 201, 401]
        .iter()
        .map(|&n| sommerfeld_discrepancy(BoundaryCondition::Neumann, n).l2_rel)
        .collect();
    // the tip singularity limits the Neumann oracle more than the Dirichlet one
    assert!(errs[2] <= 0.05, "{errs:?}");
    assert!(errs[2] < errs[1], "{errs:?}");
}

#[test]
fn identical_fields_compare_to_zero() {
    let f = BoundEdgeField::new(WaveguideParams::new(1.0, 2.0).unwrap());
    let g = f.field_on_grid(GridSpec::square(-2.0, 2.0, 41).unwrap()).unwrap();
    let r = compare(&g, &g, &Exclusion::edge(0.0).with_delta_line()).unwrap();
    assert_eq!((r.l2_rel, r.max_rel), (0.0, 0.0));
    assert_eq!(r.regions.iter().map(|q| q.nodes).sum::<usize>(), r.nodes);
    let other = GridSpec::square(-2.0, 2.0, 43).unwrap();
    let h = f.field_on_grid(other).unwrap();
    assert!(compare(&g, &h, &Exclusion::edge(0.0)).is_err());
}
