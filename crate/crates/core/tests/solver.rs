use tba_exact::closedform::Quantity;
use tba_exact::kernel::KernelSet;
use tba_exact::solver::{closed_form_residual, solve_su2k, su2k_update, RESIDUAL_WINDOW};
use tba_exact::{ClosedFormSolution, ModelSpec, SolveOptions, ThetaGrid};

fn grid(step: f64) -> ThetaGrid<f64> {
    ThetaGrid::new(-40.0, 6.0, step).unwrap()
}

fn opts(damping: f64, tol: f64) -> SolveOptions<f64> {
    SolveOptions {
        damping,
        tol,
        ..Default::default()
    }
}

#[test]
fn damping_does_not_change_the_fixed_point() {
    let g = grid(0.05);
    let tol = 1e-11;
    let a = solve_su2k(1.0, g, &opts(0.3, tol)).unwrap();
    let b = solve_su2k(1.0, g, &opts(0.7, tol)).unwrap();
    let all = 0..g.count();
    // contraction factor below 1/2 in practice, so the distance to the
    // fixed point is a few times the last increment
    assert!(a.a.sup_diff(&b.a, all.clone()).unwrap() < 10.0 * tol / 0.3);
    assert!(a.b.sup_diff(&b.b, all).unwrap() < 10.0 * tol / 0.3);
}

#[test]
fn solution_is_a_fixed_point_of_the_update() {
    let g = grid(0.05);
    let tol = 1e-11;
    let sol = solve_su2k(2.0, g, &opts(0.5, tol)).unwrap();
    let kernels = KernelSet::new(ModelSpec::Su2k { k: 2.0 }, g).unwrap();
    let (fa, fb) = su2k_update(&kernels, &sol.a.values, &sol.b.values).unwrap();
    let d = |x: &[num_complex::Complex64], y: &[num_complex::Complex64]| {
        x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
    };
    assert!(d(&fa, &sol.a.values) < 100.0 * tol);
    assert!(d(&fb, &sol.b.values) < 100.0 * tol);
}

#[test]
fn refinement_reduces_the_closed_form_residual() {
    let cf = ClosedFormSolution::su2k(1.0).unwrap();
    let sup = |h: f64| {
        closed_form_residual(&cf, ThetaGrid::new(-40.0, 8.0, h).unwrap(), RESIDUAL_WINDOW)
            .unwrap()
            .iter()
            .map(|r| r.1)
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (sup(0.4), sup(0.2));
    assert!(fine * 4.0 <= coarse, "h=0.4: {coarse:e}, h=0.2: {fine:e}");
}

#[test]
fn solved_b_leaves_the_plateau_monotonically() {
    let g = grid(0.05);
    let sol = solve_su2k(1.0, g, &opts(0.5, 1e-10)).unwrap();
    let left = g.window(-40.0, -5.0);
    let b: Vec<f64> = sol.b.values[left].iter().map(|z| z.re).collect();
    let cf = ClosedFormSolution::su2k(1.0).unwrap();
    let p = cf.plateau_estimate(Quantity::B).unwrap().re;
    // B rises from its plateau -cot(pi/3) towards zero
    assert!(b.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!((b[0] - p).abs() < 1e-6);
}

#[test]
fn solution_is_real() {
    let sol = solve_su2k(3.0, grid(0.1), &opts(0.5, 1e-10)).unwrap();
    assert!(sol.a.values.iter().chain(&sol.b.values).all(|z| z.im.abs() < 1e-12));
    assert!(sol.report.converged);
}
