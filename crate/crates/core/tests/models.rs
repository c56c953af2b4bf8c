use hypiss::models::euler::example_spec as euler_spec;
use hypiss::models::saint_venant::decay_example_spec;
use hypiss::models::{integrate_steady_state, lambert_w_minus1, EulerParams, SaintVenantParams};
use hypiss::{Grid1D, SquareMatrix};
use proptest::prelude::*;

fn bisect(z: f64) -> f64 {
    // w e^w is decreasing on (-inf, -1)
    let (mut lo, mut hi) = (-800.0_f64, -1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() < z {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn lambert_matches_bisection() {
    assert!((lambert_w_minus1(-0.1).unwrap() + 3.577152).abs() < 1e-6);
    for z in [-0.36, -0.3, -0.2, -0.1, -1e-2, -1e-5, -1e-20, -1e-100] {
        let w = lambert_w_minus1(z).unwrap();
        let oracle = bisect(z);
        assert!((w - oracle).abs() <= 1e-10 * oracle.abs(), "z = {z}: {w} vs {oracle}");
    }
}

fn expm(a: &SquareMatrix, x: f64) -> SquareMatrix {
    // scaling and squaring with a 20-term Taylor series
    let s = 10;
    let scaled = a.scale(x / f64::powi(2.0, s));
    let mut term = SquareMatrix::identity(a.size());
    let mut sum = term.clone();
    for k in 1..20 {
        term = term.matmul(&scaled).scale(1.0 / k as f64);
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

#[test]
fn rk4_matches_matrix_exponential() {
    let a = SquareMatrix::from_rows(&[vec![0.3, -1.0], vec![0.5, -0.2]]).unwrap();
    let grid = Grid1D::new(1.0, 50, 1.0, 1.0, 1.0).unwrap();
    let w0 = [1.0, -0.5];
    let prof = integrate_steady_state(|_, w| a.mul_vec(w), &w0, &grid).unwrap();
    for (x, w) in grid.centers_with_ghosts().iter().zip(&prof) {
        let exact = expm(&a, *x).mul_vec(&w0);
        assert!((w[0] - exact[0]).abs() < 1e-8 && (w[1] - exact[1]).abs() < 1e-8);
    }
}

#[test]
fn euler_density_closed_form_matches_ode_and_explicit_formula() {
    let p = EulerParams::example();
    let grid = Grid1D::new(1.0, 100, 1.0, 1.0, 1.0).unwrap();
    let ode = integrate_steady_state(
        |_, w| {
            let rho = w[0];
            vec![-0.5 * p.f_over_d * p.q * p.q.abs() * rho / (p.a * p.a * rho * rho - p.q * p.q)]
        },
        &[3.0],
        &grid,
    )
    .unwrap();
    for (x, w) in grid.centers_with_ghosts().iter().zip(&ode) {
        let closed = p.rho_star(*x).unwrap();
        assert!((closed - w[0]).abs() < 1e-10, "x = {x}");
        let lw = lambert_w_minus1(-225.0 * (x - 225.0).exp()).unwrap();
        let explicit = 3.0 / (lw / 2.0 - x / 2.0 + 112.5).exp();
        assert!((closed - explicit).abs() < 1e-9 * closed, "x = {x}: {closed} vs {explicit}");
    }
    let lw = lambert_w_minus1(-225.0 * (-225.0_f64).exp()).unwrap();
    assert!((3.0 / (lw / 2.0 + 112.5).exp() - 3.0).abs() < 1e-12);
}

#[test]
fn euler_source_signs() {
    // gamma22 comes out positive on [0, 1]; C2 still fails for the example weights
    let p = EulerParams::example();
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        let g = p.gamma(x, 1e-4).unwrap();
        assert!(g[(1, 1)] > 0.0);
        let [l1, l2] = p.lambda(x).unwrap();
        assert!((l1 - l2 - 2.0 * p.a).abs() < 1e-14);
    }
    let r = euler_spec(400).build().unwrap().certify().unwrap();
    assert!(!r.source.passed);
}

#[test]
fn saint_venant_override_is_noted() {
    let sc = decay_example_spec(0.05, 200).build().unwrap();
    assert!(!sc.notes.is_empty());
    let g = SaintVenantParams::example().gamma(0.5);
    assert!((g[(0, 0)] - 0.0992).abs() > 1e-6);
}

proptest! {
    #[test]
    fn saint_venant_round_trip(x in 0.0..1.0f64, h in 0.1..10.0f64, v in -5.0..5.0f64) {
        let p = SaintVenantParams::example();
        let w = p.to_characteristic(x, h, v);
        let (h2, v2) = p.from_characteristic(x, w);
        prop_assert!((h - h2).abs() <= 1e-12 * h.max(1.0));
        prop_assert!((v - v2).abs() <= 1e-12 * v.abs().max(1.0));
        let [l1, l2] = p.lambda(x);
        prop_assert!((l1 - l2 - 2.0 * (9.81_f64 * 2.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lambert_residual(s in -700.0..-1.0000001f64) {
        let z = -(s.exp());
        let w = lambert_w_minus1(z).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!((w * w.exp() - z).abs() <= 1e-13 * z.abs());
    }
}
