use hypiss::lyapunov::{evaluate, fit_decay_rate};
use hypiss::models::{build_linear_benchmark, BenchmarkConfig};
use hypiss::solver::{apply_boundary, source_step};
use hypiss::system::sample_coefficients;
use hypiss::{BoundaryCoupling, DisturbanceSignal, Grid1D, Simulation, SquareMatrix, StateField, WeightField};
use proptest::prelude::*;

fn small_system(cells: usize, k12: f64, k21: f64) -> (Grid1D, hypiss::SystemCoefficients) {
    let grid = Grid1D::new(1.0, cells, 0.5, 0.9, 1.5).unwrap();
    let gamma = SquareMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.1, 0.3]]).unwrap();
    let coeffs = sample_coefficients(|x| vec![1.0 + 0.5 * x, -1.0 - 0.2 * x], |_| gamma.clone(), &grid)
        .unwrap()
        .with_boundary(BoundaryCoupling::two_by_two(k12, k21, 1.0, 1.0))
        .unwrap();
    (grid, coeffs)
}

#[test]
fn source_step_example() {
    let grid = Grid1D::new(1.0, 2, 1.0, 0.5, 1.0).unwrap();
    let gamma = SquareMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.1, 0.3]]).unwrap();
    let coeffs = sample_coefficients(|_| vec![1.0, -1.0], |_| gamma.clone(), &grid).unwrap();
    let w = StateField::from_interior(2, &[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let out = source_step(&w, &coeffs, 0.1).unwrap();
    for j in 0..2 {
        assert!((out.cell(j)[0] - 0.98).abs() < 1e-15);
        assert!((out.cell(j)[1] - 0.98).abs() < 1e-15);
    }
}

#[test]
fn boundary_block_product() {
    let (_, coeffs) = small_system(4, 0.5, 0.5);
    let mut w = StateField::from_interior(2, &[vec![0.0, 0.5], vec![0.0; 2], vec![0.0; 2], vec![-0.5, 0.0]]).unwrap();
    apply_boundary(&mut w, &coeffs, &[0.0, 0.0]).unwrap();
    assert_eq!(w.cell(-1)[0], 0.25);
    assert_eq!(w.cell(4)[1], -0.25);
}

#[test]
fn initial_lyapunov_matches_quadrature() {
    let sc = build_linear_benchmark(&BenchmarkConfig::default()).unwrap();
    let l0 = evaluate(&sc.initial, &sc.weights, &sc.grid).unwrap();
    let mu: f64 = 0.575;
    let exact = 0.25 * 2.0 * mu.sinh() / mu;
    // 0.5283 is the commonly quoted rounding; the closed form gives 0.52801
    assert!((exact - 0.5283).abs() < 5e-4);
    // midpoint rule error is O(dx^2)
    assert!((l0 - exact).abs() < 1e-7, "{l0} vs {exact}");
}

#[test]
fn undisturbed_benchmark_decays_at_least_at_certified_rate() {
    let mut spec = hypiss::models::linear_benchmark_spec(&BenchmarkConfig {
        cells: 200,
        ..Default::default()
    });
    spec.boundary.disturbance = hypiss::scenario::DisturbanceSpec::Zero;
    let sc = spec.build().unwrap();
    let report = sc.certify().unwrap();
    assert!(report.passed);
    let run = sc.run(None).unwrap();
    let rate = fit_decay_rate(&run.times, &run.lyapunov, 1.0).unwrap();
    assert!(rate >= report.eta, "fitted {rate} < certified {}", report.eta);
}

#[test]
fn hook_sees_every_level() {
    let (grid, coeffs) = small_system(10, 0.5, 0.5);
    let init = StateField::from_fn(2, &grid, |x| vec![x, -x]).unwrap();
    let mut seen = Vec::new();
    let out = Simulation::new(&grid, &coeffs, init)
        .run_with(|s| seen.push((s.step(), s.time())))
        .unwrap();
    assert_eq!(seen.len(), grid.steps() + 1);
    assert_eq!(seen.last().unwrap().1, grid.final_time());
    assert_eq!(out.times.len(), seen.len());
}

fn interior(cells: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 2), cells)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_is_linear(u in interior(12), v in interior(12), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let (grid, coeffs) = small_system(12, 0.4, -0.3);
        let su = StateField::from_interior(2, &u).unwrap();
        let sv = StateField::from_interior(2, &v).unwrap();
        let mixed = su.combine(a, &sv, b);
        let run = |s: StateField| Simulation::new(&grid, &coeffs, s).run().unwrap().final_state;
        let lhs = run(mixed);
        let rhs = run(su).combine(a, &run(sv), b);
        for (x, y) in lhs.interior().iter().zip(rhs.interior()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn weight_sandwich(u in interior(16), mu in 0.0..2.0f64, pp in 0.1..3.0f64, pm in 0.1..3.0f64) {
        let grid = Grid1D::new(1.0, 16, 1.0, 0.5, 1.0).unwrap();
        let w = WeightField::exponential(&[pp], &[pm], mu, &grid).unwrap();
        let s = StateField::from_interior(2, &u).unwrap();
        let l = evaluate(&s, &w, &grid).unwrap();
        let (zeta, beta) = w.interior_bounds();
        let norm = s.l2_sq(grid.dx());
        prop_assert!(zeta * norm <= l * (1.0 + 1e-12) + 1e-300);
        prop_assert!(l <= beta * norm * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn zero_state_stays_zero(k12 in -0.9..0.9f64, k21 in -0.9..0.9f64) {
        let (grid, coeffs) = small_system(10, k12, k21);
        let out = Simulation::new(&grid, &coeffs, StateField::zeros(2, 10)).run().unwrap();
        prop_assert!(out.final_state.raw().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn certified_runs_are_dominated(
        u in interior(40),
        mu in 0.3..0.8f64,
        k12 in -0.5..0.5f64,
        k21 in -0.4..0.4f64,
        amp in 0.0..0.2f64,
    ) {
        let grid = Grid1D::new(1.0, 40, 2.0, 0.8, 1.0).unwrap();
        let gamma = SquareMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.1, 0.3]]).unwrap();
        let coeffs = sample_coefficients(|_| vec![1.0, -1.0], |_| gamma.clone(), &grid)
            .unwrap()
            .with_boundary(BoundaryCoupling::two_by_two(k12, k21, 1.0, 1.0))
            .unwrap()
            .with_disturbance(DisturbanceSignal::custom(2, move |t| vec![amp * (3.0 * t).sin(), -amp]))
            .unwrap();
        let weights = WeightField::exponential(&[1.0], &[1.0], mu, &grid).unwrap();
        let report = hypiss::certify(&coeffs, &weights, &grid, 0.125).unwrap();
        prop_assume!(report.passed);
        let run = Simulation::new(&grid, &coeffs, StateField::from_interior(2, &u).unwrap())
            .with_weights(&weights)
            .run()
            .unwrap();
        let trace = hypiss::LyapunovTrace::from_run(&run, report.eta, report.nu, 0.125, &grid).unwrap();
        prop_assert!(trace.max_violation() <= 1e-12 * trace.values[0].max(1.0));
    }
}
