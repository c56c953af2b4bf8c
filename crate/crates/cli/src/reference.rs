//! Reference convergence values for the linear benchmark, used to print the
//! relative deviation of `table` rows.

use hypiss::models::{linear_benchmark_spec, BenchmarkConfig};
use hypiss::ScenarioSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub sup: f64,
    pub l2: f64,
    pub eta: f64,
}

const CELLS: [usize; 4] = [200, 400, 800, 1600];
const ETA: [f64; 4] = [0.57335, 0.57417, 0.57459, 0.57479];
const CFL_075: [(f64, f64); 4] = [(0.23286, 0.36365), (0.23069, 0.36113), (0.22918, 0.35931), (0.22813, 0.35801)];
const CFL_1: [(f64, f64); 4] = [(0.23026, 0.32884), (0.22886, 0.32746), (0.2279, 0.32645), (0.22723, 0.32572)];

/// Reference values when `spec` is exactly the benchmark on `cells` cells at
/// its own Courant number.
pub fn lookup(spec: &ScenarioSpec, cells: usize) -> Option<Reference> {
    let cfl = spec.grid.cfl;
    let table = if cfl == 0.75 {
        CFL_075
    } else if cfl == 1.0 {
        CFL_1
    } else {
        return None;
    };
    let i = CELLS.iter().position(|&c| c == cells)?;
    let mut expected = linear_benchmark_spec(&BenchmarkConfig {
        cells,
        cfl,
        ..Default::default()
    });
    expected.name.clone_from(&spec.name);
    if spec.with_grid(cells, cfl) != expected {
        return None;
    }
    Some(Reference {
        sup: table[i].0,
        l2: table[i].1,
        eta: ETA[i],
    })
}
