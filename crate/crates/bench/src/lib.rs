//! Shared setup for the criterion benches: the travelling-pulse benchmark
//! problem at its production size, plus a few smaller fixtures.

use std::sync::Arc;

use splinecdr::problem::{build_problem, AssemblyMode, Preset, PresetParams, StepParams};
use splinecdr::stepper::initial_state;
use splinecdr::{DualGrid, ProblemSpec, SolverState};

pub const BENCH_N: usize = 4801;
pub const BENCH_RHO: f64 = 5e-4;

pub fn pulse_problem() -> ProblemSpec {
    build_problem(
        Preset::Gaussian,
        &PresetParams {
            length: 2.4,
            diffusion: 1e-3,
            convection: 1.0,
            reaction: 0.0,
            constant_value: 1.0,
        },
    )
    .unwrap()
}

pub fn pulse_grid(n: usize) -> Arc<DualGrid> {
    Arc::new(DualGrid::uniform(2.4, n, 0.5).unwrap())
}

pub fn pulse_params() -> StepParams {
    StepParams::new(BENCH_RHO, AssemblyMode::Uniform).unwrap()
}

pub fn pulse_state(problem: &ProblemSpec, grid: &Arc<DualGrid>) -> SolverState {
    initial_state(problem, grid)
}
