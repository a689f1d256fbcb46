//! Backward-Euler time marching.
//!
//! The state lives on the collocation grid: those are the nodes where the
//! next right-hand side needs the previous level. Every step solves the
//! tridiagonal knot system, rebuilds the interior values through the same
//! eliminations the assembly used, and wraps both in a [`QuadSpline`].
//!
//! Strictness: with `strict_monotone` set (the default), a uniform-grid
//! constant-coefficient run is refused up front when the time step misses a
//! monotonicity threshold, and a general run is refused at the first
//! assembled row that breaks the M-matrix sign pattern. `permissive`
//! parameters skip both checks — useful for convergence sweeps where the
//! thresholds are deliberately ignored.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::DualGrid;
use crate::linalg::{thomas_solve, TridiagonalSystem};
use crate::problem::{sample_initial, AssemblyMode, ProblemSpec, StepParams};
use crate::scheme::{assemble_general, assemble_uniform, monotonicity_report, reconstruct_c};
use crate::spline::QuadSpline;

/// Solution after `step` completed time steps.
#[derive(Debug, Clone)]
pub struct SolverState {
    /// Completed steps; the represented time is `step * rho`.
    pub step: usize,
    pub t: f64,
    /// Values on the collocation grid, boundaries included.
    pub u_x: Vec<f64>,
    /// Reconstruction of the current level; `None` at the initial state.
    pub spline: Option<QuadSpline>,
}

/// One recorded level of a [`run`].
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub spline: QuadSpline,
    /// Smallest value seen at any node of any level up to this one,
    /// initial data included.
    pub running_min: f64,
    /// Largest value seen so far, initial data included.
    pub running_max: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_state: SolverState,
    pub snapshots: Vec<Snapshot>,
    pub min_value: f64,
    pub max_value: f64,
}

/// State at `t = 0`: initial data sampled on the collocation grid.
pub fn initial_state(problem: &ProblemSpec, grid: &DualGrid) -> SolverState {
    SolverState {
        step: 0,
        t: 0.0,
        u_x: sample_initial(problem, grid),
        spline: None,
    }
}

fn first_non_monotone_row(sys: &TridiagonalSystem) -> Option<usize> {
    if sys.is_monotone_up_to_sign() {
        return None;
    }
    let orientation = -sys.diag[0].signum();
    (0..sys.len())
        .find(|&i| {
            let d = sys.diag[i] * orientation;
            let lo = if i > 0 { sys.sub[i - 1] * orientation } else { 0.0 };
            let hi = if i + 1 < sys.len() { sys.sup[i] * orientation } else { 0.0 };
            let signs_ok = d < 0.0 && (i == 0 || lo > 0.0) && (i + 1 == sys.len() || hi > 0.0);
            !(signs_ok && -d >= lo + hi)
        })
        .or(Some(0))
}

fn check_finite(values: &[f64], step: usize) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { step })
    }
}

/// Advance one time step. Fails without touching `state` on refusal or on a
/// numerical breakdown; errors raised mid-step carry the step index.
pub fn step(
    problem: &ProblemSpec,
    grid: &Arc<DualGrid>,
    params: &StepParams,
    state: &SolverState,
) -> Result<SolverState> {
    let next_step = state.step + 1;
    let t_next = next_step as f64 * params.rho;

    if params.strict_monotone && params.mode == AssemblyMode::Uniform {
        let (d, v, a) = problem
            .constant_coefficients()
            .ok_or(Error::NonConstantCoefficients)?;
        let report = monotonicity_report(d, v, a, params.rho, grid.h(), grid.mu())?;
        if !report.monotone {
            return Err(Error::NotMonotone {
                report: Box::new(report),
            });
        }
    }

    let sys = match params.mode {
        AssemblyMode::Uniform => assemble_uniform(problem, grid, params, &state.u_x, t_next),
        AssemblyMode::General => assemble_general(problem, grid, params, &state.u_x, t_next),
    }
    .map_err(|e| e.at_step(next_step))?;

    if params.strict_monotone && params.mode == AssemblyMode::General {
        if let Some(row) = first_non_monotone_row(&sys) {
            return Err(Error::NonMonotoneRow { row }.at_step(next_step));
        }
    }

    let interior = thomas_solve(&sys).map_err(|e| e.at_step(next_step))?;

    let n = grid.n();
    let mut phi = Vec::with_capacity(n);
    phi.push((problem.left_boundary)(t_next));
    phi.extend_from_slice(&interior);
    phi.push((problem.right_boundary)(t_next));
    check_finite(&phi, next_step)?;

    let c = reconstruct_c(&phi, problem, grid, params, &state.u_x, t_next)
        .map_err(|e| e.at_step(next_step))?;
    check_finite(&c, next_step)?;

    let spline = QuadSpline::new(Arc::clone(grid), phi, c.clone())?;
    Ok(SolverState {
        step: next_step,
        t: t_next,
        u_x: c,
        spline: Some(spline),
    })
}

/// Number of steps covering `[0, t_end]`, with a small relative guard so a
/// horizon that is a floating-point-exact multiple of `rho` is not pushed to
/// an extra step.
pub fn step_count(t_end: f64, rho: f64) -> Result<usize> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveTimeStep(rho));
    }
    let raw = t_end / rho;
    let steps = (raw - 1e-9).ceil();
    if !(steps >= 1.0) {
        return Err(Error::HorizonTooShort { t_end, rho });
    }
    Ok(steps as usize)
}

/// Map requested snapshot times to step indices: nearest step, clamped into
/// the run, duplicates collapsed.
pub fn snapshot_steps(t_end: f64, rho: f64, times: &[f64]) -> Result<(usize, Vec<usize>)> {
    let steps = step_count(t_end, rho)?;
    let mut marks: Vec<usize> = times
        .iter()
        .map(|&s| ((s / rho).round().max(1.0) as usize).min(steps))
        .collect();
    marks.sort_unstable();
    marks.dedup();
    Ok((steps, marks))
}

/// March from the initial data to `t_end`, recording the levels nearest the
/// requested times and tracking global node extrema along the way.
pub fn run(
    problem: &ProblemSpec,
    grid: &Arc<DualGrid>,
    params: &StepParams,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<RunOutcome> {
    let (steps, marks) = snapshot_steps(t_end, params.rho, snapshot_times)?;

    let mut state = initial_state(problem, grid);
    let mut min_value = f64::INFINITY;
    let mut max_value = f64::NEG_INFINITY;
    for &v in &state.u_x {
        min_value = min_value.min(v);
        max_value = max_value.max(v);
    }

    let mut snapshots = Vec::with_capacity(marks.len());
    let mut next_mark = 0;

    for _ in 0..steps {
        state = step(problem, grid, params, &state)?;
        let spline = state.spline.as_ref().expect("post-step state has a spline");
        for &v in spline.phi().iter().chain(spline.c()) {
            min_value = min_value.min(v);
            max_value = max_value.max(v);
        }
        if next_mark < marks.len() && marks[next_mark] == state.step {
            snapshots.push(Snapshot {
                step: state.step,
                t: state.t,
                spline: spline.clone(),
                running_min: min_value,
                running_max: max_value,
            });
            next_mark += 1;
        }
    }

    Ok(RunOutcome {
        final_state: state,
        snapshots,
        min_value,
        max_value,
    })
}
