//! Reference solutions, error norms, classical baselines and grid studies.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::DualGrid;
use crate::linalg::{thomas_solve, TridiagonalSystem};
use crate::problem::{AssemblyMode, ProblemSpec, StepParams};
use crate::spline::QuadSpline;
use crate::stepper::{run, snapshot_steps};

/// Decaying Gaussian pulse advected with speed `convection`:
/// `1 / (2 sqrt(pi D (t+1))) * exp(-(x - center - V t)^2 / (4 D (t+1)))`.
/// The shifted time keeps the initial profile finite while solving the
/// constant-coefficient equation with zero source exactly.
pub fn exact_gaussian(x: f64, t: f64, diffusion: f64, convection: f64, center: f64) -> f64 {
    let spread = 4.0 * diffusion * (t + 1.0);
    let arg = x - center - convection * t;
    (-arg * arg / spread).exp() / (2.0 * (PI * diffusion * (t + 1.0)).sqrt())
}

/// `exp(-t) sin(pi x / L)`: vanishes at both boundaries for every `t`.
pub fn manufactured_sine_solution(x: f64, t: f64, length: f64) -> f64 {
    (-t).exp() * (PI * x / length).sin()
}

/// Source that makes [`manufactured_sine_solution`] solve
/// `u_t = D u_xx - V u_x + A u + f`.
pub fn manufactured_sine_source(
    x: f64,
    t: f64,
    diffusion: f64,
    convection: f64,
    reaction: f64,
    length: f64,
) -> f64 {
    let w = PI / length;
    (-t).exp()
        * ((-1.0 + diffusion * w * w - reaction) * (w * x).sin() + convection * w * (w * x).cos())
}

/// Discrete error norms against a reference function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Largest pointwise error.
    pub linf: f64,
    /// Trapezoidal `L2` norm of the error over the sampled points.
    pub l2: f64,
    /// `linf` divided by the largest reference magnitude over the same
    /// points (zero when both vanish).
    pub linf_rel: f64,
    pub sample_count: usize,
}

impl ErrorReport {
    /// True when the reference is matched to within a factor `1e-9` of its
    /// own scale — the resolution floor of the double-precision pipeline.
    pub fn exact_to_machine(&self) -> bool {
        self.linf_rel <= 1e-9
    }
}

/// Trapezoidal norms of `values - exact` over strictly increasing `points`.
pub fn error_norms(
    points: &[f64],
    values: &[f64],
    exact: impl Fn(f64) -> f64,
) -> Result<ErrorReport> {
    if points.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: points.len(),
            got: values.len(),
        });
    }
    if points.len() < 2 {
        return Err(Error::TooFewNodes(points.len()));
    }
    let mut linf = 0.0f64;
    let mut scale = 0.0f64;
    let mut errs = Vec::with_capacity(points.len());
    for (&x, &v) in points.iter().zip(values) {
        let reference = exact(x);
        let e = (v - reference).abs();
        linf = linf.max(e);
        scale = scale.max(reference.abs());
        errs.push(e);
    }
    let mut sum = 0.0f64;
    for i in 0..points.len() - 1 {
        let dx = points[i + 1] - points[i];
        if !(dx > 0.0) {
            return Err(Error::NotIncreasing(i));
        }
        sum += dx * (errs[i] * errs[i] + errs[i + 1] * errs[i + 1]) / 2.0;
    }
    let linf_rel = if scale > 0.0 {
        linf / scale
    } else if linf == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ErrorReport {
        linf,
        l2: sum.sqrt(),
        linf_rel,
        sample_count: points.len(),
    })
}

/// Norms of a spline level against a reference, sampled at every knot plus
/// `samples_per_interval - 1` equispaced interior points per interval.
pub fn spline_error_norms(
    spline: &QuadSpline,
    samples_per_interval: usize,
    exact: impl Fn(f64) -> f64,
) -> Result<ErrorReport> {
    let k = samples_per_interval.max(1);
    let taus = spline.grid().taus();
    let mut points = Vec::with_capacity((taus.len() - 1) * k + 1);
    let mut values = Vec::with_capacity(points.capacity());
    for j in 0..taus.len() - 1 {
        let width = taus[j + 1] - taus[j];
        for m in 0..k {
            let x = taus[j] + width * m as f64 / k as f64;
            points.push(x);
            values.push(spline.eval(x));
        }
    }
    points.push(taus[taus.len() - 1]);
    values.push(spline.eval(taus[taus.len() - 1]));
    error_norms(&points, &values, exact)
}

/// Classical single-grid backward-Euler discretizations used as comparison
/// baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// First-order upwinding of the convective term.
    ImplicitUpwind,
    /// Second-order central convective difference; oscillates once the cell
    /// Peclet number `V h / D` passes 2.
    ImplicitCentral,
}

impl BaselineKind {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineKind::ImplicitUpwind => "implicit_upwind",
            BaselineKind::ImplicitCentral => "implicit_central",
        }
    }
}

/// Equispaced nodes `j h`, `h = L / (n - 1)`, last node anchored at `L`.
pub fn plain_grid(length: f64, n: usize) -> Result<Vec<f64>> {
    if !(length > 0.0) {
        return Err(Error::NonPositiveLength(length));
    }
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    let h = length / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    xs[n - 1] = length;
    Ok(xs)
}

/// One backward-Euler step of a baseline scheme on the plain grid.
pub fn baseline_step(
    problem: &ProblemSpec,
    kind: BaselineKind,
    xs: &[f64],
    rho: f64,
    u_prev: &[f64],
    t_next: f64,
) -> Result<Vec<f64>> {
    let n = xs.len();
    if u_prev.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: u_prev.len(),
        });
    }
    if !(rho > 0.0) {
        return Err(Error::NonPositiveTimeStep(rho));
    }
    let (d, v, a) = problem
        .constant_coefficients()
        .ok_or(Error::NonConstantCoefficients)?;
    let h = xs[1] - xs[0];
    let dh2 = d / (h * h);

    let (sub_w, diag_w, sup_w) = match kind {
        BaselineKind::ImplicitCentral => (
            -rho * (dh2 + v / (2.0 * h)),
            1.0 + rho * (2.0 * dh2 - a),
            -rho * (dh2 - v / (2.0 * h)),
        ),
        BaselineKind::ImplicitUpwind => {
            let vp = v.max(0.0);
            let vm = (-v).max(0.0);
            (
                -rho * (dh2 + vp / h),
                1.0 + rho * (2.0 * dh2 + (vp + vm) / h - a),
                -rho * (dh2 + vm / h),
            )
        }
    };

    let left = (problem.left_boundary)(t_next);
    let right = (problem.right_boundary)(t_next);
    let rows = n - 2;
    let mut rhs = Vec::with_capacity(rows);
    for j in 1..n - 1 {
        rhs.push(u_prev[j] + rho * problem.source.eval(xs[j], t_next));
    }
    rhs[0] -= sub_w * left;
    rhs[rows - 1] -= sup_w * right;

    let sys = TridiagonalSystem::new(
        vec![sub_w; rows - 1],
        vec![diag_w; rows],
        vec![sup_w; rows - 1],
        rhs,
    )?;
    let interior = thomas_solve(&sys)?;

    let mut u = Vec::with_capacity(n);
    u.push(left);
    u.extend_from_slice(&interior);
    u.push(right);
    Ok(u)
}

/// One recorded level of a baseline run.
#[derive(Debug, Clone)]
pub struct BaselineSnapshot {
    pub step: usize,
    pub t: f64,
    pub values: Vec<f64>,
    pub running_min: f64,
    pub running_max: f64,
}

#[derive(Debug, Clone)]
pub struct BaselineRun {
    pub xs: Vec<f64>,
    pub snapshots: Vec<BaselineSnapshot>,
}

/// March a baseline scheme to `t_end`, mirroring the snapshot conventions of
/// [`run`](crate::stepper::run).
pub fn baseline_run(
    problem: &ProblemSpec,
    kind: BaselineKind,
    n: usize,
    rho: f64,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<BaselineRun> {
    let xs = plain_grid(problem.length, n)?;
    let (steps, marks) = snapshot_steps(t_end, rho, snapshot_times)?;
    let mut u: Vec<f64> = xs.iter().map(|&x| (problem.initial)(x)).collect();
    let mut running_min = u.iter().copied().fold(f64::INFINITY, f64::min);
    let mut running_max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut snapshots = Vec::with_capacity(marks.len());
    let mut next_mark = 0;
    for k in 1..=steps {
        let t_next = k as f64 * rho;
        u = baseline_step(problem, kind, &xs, rho, &u, t_next).map_err(|e| e.at_step(k))?;
        if !u.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { step: k });
        }
        for &v in &u {
            running_min = running_min.min(v);
            running_max = running_max.max(v);
        }
        if next_mark < marks.len() && marks[next_mark] == k {
            snapshots.push(BaselineSnapshot {
                step: k,
                t: t_next,
                values: u.clone(),
                running_min,
                running_max,
            });
            next_mark += 1;
        }
    }
    Ok(BaselineRun { xs, snapshots })
}

/// Grid-refinement study parameters. The spatial sweep doubles the node
/// count per level at the fixed time step `rho`; the temporal sweep halves
/// `rho` per level on the finest spatial grid.
#[derive(Debug, Clone)]
pub struct StudyParams {
    pub base_n: usize,
    pub levels: usize,
    pub rho: f64,
    pub t_end: f64,
    pub mu_fraction: f64,
    pub mode: AssemblyMode,
    pub strict_monotone: bool,
    /// Interior sample points per interval when measuring errors.
    pub samples_per_interval: usize,
}

#[derive(Debug, Clone)]
pub struct ConvergenceLevel {
    pub level: usize,
    pub n: usize,
    pub h: f64,
    pub rho: f64,
    pub linf: f64,
    pub l2: f64,
    /// `log2` of the error drop from the previous level; `None` on the first
    /// level and wherever the error sits at the machine floor.
    pub order_linf: Option<f64>,
    pub exact_to_machine: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub spatial: Vec<ConvergenceLevel>,
    pub temporal: Vec<ConvergenceLevel>,
}

fn level_error(
    problem: &ProblemSpec,
    n: usize,
    rho: f64,
    params: &StudyParams,
) -> Result<(f64, ErrorReport)> {
    let grid = Arc::new(DualGrid::uniform(problem.length, n, params.mu_fraction)?);
    let step_params = StepParams {
        rho,
        mode: params.mode,
        strict_monotone: params.strict_monotone,
    };
    let outcome = run(problem, &grid, &step_params, params.t_end, &[])?;
    let state = outcome.final_state;
    let spline = state.spline.as_ref().expect("run takes at least one step");
    let exact = problem.exact.clone().ok_or(Error::MissingExactSolution)?;
    let t = state.t;
    let report = spline_error_norms(spline, params.samples_per_interval, |x| exact(x, t))?;
    Ok((grid.h(), report))
}

fn push_level(
    levels: &mut Vec<ConvergenceLevel>,
    level: usize,
    n: usize,
    h: f64,
    rho: f64,
    report: ErrorReport,
) {
    let exact_to_machine = report.exact_to_machine();
    let order_linf = levels.last().and_then(|prev| {
        if exact_to_machine || prev.exact_to_machine || report.linf == 0.0 || prev.linf == 0.0 {
            None
        } else {
            Some((prev.linf / report.linf).log2())
        }
    });
    levels.push(ConvergenceLevel {
        level,
        n,
        h,
        rho,
        linf: report.linf,
        l2: report.l2,
        order_linf,
        exact_to_machine,
    });
}

/// Run the spatial and temporal refinement sweeps and report per-level
/// errors and observed orders.
pub fn convergence_study(problem: &ProblemSpec, params: &StudyParams) -> Result<ConvergenceStudy> {
    if params.levels < 2 {
        return Err(Error::TooFewLevels(params.levels));
    }
    if problem.exact.is_none() {
        return Err(Error::MissingExactSolution);
    }

    let mut spatial = Vec::with_capacity(params.levels);
    for j in 0..params.levels {
        let n = (params.base_n - 1) * (1usize << j) + 1;
        let (h, report) = level_error(problem, n, params.rho, params)?;
        push_level(&mut spatial, j, n, h, params.rho, report);
    }

    let finest_n = (params.base_n - 1) * (1usize << (params.levels - 1)) + 1;
    let mut temporal = Vec::with_capacity(params.levels);
    for j in 0..params.levels {
        let rho = params.rho * 0.5f64.powi(j as i32);
        let (h, report) = level_error(problem, finest_n, rho, params)?;
        push_level(&mut temporal, j, finest_n, h, rho, report);
    }

    Ok(ConvergenceStudy { spatial, temporal })
}
