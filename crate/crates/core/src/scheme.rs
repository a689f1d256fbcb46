//! Assembly of the implicit three-point scheme.
//!
//! One backward-Euler step turns the evolution problem into a two-point
//! boundary value problem for the new time level. On every coarse interval
//! `[tau_i, tau_{i+1}]` the new solution is represented by the quadratic
//! through `(tau_i, phi_i)`, `(x_{i+1}, C_{i+1})`, `(tau_{i+1}, phi_{i+1})`;
//! collocating the semi-discrete equation at the interior node `x_{i+1}`
//! expresses `C_{i+1}` through its knot neighbours, and requiring the first
//! derivative of adjacent pieces to match at each interior knot yields one
//! tridiagonal row per knot.
//!
//! With a uniform grid and constant coefficients the rows collapse to the
//! closed form
//!
//! ```text
//! alpha * phi_{i-1} - gamma * phi_i + beta * phi_{i+1}
//!     = -(f_i + f_{i+1})/2 - (u_i + u_{i+1})/(2 rho)
//! ```
//!
//! whose weights are produced by [`scheme_coefficients`]. The offset `mu` of
//! the collocation nodes acts as an upwinding parameter: all three weights
//! keep the signs of an M-matrix row exactly when the time step `rho` clears
//! the thresholds reported by [`monotonicity_report`].

use crate::error::{Error, Result};
use crate::grid::DualGrid;
use crate::linalg::TridiagonalSystem;
use crate::problem::{ProblemSpec, StepParams};

/// Stencil weights of the uniform-grid, constant-coefficient row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeCoefficients {
    /// Weight of the left knot value.
    pub alpha: f64,
    /// Weight of the centre knot value (the row carries `-gamma`).
    pub gamma: f64,
    /// Weight of the right knot value.
    pub beta: f64,
    /// Convective-diffusive part of `alpha`: `(D + V mu) / h^2`.
    pub a: f64,
    /// Convective-diffusive part of `beta`: `D/h^2 - (V/h)(1 - mu/h)`.
    pub b: f64,
}

fn check_scheme_inputs(diffusion: f64, rho: f64, h: f64, mu: f64) -> Result<()> {
    if !(diffusion > 0.0) {
        return Err(Error::NonPositiveDiffusion(diffusion));
    }
    if !(rho > 0.0) {
        return Err(Error::NonPositiveTimeStep(rho));
    }
    if !(h > 0.0) {
        return Err(Error::NonPositiveSpatialStep(h));
    }
    if !(mu > 0.0 && mu < h) {
        return Err(Error::OffsetOutOfRange(mu / h));
    }
    Ok(())
}

/// Closed-form row weights for spacing `h`, offset `mu` and time step `rho`.
pub fn scheme_coefficients(
    diffusion: f64,
    convection: f64,
    reaction: f64,
    rho: f64,
    h: f64,
    mu: f64,
) -> Result<SchemeCoefficients> {
    check_scheme_inputs(diffusion, rho, h, mu)?;
    let h2 = h * h;
    let sigma = 1.0 / rho - reaction;
    let a = diffusion / h2 + convection * mu / h2;
    let b = diffusion / h2 - (convection / h) * (1.0 - mu / h);
    let alpha = a - mu * mu / (2.0 * h2) * sigma;
    let beta = b - (h - mu) * (h - mu) / (2.0 * h2) * sigma;
    let gamma = a + b + (2.0 * h2 - mu * mu - (h - mu) * (h - mu)) / (2.0 * h2) * sigma;
    Ok(SchemeCoefficients {
        alpha,
        gamma,
        beta,
        a,
        b,
    })
}

/// Monotonicity diagnosis for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    /// Lower time-step threshold enforcing `alpha > 0`; `None` when no time
    /// step can satisfy it at this offset.
    pub rho1: Option<f64>,
    /// Lower time-step threshold enforcing `beta > 0`; `None` when no time
    /// step can satisfy it at this offset.
    pub rho2: Option<f64>,
    /// Upper bound `1/A` when the reaction is positive, `None` otherwise.
    pub rho_max_reaction: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Verdict from the signs actually realised: `alpha > 0`, `beta > 0`
    /// and `gamma >= alpha + beta`.
    pub monotone: bool,
}

/// Evaluate the monotonicity thresholds and the realised row signs.
pub fn monotonicity_report(
    diffusion: f64,
    convection: f64,
    reaction: f64,
    rho: f64,
    h: f64,
    mu: f64,
) -> Result<MonotonicityReport> {
    let coeffs = scheme_coefficients(diffusion, convection, reaction, rho, h, mu)?;

    let denom1 = 2.0 * (diffusion + convection * mu) + reaction * mu * mu;
    let rho1 = (denom1 > 0.0).then(|| mu * mu / denom1);
    let hm = h - mu;
    let denom2 = 2.0 * (diffusion + convection * mu - convection * h) + reaction * hm * hm;
    let rho2 = (denom2 > 0.0).then(|| hm * hm / denom2);
    let rho_max_reaction = (reaction > 0.0).then(|| 1.0 / reaction);

    let monotone =
        coeffs.alpha > 0.0 && coeffs.beta > 0.0 && coeffs.gamma >= coeffs.alpha + coeffs.beta;

    Ok(MonotonicityReport {
        rho1,
        rho2,
        rho_max_reaction,
        alpha: coeffs.alpha,
        beta: coeffs.beta,
        gamma: coeffs.gamma,
        monotone,
    })
}

/// One assembled row: `q_prev * phi_{i-1} + q_self * phi_i +
/// q_next * phi_{i+1} = f_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QTriple {
    pub q_prev: f64,
    pub q_self: f64,
    pub q_next: f64,
    pub f_term: f64,
}

/// Coefficient samples at one collocation node, plus the previous time level
/// there. `source` is the raw `f` value; the time coupling `u_prev / rho` is
/// added internally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSample {
    pub diffusion: f64,
    pub convection: f64,
    pub reaction: f64,
    pub source: f64,
    pub u_prev: f64,
}

/// Collocation elimination on one interval: the interior value satisfies
/// `C = (n_prev * phi_left + n_next * phi_right + source) / denom`.
///
/// Reconstruction and assembly both go through this function, so the bracket
/// denominators they use are bitwise identical by construction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Elimination {
    pub n_prev: f64,
    pub n_next: f64,
    pub source: f64,
    pub denom: f64,
}

pub(crate) fn eliminate_interval(
    tau_left: f64,
    x_mid: f64,
    tau_right: f64,
    sample: &PointSample,
    rho: f64,
) -> Option<Elimination> {
    let p = x_mid - tau_left;
    let s = tau_right - x_mid;
    let t = tau_right - tau_left;
    let two_d = 2.0 * sample.diffusion;
    let sigma = 1.0 / rho - sample.reaction;
    let n_prev = (two_d + sample.convection * s) / (p * t);
    let n_next = (two_d - sample.convection * p) / (s * t);
    let denom = (two_d - sample.convection * (p - s)) / (p * s) + sigma;
    if !denom.is_finite() || denom.abs() < f64::MIN_POSITIVE {
        return None;
    }
    Some(Elimination {
        n_prev,
        n_next,
        source: sample.source + sample.u_prev / rho,
        denom,
    })
}

/// Derivative weights of one quadratic piece at one of its knots, split by
/// unknown. `at_left` selects the left knot of the interval.
struct KnotDerivWeights {
    phi_left: f64,
    c_mid: f64,
    phi_right: f64,
}

fn deriv_weights(tau_left: f64, x_mid: f64, tau_right: f64, at_left: bool) -> KnotDerivWeights {
    let p = x_mid - tau_left;
    let s = tau_right - x_mid;
    let t = tau_right - tau_left;
    if at_left {
        KnotDerivWeights {
            phi_left: -(p + t) / (p * t),
            c_mid: t / (p * s),
            phi_right: -p / (s * t),
        }
    } else {
        KnotDerivWeights {
            phi_left: s / (p * t),
            c_mid: -t / (p * s),
            phi_right: (t + s) / (s * t),
        }
    }
}

fn q_from_eliminations(
    left_weights: &KnotDerivWeights,
    right_weights: &KnotDerivWeights,
    left: &Elimination,
    right: &Elimination,
) -> QTriple {
    // Derivative continuity at the shared knot, with both interior values
    // substituted by their eliminations. The left piece is evaluated at its
    // right knot, the right piece at its left knot.
    let q_prev = left_weights.phi_left + left_weights.c_mid * left.n_prev / left.denom;
    let q_self = left_weights.phi_right
        + left_weights.c_mid * left.n_next / left.denom
        - (right_weights.phi_left + right_weights.c_mid * right.n_prev / right.denom);
    let q_next = -(right_weights.phi_right + right_weights.c_mid * right.n_next / right.denom);
    let f_term = -left_weights.c_mid * left.source / left.denom
        + right_weights.c_mid * right.source / right.denom;
    QTriple {
        q_prev,
        q_self,
        q_next,
        f_term,
    }
}

/// Assemble one interior row from raw geometry and per-node samples. The
/// knots `tau_prev < tau_mid < tau_next` surround the row's knot `tau_mid`;
/// `x_left` and `x_right` are the collocation nodes of the two intervals.
#[allow(clippy::too_many_arguments)]
pub fn q_coefficients(
    tau_prev: f64,
    tau_mid: f64,
    tau_next: f64,
    x_left: f64,
    x_right: f64,
    left: &PointSample,
    right: &PointSample,
    rho: f64,
) -> Result<QTriple> {
    let el = eliminate_interval(tau_prev, x_left, tau_mid, left, rho)
        .ok_or(Error::DegenerateElimination { interval: 0 })?;
    let er = eliminate_interval(tau_mid, x_right, tau_next, right, rho)
        .ok_or(Error::DegenerateElimination { interval: 1 })?;
    let lw = deriv_weights(tau_prev, x_left, tau_mid, false);
    let rw = deriv_weights(tau_mid, x_right, tau_next, true);
    Ok(q_from_eliminations(&lw, &rw, &el, &er))
}

fn check_state_length(grid: &DualGrid, u_prev: &[f64]) -> Result<()> {
    if u_prev.len() != grid.n() + 1 {
        return Err(Error::LengthMismatch {
            expected: grid.n() + 1,
            got: u_prev.len(),
        });
    }
    Ok(())
}

/// Closed-form assembly: uniform grid, constant coefficients. Produces the
/// canonical orientation (positive off-diagonals, negative diagonal when the
/// scheme is monotone). Boundary values at the new time are folded into the
/// first and last right-hand sides.
pub fn assemble_uniform(
    problem: &ProblemSpec,
    grid: &DualGrid,
    params: &StepParams,
    u_prev: &[f64],
    t_next: f64,
) -> Result<TridiagonalSystem> {
    if !grid.is_uniform() {
        return Err(Error::NonUniformGrid);
    }
    check_state_length(grid, u_prev)?;
    let (d, v, a_reaction) = problem
        .constant_coefficients()
        .ok_or(Error::NonConstantCoefficients)?;
    let coeffs = scheme_coefficients(d, v, a_reaction, params.rho, grid.h(), grid.mu())?;

    let n = grid.n();
    let rows = n - 2;
    let xs = grid.xs();
    let two_rho = 2.0 * params.rho;

    let mut rhs = Vec::with_capacity(rows);
    for i in 1..=rows {
        let f_left = problem.source.eval(xs[i], t_next);
        let f_right = problem.source.eval(xs[i + 1], t_next);
        rhs.push(-(f_left + f_right) / 2.0 - (u_prev[i] + u_prev[i + 1]) / two_rho);
    }
    rhs[0] -= coeffs.alpha * (problem.left_boundary)(t_next);
    rhs[rows - 1] -= coeffs.beta * (problem.right_boundary)(t_next);

    TridiagonalSystem::new(
        vec![coeffs.alpha; rows - 1],
        vec![-coeffs.gamma; rows],
        vec![coeffs.beta; rows - 1],
        rhs,
    )
}

fn point_sample(problem: &ProblemSpec, x: f64, t: f64, u_prev: f64) -> PointSample {
    PointSample {
        diffusion: problem.diffusion.eval(x, t),
        convection: problem.convection.eval(x, t),
        reaction: problem.reaction.eval(x, t),
        source: problem.source.eval(x, t),
        u_prev,
    }
}

fn interval_eliminations(
    problem: &ProblemSpec,
    grid: &DualGrid,
    rho: f64,
    u_prev: &[f64],
    t_next: f64,
) -> Result<Vec<Elimination>> {
    let taus = grid.taus();
    let xs = grid.xs();
    (0..grid.interval_count())
        .map(|j| {
            let sample = point_sample(problem, xs[j + 1], t_next, u_prev[j + 1]);
            eliminate_interval(taus[j], xs[j + 1], taus[j + 1], &sample, rho)
                .ok_or(Error::DegenerateElimination { interval: j })
        })
        .collect()
}

/// Interval-by-interval assembly for arbitrary interleaved grids and sampled
/// coefficient fields. Rows are the [`q_coefficients`] outputs; on a uniform
/// grid with constant coefficients each row is a scalar multiple of the
/// closed-form row, so both assemblies solve identically.
pub fn assemble_general(
    problem: &ProblemSpec,
    grid: &DualGrid,
    params: &StepParams,
    u_prev: &[f64],
    t_next: f64,
) -> Result<TridiagonalSystem> {
    check_state_length(grid, u_prev)?;
    if !(params.rho > 0.0) {
        return Err(Error::NonPositiveTimeStep(params.rho));
    }
    let elims = interval_eliminations(problem, grid, params.rho, u_prev, t_next)?;
    let taus = grid.taus();
    let xs = grid.xs();
    let n = grid.n();
    let rows = n - 2;

    let mut sub = Vec::with_capacity(rows - 1);
    let mut diag = Vec::with_capacity(rows);
    let mut sup = Vec::with_capacity(rows - 1);
    let mut rhs = Vec::with_capacity(rows);

    for i in 1..=rows {
        let lw = deriv_weights(taus[i - 1], xs[i], taus[i], false);
        let rw = deriv_weights(taus[i], xs[i + 1], taus[i + 1], true);
        let q = q_from_eliminations(&lw, &rw, &elims[i - 1], &elims[i]);
        let mut f_term = q.f_term;
        if i == 1 {
            f_term -= q.q_prev * (problem.left_boundary)(t_next);
        } else {
            sub.push(q.q_prev);
        }
        if i == rows {
            f_term -= q.q_next * (problem.right_boundary)(t_next);
        } else {
            sup.push(q.q_next);
        }
        diag.push(q.q_self);
        rhs.push(f_term);
    }

    TridiagonalSystem::new(sub, diag, sup, rhs)
}

/// Recover the interior collocation values from the knot solve. `phi` holds
/// all `n` knot values with the boundary entries already set; the result has
/// one value per collocation node, boundaries included.
pub fn reconstruct_c(
    phi: &[f64],
    problem: &ProblemSpec,
    grid: &DualGrid,
    params: &StepParams,
    u_prev: &[f64],
    t_next: f64,
) -> Result<Vec<f64>> {
    let n = grid.n();
    if phi.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: phi.len(),
        });
    }
    check_state_length(grid, u_prev)?;
    let elims = interval_eliminations(problem, grid, params.rho, u_prev, t_next)?;

    let mut c = Vec::with_capacity(n + 1);
    c.push(phi[0]);
    for (j, el) in elims.iter().enumerate() {
        c.push((el.n_prev * phi[j] + el.n_next * phi[j + 1] + el.source) / el.denom);
    }
    c.push(phi[n - 1]);
    Ok(c)
}
