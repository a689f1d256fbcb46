//! Reference solver for one implicit step: the full coupled system.
//!
//! The production path eliminates each interior value analytically and
//! solves a tridiagonal knot system. Here nothing is eliminated: all knot
//! and interior unknowns go into one dense matrix — collocation equations
//! at the interior nodes, derivative-continuity equations at the interior
//! knots — and a pivoted dense solve does the rest. The Lagrange weights are
//! written from the raw node differences on purpose; this file shares no
//! algebra with the assembly it checks.

use crate::error::{Error, Result};
use crate::grid::DualGrid;
use crate::linalg::{dense_solve, DenseMatrix};
use crate::problem::ProblemSpec;

/// Both value families for one time level.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// Knot values, boundaries included (`n` entries).
    pub phi: Vec<f64>,
    /// Collocation-node values, boundaries included (`n + 1` entries).
    pub c: Vec<f64>,
}

/// First-derivative weight of the quadratic through `(a, ya)`, `(b, yb)`,
/// `(c, yc)` with respect to `ya`, evaluated at `x`.
fn dw(x: f64, a: f64, b: f64, c: f64) -> f64 {
    (2.0 * x - b - c) / ((a - b) * (a - c))
}

/// One backward-Euler step solved as a dense coupled system.
pub fn dense_collocation_step(
    problem: &ProblemSpec,
    grid: &DualGrid,
    rho: f64,
    u_prev: &[f64],
    t_next: f64,
) -> Result<OracleSolution> {
    let n = grid.n();
    if u_prev.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: u_prev.len(),
        });
    }
    if !(rho > 0.0) {
        return Err(Error::NonPositiveTimeStep(rho));
    }
    let taus = grid.taus();
    let xs = grid.xs();
    let left = (problem.left_boundary)(t_next);
    let right = (problem.right_boundary)(t_next);

    // Unknown layout: phi_1 .. phi_{n-2}, then c_1 .. c_{n-1}.
    let unknowns = 2 * n - 3;
    let phi_col = |i: usize| i - 1;
    let c_col = |m: usize| (n - 3) + m;
    let mut mat = DenseMatrix::zeros(unknowns);
    let mut rhs = vec![0.0; unknowns];

    // Collocation at x_{j+1} on interval j: D u'' - V u' - sigma u = -(f + u_prev/rho).
    for j in 0..n - 1 {
        let (a, b, c) = (taus[j], xs[j + 1], taus[j + 1]);
        let d = problem.diffusion.eval(b, t_next);
        let v = problem.convection.eval(b, t_next);
        let sigma = 1.0 / rho - problem.reaction.eval(b, t_next);
        let w_a = (2.0 * d) / ((a - b) * (a - c)) - v * dw(b, a, b, c);
        let w_b = (2.0 * d) / ((b - a) * (b - c)) - v * dw(b, b, a, c) - sigma;
        let w_c = (2.0 * d) / ((c - a) * (c - b)) - v * dw(b, c, a, b);
        let row = j;
        rhs[row] = -(problem.source.eval(b, t_next) + u_prev[j + 1] / rho);
        if j == 0 {
            rhs[row] -= w_a * left;
        } else {
            mat.add(row, phi_col(j), w_a);
        }
        mat.add(row, c_col(j + 1), w_b);
        if j + 1 == n - 1 {
            rhs[row] -= w_c * right;
        } else {
            mat.add(row, phi_col(j + 1), w_c);
        }
    }

    // Derivative continuity at the interior knot tau_i: the piece on
    // [tau_{i-1}, tau_i] and the piece on [tau_i, tau_{i+1}] agree there.
    for i in 1..n - 1 {
        let row = (n - 1) + (i - 1);
        let (la, lb, lc) = (taus[i - 1], xs[i], taus[i]);
        let (ra, rb, rc) = (taus[i], xs[i + 1], taus[i + 1]);
        let x = taus[i];

        // Left piece derivative, positive orientation.
        let wl_a = dw(x, la, lb, lc);
        let wl_b = dw(x, lb, la, lc);
        let wl_c = dw(x, lc, la, lb);
        // Right piece derivative, subtracted.
        let wr_a = dw(x, ra, rb, rc);
        let wr_b = dw(x, rb, ra, rc);
        let wr_c = dw(x, rc, ra, rb);

        if i - 1 == 0 {
            rhs[row] -= wl_a * left;
        } else {
            mat.add(row, phi_col(i - 1), wl_a);
        }
        mat.add(row, c_col(i), wl_b);
        mat.add(row, phi_col(i), wl_c - wr_a);
        mat.add(row, c_col(i + 1), -wr_b);
        if i + 1 == n - 1 {
            rhs[row] += wr_c * right;
        } else {
            mat.add(row, phi_col(i + 1), -wr_c);
        }
    }

    let solution = dense_solve(&mat, &rhs)?;

    let mut phi = Vec::with_capacity(n);
    phi.push(left);
    phi.extend_from_slice(&solution[..n - 2]);
    phi.push(right);

    let mut c = Vec::with_capacity(n + 1);
    c.push(left);
    c.extend_from_slice(&solution[n - 2..]);
    c.push(right);

    Ok(OracleSolution { phi, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{build_problem, AssemblyMode, Preset, PresetParams, StepParams};
    use crate::stepper::{initial_state, step};
    use std::sync::Arc;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
    }

    #[test]
    fn oracle_preserves_the_constant_steady_state() {
        let problem = build_problem(
            Preset::Constant,
            &PresetParams {
                length: 1.0,
                diffusion: 0.01,
                convection: 1.0,
                reaction: 0.7,
                constant_value: 2.0,
            },
        )
        .unwrap();
        let grid = DualGrid::uniform(1.0, 7, 0.5).unwrap();
        let u_prev = vec![2.0; grid.n() + 1];
        let sol = dense_collocation_step(&problem, &grid, 0.05, &u_prev, 0.05).unwrap();
        assert!(sol.phi.iter().all(|&v| (v - 2.0).abs() < 1e-11));
        assert!(sol.c.iter().all(|&v| (v - 2.0).abs() < 1e-11));
    }

    #[test]
    fn oracle_agrees_with_the_eliminated_solve_on_a_uniform_grid() {
        let problem = build_problem(
            Preset::Gaussian,
            &PresetParams {
                length: 2.4,
                diffusion: 1e-3,
                convection: 1.0,
                reaction: 0.0,
                constant_value: 1.0,
            },
        )
        .unwrap();
        let grid = Arc::new(DualGrid::uniform(2.4, 10, 0.5).unwrap());
        let params = StepParams::new(1e-2, AssemblyMode::Uniform)
            .unwrap()
            .permissive();
        let state = initial_state(&problem, &grid);
        let next = step(&problem, &grid, &params, &state).unwrap();
        let oracle =
            dense_collocation_step(&problem, &grid, params.rho, &state.u_x, next.t).unwrap();
        let spline = next.spline.unwrap();
        let scale = 9.0;
        assert!(max_diff(spline.phi(), &oracle.phi) < 1e-10 * scale);
        assert!(max_diff(spline.c(), &oracle.c) < 1e-10 * scale);
    }

    #[test]
    fn oracle_agrees_with_the_general_assembly_on_a_skewed_grid() {
        let problem = build_problem(
            Preset::ManufacturedSine,
            &PresetParams {
                length: 1.2,
                diffusion: 0.02,
                convection: 0.8,
                reaction: 0.3,
                constant_value: 1.0,
            },
        )
        .unwrap();
        let taus = vec![0.0, 0.3, 0.55, 0.85, 1.2];
        let xs = vec![0.0, 0.12, 0.42, 0.7, 1.0, 1.2];
        let grid = Arc::new(DualGrid::from_nodes(taus, xs).unwrap());
        let params = StepParams::new(0.02, AssemblyMode::General)
            .unwrap()
            .permissive();
        let state = initial_state(&problem, &grid);
        let next = step(&problem, &grid, &params, &state).unwrap();
        let oracle =
            dense_collocation_step(&problem, &grid, params.rho, &state.u_x, next.t).unwrap();
        let spline = next.spline.unwrap();
        assert!(max_diff(spline.phi(), &oracle.phi) < 1e-10);
        assert!(max_diff(spline.c(), &oracle.c) < 1e-10);
    }
}
