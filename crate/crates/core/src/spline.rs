//! Piecewise-quadratic interpolant on the dual grid.
//!
//! Each coarse interval `[tau_j, tau_{j+1}]` carries the parabola through
//! `(tau_j, phi_j)`, `(x_{j+1}, c_{j+1})`, `(tau_{j+1}, phi_{j+1})` in
//! three-point Lagrange form. Evaluation reproduces the stored node values
//! exactly: every basis numerator at a node reuses the factored differences
//! of the denominator, so the quotient is exactly one (IEEE negation is
//! exact) and the other two terms carry an exact zero factor.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::DualGrid;

/// A solved time level: knot values `phi` on the coarse grid and interior
/// values `c` on the collocation grid, evaluable anywhere on `[0, L]`.
#[derive(Debug, Clone)]
pub struct QuadSpline {
    grid: Arc<DualGrid>,
    phi: Vec<f64>,
    c: Vec<f64>,
}

impl QuadSpline {
    pub fn new(grid: Arc<DualGrid>, phi: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if phi.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: phi.len(),
            });
        }
        if c.len() != grid.n() + 1 {
            return Err(Error::LengthMismatch {
                expected: grid.n() + 1,
                got: c.len(),
            });
        }
        Ok(Self { grid, phi, c })
    }

    pub fn grid(&self) -> &DualGrid {
        &self.grid
    }

    /// Knot values, one per coarse node.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Collocation values, one per fine node (boundaries included).
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Index of the piece evaluated at `x`: the interval whose left knot is
    /// the last one strictly below `x`, clamped to the grid. A query exactly
    /// on an interior knot therefore uses the piece to its left.
    pub fn interval_of(&self, x: f64) -> usize {
        let taus = self.grid.taus();
        let idx = taus.partition_point(|&t| t < x);
        idx.saturating_sub(1).min(taus.len() - 2)
    }

    fn piece(&self, j: usize) -> (f64, f64, f64, f64, f64, f64) {
        let taus = self.grid.taus();
        let xs = self.grid.xs();
        (taus[j], xs[j + 1], taus[j + 1], self.phi[j], self.c[j + 1], self.phi[j + 1])
    }

    fn eval_piece(&self, j: usize, x: f64) -> f64 {
        let (tau_l, x_m, tau_r, vl, vm, vr) = self.piece(j);
        let p = x_m - tau_l;
        let s = tau_r - x_m;
        let t = tau_r - tau_l;
        let dl = x - tau_l;
        let dm = x - x_m;
        let dr = x - tau_r;
        // Each ratio is computed before scaling by the node value: at a node
        // the numerator reuses the denominator's factors bitwise, the ratio
        // is exactly +-1, and the node value passes through unrounded.
        vl * ((dm * dr) / (p * t)) - vm * ((dl * dr) / (p * s)) + vr * ((dl * dm) / (t * s))
    }

    fn deriv_piece(&self, j: usize, x: f64) -> f64 {
        let (tau_l, x_m, tau_r, vl, vm, vr) = self.piece(j);
        let p = x_m - tau_l;
        let s = tau_r - x_m;
        let t = tau_r - tau_l;
        let dl = x - tau_l;
        let dm = x - x_m;
        let dr = x - tau_r;
        vl * ((dm + dr) / (p * t)) - vm * ((dl + dr) / (p * s)) + vr * ((dl + dm) / (t * s))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_piece(self.interval_of(x), x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.deriv_piece(self.interval_of(x), x)
    }

    /// Largest jump of the one-sided first derivatives across the interior
    /// knots. The construction makes this zero up to rounding; it is the
    /// natural check that a computed level really is differentiable.
    pub fn continuity_defect(&self) -> f64 {
        let n = self.grid.n();
        let taus = self.grid.taus();
        let mut worst = 0.0f64;
        for i in 1..n - 1 {
            let from_left = self.deriv_piece(i - 1, taus[i]);
            let from_right = self.deriv_piece(i, taus[i]);
            worst = worst.max((from_left - from_right).abs());
        }
        worst
    }

    /// Largest one-sided derivative magnitude over all knots; pairs with
    /// [`continuity_defect`](Self::continuity_defect) as its scale.
    pub fn max_knot_derivative(&self) -> f64 {
        let n = self.grid.n();
        let taus = self.grid.taus();
        let mut worst = 0.0f64;
        for i in 0..n {
            if i > 0 {
                worst = worst.max(self.deriv_piece(i - 1, taus[i]).abs());
            }
            if i < n - 1 {
                worst = worst.max(self.deriv_piece(i, taus[i]).abs());
            }
        }
        worst
    }
}
