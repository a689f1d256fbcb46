//! Interleaved pair of spatial grids.
//!
//! The solver keeps two families of nodes on `[0, L]`: a coarse family
//! `tau_0 < tau_1 < … < tau_{n-1}` carrying the primary unknowns, and a fine
//! family `x_0 < x_1 < … < x_n` carrying the collocation nodes, one strictly
//! inside every coarse interval plus the two endpoints. On a uniform grid the
//! coarse spacing is `h = L / (n - 1)` and every interior collocation node
//! sits `mu` to the left of its coarse neighbour: `x_i = i*h - mu`.

use crate::error::{Error, Result};

/// Dual grid: `n` coarse knots (`taus`) interleaved with `n + 1` collocation
/// nodes (`xs`). Both arrays share the endpoints `0` and `L` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGrid {
    taus: Vec<f64>,
    xs: Vec<f64>,
    h: f64,
    mu: f64,
    uniform: bool,
}

impl DualGrid {
    /// Uniform grid over `[0, length]` with `n` coarse knots and offset
    /// `mu = mu_fraction * h`, `0 < mu_fraction < 1`.
    pub fn uniform(length: f64, n: usize, mu_fraction: f64) -> Result<DualGrid> {
        if !(length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        if n < 4 {
            return Err(Error::TooFewNodes(n));
        }
        if !(mu_fraction > 0.0 && mu_fraction < 1.0) {
            return Err(Error::OffsetOutOfRange(mu_fraction));
        }
        let h = length / (n - 1) as f64;
        let mu = mu_fraction * h;

        let mut taus = Vec::with_capacity(n);
        for i in 0..n {
            taus.push(i as f64 * h);
        }
        taus[n - 1] = length; // anchor the right endpoint exactly

        let mut xs = Vec::with_capacity(n + 1);
        xs.push(0.0);
        for i in 1..n {
            xs.push(i as f64 * h - mu);
        }
        xs.push(length);

        let grid = DualGrid {
            taus,
            xs,
            h,
            mu,
            uniform: true,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// General grid from explicit node arrays. `taus` must hold `n >= 4`
    /// strictly increasing knots, `xs` must hold `n + 1` strictly increasing
    /// nodes, the endpoints must coincide, and every interior collocation
    /// node must fall strictly inside its coarse interval.
    pub fn from_nodes(taus: Vec<f64>, xs: Vec<f64>) -> Result<DualGrid> {
        let n = taus.len();
        if n < 4 {
            return Err(Error::TooFewNodes(n));
        }
        if xs.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: xs.len(),
            });
        }
        let h = taus[1] - taus[0];
        let mu = taus[1] - xs[1];
        let grid = DualGrid {
            taus,
            xs,
            h,
            mu,
            uniform: false,
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        let n = self.taus.len();
        for i in 1..n {
            if !(self.taus[i] > self.taus[i - 1]) {
                return Err(Error::NotIncreasing(i));
            }
        }
        for i in 1..=n {
            if !(self.xs[i] > self.xs[i - 1]) {
                return Err(Error::NotIncreasing(i));
            }
        }
        if self.taus[0] != self.xs[0] || self.taus[n - 1] != self.xs[n] {
            return Err(Error::BrokenInterleaving(0));
        }
        // Strict interleaving: tau_j < x_{j+1} < tau_{j+1} for every coarse
        // interval j; this is what makes each quadratic piece well posed.
        for j in 0..n - 1 {
            if !(self.taus[j] < self.xs[j + 1] && self.xs[j + 1] < self.taus[j + 1]) {
                return Err(Error::BrokenInterleaving(j));
            }
        }
        Ok(())
    }

    /// Number of coarse knots.
    pub fn n(&self) -> usize {
        self.taus.len()
    }

    /// Number of coarse intervals (`n - 1`), each carrying one quadratic piece.
    pub fn interval_count(&self) -> usize {
        self.taus.len() - 1
    }

    /// Coarse knots `tau_0 .. tau_{n-1}`.
    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// Collocation nodes `x_0 .. x_n`.
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Coarse spacing of the first interval; the common spacing when uniform.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Offset `tau_1 - x_1`; the common offset when uniform.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Whether the grid was built by [`DualGrid::uniform`].
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Domain length.
    pub fn length(&self) -> f64 {
        *self.taus.last().expect("grid is never empty")
    }
}
