//! Tridiagonal and small dense solves.
//!
//! The production path is the Thomas algorithm without pivoting: the schemes
//! assembled here are diagonally dominant whenever they are used, so pivot
//! growth is not a concern and any zero or denormal pivot is reported as an
//! error instead of being patched over. The dense routine exists as an
//! independent reference for tests and cross-checks; it pivots partially and
//! shares no code with the tridiagonal path.

use crate::error::{Error, Result};

/// Tridiagonal system in banded storage. `sub` and `sup` hold `n - 1`
/// entries; `sub[i]` multiplies the unknown left of row `i + 1`, `sup[i]`
/// the unknown right of row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        if sub.len() != n - 1 {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                got: sub.len(),
            });
        }
        if sup.len() != n - 1 {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                got: sup.len(),
            });
        }
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        Ok(TridiagonalSystem {
            sub,
            diag,
            sup,
            rhs,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Residual `A x - rhs` of a candidate solution.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut r = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * x[i + 1];
            }
            r[i] = acc - self.rhs[i];
        }
        r
    }

    /// Smallest diagonal-dominance margin `|diag_i| - (|sub| + |sup|)` over
    /// all rows; positive means strict row dominance everywhere.
    pub fn dominance_margin(&self) -> f64 {
        let n = self.len();
        let mut margin = f64::INFINITY;
        for i in 0..n {
            let mut off = 0.0;
            if i > 0 {
                off += self.sub[i - 1].abs();
            }
            if i + 1 < n {
                off += self.sup[i].abs();
            }
            margin = margin.min(self.diag[i].abs() - off);
        }
        margin
    }

    /// Sign pattern of a monotone row set written in the canonical
    /// orientation: positive off-diagonals against a negative diagonal.
    pub fn has_monotone_sign_pattern(&self) -> bool {
        self.diag.iter().all(|&d| d < 0.0)
            && self.sub.iter().all(|&s| s > 0.0)
            && self.sup.iter().all(|&s| s > 0.0)
    }

    /// Monotone pattern up to a per-matrix sign: off-diagonals share a sign
    /// opposite to the diagonal, and every row is weakly dominant. Row
    /// scaling does not change the solution, so assemblies that produce the
    /// flipped orientation are equally acceptable.
    pub fn is_monotone_up_to_sign(&self) -> bool {
        let orientation = -self.diag[0].signum();
        if orientation == 0.0 || !orientation.is_finite() {
            return false;
        }
        let diag_ok = self.diag.iter().all(|&d| d * orientation < 0.0);
        let off_ok = self
            .sub
            .iter()
            .chain(self.sup.iter())
            .all(|&s| s * orientation > 0.0);
        diag_ok && off_ok && self.dominance_margin() >= 0.0
    }
}

fn pivot_is_unusable(p: f64) -> bool {
    !p.is_finite() || p.abs() < f64::MIN_POSITIVE
}

/// Solve a tridiagonal system by forward elimination and back substitution.
/// No pivoting is performed; a zero or denormal pivot aborts with
/// [`Error::SingularPivot`].
pub fn thomas_solve(system: &TridiagonalSystem) -> Result<Vec<f64>> {
    let n = system.len();
    let mut sup_ratio = vec![0.0; n];
    let mut rhs_ratio = vec![0.0; n];

    let mut pivot = system.diag[0];
    if pivot_is_unusable(pivot) {
        return Err(Error::SingularPivot { index: 0, pivot });
    }
    sup_ratio[0] = if n > 1 { system.sup[0] / pivot } else { 0.0 };
    rhs_ratio[0] = system.rhs[0] / pivot;

    for i in 1..n {
        pivot = system.diag[i] - system.sub[i - 1] * sup_ratio[i - 1];
        if pivot_is_unusable(pivot) {
            return Err(Error::SingularPivot { index: i, pivot });
        }
        if i + 1 < n {
            sup_ratio[i] = system.sup[i] / pivot;
        }
        rhs_ratio[i] = (system.rhs[i] - system.sub[i - 1] * rhs_ratio[i - 1]) / pivot;
    }

    let mut x = rhs_ratio;
    for i in (0..n - 1).rev() {
        x[i] -= sup_ratio[i] * x[i + 1];
    }
    Ok(x)
}

/// Row-major dense matrix for the reference solver.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    /// Dense matrix holding the same entries as a tridiagonal system.
    pub fn from_tridiagonal(system: &TridiagonalSystem) -> Self {
        let n = system.len();
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, system.diag[i]);
            if i > 0 {
                m.set(i, i - 1, system.sub[i - 1]);
            }
            if i + 1 < n {
                m.set(i, i + 1, system.sup[i]);
            }
        }
        m
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting. Reference
/// path only: O(n^3), row swaps included, no banded shortcuts.
pub fn dense_solve(matrix: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.n();
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut a = matrix.clone();
    let mut b = rhs.to_vec();

    for col in 0..n {
        let mut best = col;
        let mut best_mag = a.get(col, col).abs();
        for row in col + 1..n {
            let mag = a.get(row, col).abs();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if pivot_is_unusable(a.get(best, col)) {
            return Err(Error::SingularMatrix(col));
        }
        if best != col {
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(best, j));
                a.set(best, j, tmp);
            }
            b.swap(col, best);
        }
        let pivot = a.get(col, col);
        for row in col + 1..n {
            let factor = a.get(row, col) / pivot;
            if factor == 0.0 {
                continue;
            }
            a.set(row, col, 0.0);
            for j in col + 1..n {
                let v = a.get(row, j) - factor * a.get(col, j);
                a.set(row, j, v);
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a.get(i, j) * x[j];
        }
        x[i] = acc / a.get(i, i);
    }
    Ok(x)
}
