//! SPD metric, generalized inner product and dense linear solves.
//!
//! A [`MetricMatrix`] is a covariance matrix `C` validated as symmetric
//! positive definite. It induces the inner product `<x, y> = x' C y` used by
//! every projection in this crate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative asymmetry tolerated before symmetrization.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Symmetric positive definite matrix defining `<x, y> = x' C y`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    entries: DMatrix<f64>,
    cholesky: DMatrix<f64>,
}

impl MetricMatrix {
    /// Validates `raw` as a square, (nearly) symmetric, positive definite
    /// matrix. The stored matrix is `(raw + raw') / 2`.
    pub fn new(raw: &[Vec<f64>]) -> Result<Self> {
        let n = raw.len();
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    cols: r.len(),
                });
            }
        }
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| raw[i][j]))
    }

    pub fn from_dmatrix(raw: DMatrix<f64>) -> Result<Self> {
        if !raw.is_square() {
            return Err(Error::NotSquare {
                rows: raw.nrows(),
                row: 0,
                cols: raw.ncols(),
            });
        }
        let n = raw.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let scale = raw.amax();
        let mut max_asymmetry = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                max_asymmetry = max_asymmetry.max((raw[(i, j)] - raw[(j, i)]).abs());
            }
        }
        if max_asymmetry > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { max_asymmetry });
        }
        let entries = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                raw[(i, i)]
            } else {
                0.5 * (raw[(i, j)] + raw[(j, i)])
            }
        });
        let cholesky = cholesky_lower(&entries)?;
        Ok(Self { entries, cholesky })
    }

    /// The n x n identity metric (plain Euclidean geometry).
    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
            cholesky: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Lower-triangular `L` with `C = L L'`.
    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.cholesky
    }

    /// Entries as nested rows, e.g. for serialization.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[(i, j)]).collect())
            .collect()
    }

    pub fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: len,
            });
        }
        Ok(())
    }

    /// `x' C y`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self.inner_unchecked(x, y))
    }

    /// `(x - y)' C (x - y)`.
    pub fn sq_distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self.sq_distance_unchecked(x, y))
    }

    /// `C x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        let n = self.dim();
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.entries[(i, j)] * x[j]).sum())
            .collect())
    }

    pub(crate) fn inner_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut total = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..n {
                row += self.entries[(i, j)] * y[j];
            }
            total += x[i] * row;
        }
        total
    }

    pub(crate) fn sq_distance_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.inner_unchecked(&diff, &diff)
    }
}

/// Cholesky factorization with a relative pivot floor of
/// `n * eps * max(diag)`.
fn cholesky_lower(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = c.nrows();
    let max_diag = c.diagonal().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let floor = (n as f64 * f64::EPSILON * max_diag).max(0.0);
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut pivot = c[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > floor) {
            return Err(Error::NotPositiveDefinite {
                pivot_index: j,
                pivot,
                floor,
            });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = c[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `m x = b` by LU decomposition with partial pivoting.
///
/// A pivot of magnitude at most `n * eps * max|m|` is reported as
/// [`Error::SingularSystem`].
pub fn solve_linear(m: &DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            row: 0,
            cols: m.ncols(),
        });
    }
    let n = m.nrows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let threshold = n as f64 * f64::EPSILON * m.amax();
    let lu = m.clone().lu();
    let u = lu.u();
    for k in 0..n {
        let p = u[(k, k)];
        if !(p.abs() > threshold) {
            return Err(Error::SingularSystem { pivot_index: k });
        }
    }
    let rhs = DVector::from_column_slice(b);
    let x = lu
        .solve(&rhs)
        .ok_or(Error::SingularSystem { pivot_index: n - 1 })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem { pivot_index: n - 1 });
    }
    Ok(x.iter().cloned().collect())
}
