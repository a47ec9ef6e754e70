//! Minimum of `f(x) = x' C x` over the hyperplane `sum(x) = 1`, i.e. the
//! minimum-variance portfolio when short selling is allowed.
//!
//! Two routes are provided. [`minvar_closed_form`] normalizes `C^-1 u`
//! (`u` the all-ones vector). [`minvar_matrix_a`] instead projects the
//! origin onto the hyperplane: the solution is C-orthogonal to every
//! `e_1 - e_i`, which together with the sum constraint gives one square
//! system. Neither forms an explicit inverse.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{solve_linear, MetricMatrix};
use crate::weights::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HyperplaneMethod {
    ClosedForm,
    MatrixA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneSolution {
    pub weights: WeightVector,
    /// `f` evaluated at `weights`.
    pub variance: f64,
    pub method: HyperplaneMethod,
}

impl HyperplaneSolution {
    fn new(c: &MetricMatrix, coords: Vec<f64>, method: HyperplaneMethod) -> Result<Self> {
        let weights = WeightVector::new(coords)?;
        let variance = c.inner_unchecked(weights.coords(), weights.coords());
        Ok(Self {
            weights,
            variance,
            method,
        })
    }
}

/// `x0 = C^-1 u / (u' C^-1 u)`, via a single solve of `C y = u`.
pub fn minvar_closed_form(c: &MetricMatrix) -> Result<HyperplaneSolution> {
    let n = c.dim();
    let y = solve_linear(c.entries(), &vec![1.0; n])?;
    let total: f64 = y.iter().sum();
    if !(total.abs() > 0.0) || !total.is_finite() {
        return Err(Error::SingularSystem { pivot_index: n - 1 });
    }
    let coords = y.into_iter().map(|v| v / total).collect();
    HyperplaneSolution::new(c, coords, HyperplaneMethod::ClosedForm)
}

/// The system matrix whose inverse's last column is the minimizer:
/// rows `(c_1j - c_ij)_j` for `i = 2..n`, then a row of ones.
pub fn matrix_a(c: &MetricMatrix) -> DMatrix<f64> {
    let n = c.dim();
    DMatrix::from_fn(n, n, |row, j| {
        if row + 1 == n {
            1.0
        } else {
            let i = row + 1;
            c.get(0, j) - c.get(i, j)
        }
    })
}

/// Last column of `A^-1`, obtained by solving `A x = (0, ..., 0, 1)`.
pub fn minvar_matrix_a(c: &MetricMatrix) -> Result<HyperplaneSolution> {
    let n = c.dim();
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    let x = solve_linear(&matrix_a(c), &rhs)?;
    HyperplaneSolution::new(c, x, HyperplaneMethod::MatrixA)
}

/// Two-asset closed form from the variances and the covariance.
pub fn minvar_two_asset(v1: f64, v2: f64, cov: f64) -> Result<WeightVector> {
    let denominator = v1 + v2 - 2.0 * cov;
    if !(denominator > 1e-14) {
        return Err(Error::DegenerateMetric { denominator });
    }
    if !(v1 > 0.0 && v2 > 0.0 && v1 * v2 > cov * cov) {
        return Err(Error::NotPositiveDefinite {
            pivot_index: if v1 > 0.0 { 1 } else { 0 },
            pivot: if v1 > 0.0 { v2 - cov * cov / v1 } else { v1 },
            floor: 0.0,
        });
    }
    WeightVector::new(vec![(v2 - cov) / denominator, (v1 - cov) / denominator])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(d: &[f64]) -> MetricMatrix {
        let n = d.len();
        MetricMatrix::from_dmatrix(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 }))
            .unwrap()
    }

    fn three_asset_matrix() -> MetricMatrix {
        MetricMatrix::new(&[
            vec![0.012, 0.004, 0.008],
            vec![0.004, 0.011, 0.007],
            vec![0.008, 0.007, 0.011],
        ])
        .unwrap()
    }

    #[test]
    fn identity_gives_equal_weights() {
        for n in 1..6 {
            let sol = minvar_closed_form(&MetricMatrix::identity(n)).unwrap();
            for &w in sol.weights.coords() {
                assert_abs_diff_eq!(w, 1.0 / n as f64, epsilon = 1e-15);
            }
            assert!(sol.weights.feasible_simplex());
        }
        let sol = minvar_matrix_a(&MetricMatrix::identity(3)).unwrap();
        for &w in sol.weights.coords() {
            assert_abs_diff_eq!(w, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn diagonal_two_asset() {
        let c = diag(&[1.0, 4.0]);
        for sol in [minvar_closed_form(&c).unwrap(), minvar_matrix_a(&c).unwrap()] {
            assert_abs_diff_eq!(sol.weights.coords()[0], 0.8, epsilon = 1e-15);
            assert_abs_diff_eq!(sol.weights.coords()[1], 0.2, epsilon = 1e-15);
            // 0.64 + 4 * 0.04
            assert_abs_diff_eq!(sol.variance, 0.8, epsilon = 1e-15);
        }
    }

    #[test]
    fn matrix_a_identity_two() {
        let a = matrix_a(&MetricMatrix::identity(2));
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, 1.0]));
        let sol = minvar_matrix_a(&MetricMatrix::identity(2)).unwrap();
        assert_eq!(sol.weights.coords(), &[0.5, 0.5]);
        assert_eq!(sol.method, HyperplaneMethod::MatrixA);
    }

    #[test]
    fn three_asset_matrix_methods_agree() {
        let c = three_asset_matrix();
        let a = minvar_closed_form(&c).unwrap();
        let b = minvar_matrix_a(&c).unwrap();
        for (x, y) in a.weights.coords().iter().zip(b.weights.coords()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
        // bordered KKT solution: x = (3/7, 1/2, 1/14)
        let expected = [3.0 / 7.0, 0.5, 1.0 / 14.0];
        for (x, e) in a.weights.coords().iter().zip(expected) {
            assert_abs_diff_eq!(*x, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_asset_formula() {
        let w = minvar_two_asset(1.0, 1.0, 0.0).unwrap();
        assert_eq!(w.coords(), &[0.5, 0.5]);
        let w = minvar_two_asset(1.0, 4.0, 0.0).unwrap();
        assert_abs_diff_eq!(w.coords()[0], 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(w.coords()[1], 0.2, epsilon = 1e-15);

        let w = minvar_two_asset(0.012, 0.011, 0.004).unwrap();
        let c = MetricMatrix::new(&[vec![0.012, 0.004], vec![0.004, 0.011]]).unwrap();
        let sol = minvar_closed_form(&c).unwrap();
        for (x, y) in w.coords().iter().zip(sol.weights.coords()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_asset_degenerate() {
        assert!(matches!(
            minvar_two_asset(1.0, 1.0, 1.0),
            Err(Error::DegenerateMetric { .. })
        ));
        assert!(matches!(
            minvar_two_asset(1.0, 4.0, 2.1),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn short_position_flagged() {
        // once cov exceeds the smaller variance the low-variance asset is
        // levered against the other
        let c = MetricMatrix::new(&[vec![1.0, 0.9], vec![0.9, 4.0]]).unwrap();
        let sol = minvar_closed_form(&c).unwrap();
        assert!(sol.weights.feasible_simplex());
        let c = MetricMatrix::new(&[vec![1.0, 1.5], vec![1.5, 4.0]]).unwrap();
        let sol = minvar_closed_form(&c).unwrap();
        assert!(!sol.weights.feasible_simplex());
        assert!(sol.weights.coords()[1] < 0.0);
    }
}
