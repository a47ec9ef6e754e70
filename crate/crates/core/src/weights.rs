use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of the coordinate sum from 1.
pub const SUM_TOL: f64 = 1e-9;
/// Smallest coordinate still counted as nonnegative.
pub const NONNEG_TOL: f64 = 1e-10;

/// Portfolio weights: a point of the hyperplane `sum(x) = 1`.
///
/// `feasible_simplex` records whether every coordinate is nonnegative
/// (up to [`NONNEG_TOL`]), i.e. whether the portfolio needs no short sale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    coords: Vec<f64>,
    feasible_simplex: bool,
}

impl WeightVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidWeights("no coordinates".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidWeights("non-finite coordinate".into()));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "coordinates sum to {sum}, expected 1"
            )));
        }
        let feasible_simplex = coords.iter().all(|&c| c >= -NONNEG_TOL);
        Ok(Self {
            coords,
            feasible_simplex,
        })
    }

    /// The vertex `e_k` of the standard simplex in dimension `n`.
    pub fn vertex(n: usize, k: usize) -> Self {
        let mut coords = vec![0.0; n];
        coords[k] = 1.0;
        Self {
            coords,
            feasible_simplex: true,
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn feasible_simplex(&self) -> bool {
        self.feasible_simplex
    }
}

impl AsRef<[f64]> for WeightVector {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}
