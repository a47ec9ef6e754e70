//! Sample moments of aligned return panels.

use std::collections::HashSet;

use chrono::NaiveDate;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricMatrix;
use crate::weights::WeightVector;

/// Per-period simple returns (fractions) of named assets.
///
/// `returns[t][i]` is the return of asset `i` over the period ending at
/// `periods[t]`. `base_period`, when known, is the boundary the first period
/// starts from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnPanel {
    asset_ids: Vec<String>,
    periods: Vec<NaiveDate>,
    returns: Vec<Vec<f64>>,
    base_period: Option<NaiveDate>,
}

impl ReturnPanel {
    pub fn new(asset_ids: Vec<String>, periods: Vec<NaiveDate>, returns: Vec<Vec<f64>>) -> Result<Self> {
        if asset_ids.is_empty() {
            return Err(Error::EmptyPanel("no assets".into()));
        }
        let mut seen = HashSet::new();
        for id in &asset_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate asset id {id}")));
            }
        }
        if periods.len() < 2 {
            return Err(Error::TooFewSamples {
                required: 2,
                actual: periods.len(),
            });
        }
        if periods.len() != returns.len() {
            return Err(Error::DimensionMismatch {
                expected: periods.len(),
                actual: returns.len(),
            });
        }
        if let Some(w) = periods.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "periods not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        for row in &returns {
            if row.len() != asset_ids.len() {
                return Err(Error::DimensionMismatch {
                    expected: asset_ids.len(),
                    actual: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("non-finite return".into()));
            }
        }
        Ok(Self {
            asset_ids,
            periods,
            returns,
            base_period: None,
        })
    }

    pub fn with_base_period(mut self, base: NaiveDate) -> Result<Self> {
        if base >= self.periods[0] {
            return Err(Error::InvalidArgument(format!(
                "base period {base} must precede first period {}",
                self.periods[0]
            )));
        }
        self.base_period = Some(base);
        Ok(self)
    }

    pub fn asset_ids(&self) -> &[String] {
        &self.asset_ids
    }

    pub fn periods(&self) -> &[NaiveDate] {
        &self.periods
    }

    pub fn returns(&self) -> &[Vec<f64>] {
        &self.returns
    }

    pub fn base_period(&self) -> Option<NaiveDate> {
        self.base_period
    }

    pub fn n_assets(&self) -> usize {
        self.asset_ids.len()
    }

    pub fn n_periods(&self) -> usize {
        self.periods.len()
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.returns.iter().map(|row| row[i]).collect()
    }

    /// Per-period return of a fixed-weight portfolio, `R w`.
    pub fn weighted_returns(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.n_assets() {
            return Err(Error::DimensionMismatch {
                expected: self.n_assets(),
                actual: w.len(),
            });
        }
        Ok(self
            .returns
            .iter()
            .map(|row| row.iter().zip(w).map(|(r, x)| r * x).sum())
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimates {
    pub mean: Vec<f64>,
    pub cov: MetricMatrix,
    pub sample_count: usize,
}

/// Sample mean and covariance with `T - ddof` in the covariance
/// denominator.
pub fn estimate_moments(panel: &ReturnPanel, ddof: usize) -> Result<MomentEstimates> {
    if ddof > 1 {
        return Err(Error::InvalidArgument(format!("ddof must be 0 or 1, got {ddof}")));
    }
    let t = panel.n_periods();
    if t < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            actual: t,
        });
    }
    let n = panel.n_assets();
    let mean: Vec<f64> = (0..n)
        .map(|i| panel.returns.iter().map(|row| row[i]).sum::<f64>() / t as f64)
        .collect();
    let centered: Vec<Vec<f64>> = panel
        .returns
        .iter()
        .map(|row| row.iter().zip(&mean).map(|(r, m)| r - m).collect())
        .collect();
    let denom = (t - ddof) as f64;
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s: f64 = centered.iter().map(|row| row[i] * row[j]).sum::<f64>() / denom;
            cov[(i, j)] = s;
            cov[(j, i)] = s;
        }
    }
    Ok(MomentEstimates {
        mean,
        cov: MetricMatrix::from_dmatrix(cov)?,
        sample_count: t,
    })
}

/// Mean `w'm` and standard deviation `sqrt(w'Cw)` of a portfolio.
pub fn portfolio_moments(est: &MomentEstimates, w: &WeightVector) -> Result<(f64, f64)> {
    let x = w.coords();
    est.cov.check_dim(x.len())?;
    let mean = x.iter().zip(&est.mean).map(|(a, b)| a * b).sum();
    let var = est.cov.inner_unchecked(x, x);
    Ok((mean, var.max(0.0).sqrt()))
}
