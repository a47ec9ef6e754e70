//! Fixed-weight backtests over a return panel.
//!
//! Weights are reapplied every period, so the portfolio return of period `t`
//! is `sum_i w_i r_ti`. Yearly figures compound the periods whose label
//! falls in that calendar year; partial first and last years are kept.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::ReturnPanel;
use crate::weights::WeightVector;

/// Starting value of both cumulative indices.
pub const INDEX_BASE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearlyReturn {
    pub year: i32,
    pub portfolio: f64,
    pub benchmark: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativePoint {
    /// `None` for the starting point when the panel has no base period.
    pub period: Option<NaiveDate>,
    pub portfolio_index: f64,
    pub benchmark_index: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSummary {
    pub mean_yearly: f64,
    pub stddev_yearly: f64,
    pub benchmark_mean_yearly: Option<f64>,
    pub benchmark_stddev_yearly: Option<f64>,
    pub final_index: f64,
    pub benchmark_final_index: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestReport {
    pub asset_ids: Vec<String>,
    pub weights: WeightVector,
    pub periods: Vec<NaiveDate>,
    pub per_period_returns: Vec<f64>,
    pub benchmark_returns: Option<Vec<f64>>,
    pub yearly_returns: Vec<YearlyReturn>,
    pub summary: BacktestSummary,
    pub cumulative: Vec<CumulativePoint>,
}

/// `prod(1 + r) - 1`.
pub fn compound(returns: &[f64]) -> f64 {
    returns.iter().fold(1.0, |acc, r| acc * (1.0 + r)) - 1.0
}

/// Mean and standard deviation; sample (n - 1) deviation when at least two
/// values are present, zero otherwise.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

fn yearly(periods: &[NaiveDate], returns: &[f64]) -> Vec<(i32, f64)> {
    let mut out: Vec<(i32, Vec<f64>)> = Vec::new();
    for (d, r) in periods.iter().zip(returns) {
        match out.last_mut() {
            Some((y, rs)) if *y == d.year() => rs.push(*r),
            _ => out.push((d.year(), vec![*r])),
        }
    }
    out.into_iter().map(|(y, rs)| (y, compound(&rs))).collect()
}

fn index_path(returns: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(returns.len() + 1);
    let mut level = INDEX_BASE;
    out.push(level);
    for r in returns {
        level *= 1.0 + r;
        out.push(level);
    }
    out
}

pub fn run_backtest(
    panel: &ReturnPanel,
    weights: &WeightVector,
    benchmark: Option<&[f64]>,
) -> Result<BacktestReport> {
    let per_period_returns = panel.weighted_returns(weights.coords())?;
    if let Some(b) = benchmark {
        if b.len() != panel.n_periods() {
            return Err(Error::MisalignedBenchmark(format!(
                "benchmark has {} periods, panel has {}",
                b.len(),
                panel.n_periods()
            )));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::MisalignedBenchmark("non-finite benchmark return".into()));
        }
    }
    let periods = panel.periods().to_vec();

    let port_years = yearly(&periods, &per_period_returns);
    let bench_years = benchmark.map(|b| yearly(&periods, b));
    let yearly_returns: Vec<YearlyReturn> = port_years
        .iter()
        .enumerate()
        .map(|(k, (year, r))| YearlyReturn {
            year: *year,
            portfolio: *r,
            benchmark: bench_years.as_ref().map(|b| b[k].1),
        })
        .collect();

    let (mean_yearly, stddev_yearly) =
        mean_std(&port_years.iter().map(|y| y.1).collect::<Vec<_>>());
    let bench_stats = bench_years
        .as_ref()
        .map(|b| mean_std(&b.iter().map(|y| y.1).collect::<Vec<_>>()));

    let port_index = index_path(&per_period_returns);
    let bench_index = benchmark.map(index_path);
    let labels = std::iter::once(panel.base_period()).chain(periods.iter().copied().map(Some));
    let cumulative: Vec<CumulativePoint> = labels
        .enumerate()
        .map(|(k, period)| CumulativePoint {
            period,
            portfolio_index: port_index[k],
            benchmark_index: bench_index.as_ref().map(|b| b[k]),
        })
        .collect();

    Ok(BacktestReport {
        asset_ids: panel.asset_ids().to_vec(),
        weights: weights.clone(),
        periods,
        summary: BacktestSummary {
            mean_yearly,
            stddev_yearly,
            benchmark_mean_yearly: bench_stats.map(|s| s.0),
            benchmark_stddev_yearly: bench_stats.map(|s| s.1),
            final_index: *port_index.last().expect("non-empty"),
            benchmark_final_index: bench_index.as_ref().map(|b| *b.last().expect("non-empty")),
        },
        per_period_returns,
        benchmark_returns: benchmark.map(<[f64]>::to_vec),
        yearly_returns,
        cumulative,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl BacktestReport {
    /// Writes `per_period.csv`, `yearly.csv`, `cumulative.csv`,
    /// `weights.csv` and `report.json` into `dir`, returning their paths.
    pub fn write_to_dir(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut written = Vec::new();

        let path = dir.join("per_period.csv");
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(["period", "portfolio_return", "benchmark_return"]).map_err(io)?;
        for (k, (d, r)) in self.periods.iter().zip(&self.per_period_returns).enumerate() {
            let b = self.benchmark_returns.as_ref().map(|b| b[k]);
            w.write_record([d.to_string(), r.to_string(), opt(b)]).map_err(io)?;
        }
        w.flush()?;
        written.push(path);

        let path = dir.join("yearly.csv");
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(["year", "portfolio_return", "benchmark_return"]).map_err(io)?;
        for y in &self.yearly_returns {
            w.write_record([y.year.to_string(), y.portfolio.to_string(), opt(y.benchmark)])
                .map_err(io)?;
        }
        w.flush()?;
        written.push(path);

        let path = dir.join("cumulative.csv");
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(["period", "portfolio_index", "benchmark_index"]).map_err(io)?;
        for c in &self.cumulative {
            let label = c.period.map_or_else(|| "start".to_string(), |d| d.to_string());
            w.write_record([label, c.portfolio_index.to_string(), opt(c.benchmark_index)])
                .map_err(io)?;
        }
        w.flush()?;
        written.push(path);

        let path = dir.join("weights.csv");
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(["asset_id", "weight"]).map_err(io)?;
        for (id, x) in self.asset_ids.iter().zip(self.weights.coords()) {
            w.write_record([id.clone(), x.to_string()]).map_err(io)?;
        }
        w.flush()?;
        written.push(path);

        let path = dir.join("report.json");
        let mut f = fs::File::create(&path)?;
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        f.write_all(json.as_bytes())?;
        f.write_all(b"\n")?;
        written.push(path);
        Ok(written)
    }
}
