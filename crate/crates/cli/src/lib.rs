//! Command implementations behind the `simplexproj` binary.
//!
//! Each command returns a serializable output struct; `main` prints it as
//! JSON. Errors are `anyhow` chains, and [`exit_code`] maps them to the
//! process status: 2 for invalid input, 3 for numerical failures.

pub mod input;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use serde::Serialize;

use simplexproj::ingestion::{third_friday_breakpoints, ExcludedAsset, LoadedPrices, PanelBuild};
use simplexproj::oracle::oracle_project_with;
use simplexproj::simplex::SearchStats;
use simplexproj::{
    build_return_panel, estimate_moments, load_prices, minvar_closed_form, portfolio_moments,
    project_onto_simplex_with, run_backtest, Error, MetricMatrix, MomentEstimates, Period,
    PriceFormat, ProjectionOptions, ProjectionResult, WeightVector,
};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Process exit status for a failed command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let numerical = err
        .chain()
        .filter_map(|e| e.downcast_ref::<Error>())
        .any(Error::is_numerical);
    if numerical {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    }
}

fn projection_options(deterministic: bool) -> ProjectionOptions {
    ProjectionOptions {
        parallel: !deterministic,
        ..ProjectionOptions::from_env()
    }
}

fn percent(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub point: Vec<f64>,
    pub sq_dist: f64,
    pub active_face: Vec<usize>,
}

impl From<&ProjectionResult> for ProjectionReport {
    fn from(r: &ProjectionResult) -> Self {
        Self {
            point: r.point.coords().to_vec(),
            sq_dist: r.sq_dist,
            active_face: r.active_face.indices().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectOutput {
    pub method: &'static str,
    #[serde(flatten)]
    pub result: ProjectionReport,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<ProjectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

pub fn cmd_project(cov: &Path, point: &Path, oracle: bool, deterministic: bool) -> Result<ProjectOutput> {
    let rows = input::read_matrix_csv(cov)?;
    let metric = MetricMatrix::new(&rows).with_context(|| format!("covariance {}", cov.display()))?;
    let a = input::read_vector_csv(point)?;
    let res = project_onto_simplex_with(&metric, &a, projection_options(deterministic))
        .context("projection failed")?;
    let mut out = ProjectOutput {
        method: "algorithm1",
        result: ProjectionReport::from(&res),
        stats: res.stats.clone(),
        oracle: None,
        max_deviation: None,
    };
    if oracle {
        let o = oracle_project_with(&metric, &a, !deterministic).context("oracle failed")?;
        let dev = res
            .point
            .coords()
            .iter()
            .zip(o.point.coords())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        out.oracle = Some(ProjectionReport::from(&o));
        out.max_deviation = Some(dev);
    }
    Ok(out)
}

/// Which dates delimit the return periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodSpec {
    Monthly,
    Rows(usize),
    Breakpoints(PathBuf),
    ThirdFriday,
}

impl std::str::FromStr for PeriodSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "monthly" => Ok(Self::Monthly),
            "third-friday" => Ok(Self::ThirdFriday),
            "breakpoints" => Ok(Self::Breakpoints(PathBuf::new())),
            _ => match s.strip_prefix("rows:") {
                Some(k) => k
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k > 0)
                    .map(Self::Rows)
                    .ok_or_else(|| format!("bad row stride in {s:?}")),
                None => Err(format!(
                    "unknown period {s:?} (expected monthly, rows:K, breakpoints or third-friday)"
                )),
            },
        }
    }
}

/// Price file and window shared by `minvar` and `backtest`.
#[derive(Debug, Clone)]
pub struct WindowArgs {
    pub prices: PathBuf,
    pub format: PriceFormat,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub period: PeriodSpec,
    pub min_coverage: f64,
}

impl WindowArgs {
    fn period(&self) -> Result<Period> {
        Ok(match &self.period {
            PeriodSpec::Monthly => Period::MonthlyCalendar,
            PeriodSpec::Rows(k) => Period::EveryKRows(*k),
            PeriodSpec::Breakpoints(path) => {
                if path.as_os_str().is_empty() {
                    bail!("--period breakpoints requires --breakpoints FILE");
                }
                Period::ExplicitBreakpoints(input::read_dates(path)?)
            }
            PeriodSpec::ThirdFriday => {
                let mut dates = vec![self.start];
                dates.extend(
                    third_friday_breakpoints(self.start, self.end)
                        .into_iter()
                        .filter(|d| *d > self.start),
                );
                if dates.last() != Some(&self.end) {
                    dates.push(self.end);
                }
                Period::ExplicitBreakpoints(dates)
            }
        })
    }

    fn load(&self) -> Result<(LoadedPrices, PanelBuild)> {
        let loaded = load_prices(&self.prices, self.format)
            .with_context(|| format!("loading {}", self.prices.display()))?;
        let built = build_return_panel(
            &loaded.series,
            self.start,
            self.end,
            &self.period()?,
            self.min_coverage,
        )?;
        Ok((loaded, built))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightLine {
    pub asset_id: String,
    pub weight: f64,
    pub percent: String,
}

fn weight_lines(ids: &[String], w: &[f64]) -> Vec<WeightLine> {
    ids.iter()
        .zip(w)
        .map(|(id, &x)| WeightLine {
            asset_id: id.clone(),
            weight: x,
            percent: percent(x),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PortfolioStats {
    pub mean: f64,
    pub stddev: f64,
    pub mean_percent: String,
    pub stddev_percent: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DataSummary {
    pub assets: Vec<String>,
    pub excluded: Vec<ExcludedAsset>,
    pub first_boundary: NaiveDate,
    pub last_boundary: NaiveDate,
    pub sample_count: usize,
    pub ddof: usize,
    pub unsorted_series: usize,
    pub duplicates_dropped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinvarOutput {
    pub short_selling: bool,
    pub method: &'static str,
    pub data: DataSummary,
    pub weights: Vec<WeightLine>,
    pub portfolio: PortfolioStats,
    /// Whether the unconstrained minimum already has no short positions.
    pub short_selling_solution_feasible: bool,
    pub short_selling_weights: Vec<WeightLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection_stats: Option<SearchStats>,
}

struct Minvar {
    output: MinvarOutput,
    weights: WeightVector,
    built: PanelBuild,
}

fn minvar_inner(window: &WindowArgs, no_short_selling: bool, ddof: usize, deterministic: bool) -> Result<Minvar> {
    let (loaded, built) = window.load()?;
    let est: MomentEstimates = estimate_moments(&built.panel, ddof).context("estimating moments")?;
    let hp = minvar_closed_form(&est.cov)?;
    let ids = built.panel.asset_ids().to_vec();
    let (weights, method, stats) = if no_short_selling {
        let n = est.cov.dim();
        let res = project_onto_simplex_with(&est.cov, &vec![0.0; n], projection_options(deterministic))?;
        (res.point, "algorithm1", Some(res.stats))
    } else {
        (hp.weights.clone(), "closed_form", None)
    };
    let (mean, stddev) = portfolio_moments(&est, &weights)?;
    let output = MinvarOutput {
        short_selling: !no_short_selling,
        method,
        data: DataSummary {
            assets: ids.clone(),
            excluded: built.excluded.clone(),
            first_boundary: built.boundaries[0],
            last_boundary: *built.boundaries.last().expect("non-empty"),
            sample_count: est.sample_count,
            ddof,
            unsorted_series: loaded.unsorted_series,
            duplicates_dropped: loaded.duplicates_dropped,
        },
        weights: weight_lines(&ids, weights.coords()),
        portfolio: PortfolioStats {
            mean,
            stddev,
            mean_percent: percent(mean),
            stddev_percent: percent(stddev),
        },
        short_selling_solution_feasible: hp.weights.feasible_simplex(),
        short_selling_weights: weight_lines(&ids, hp.weights.coords()),
        projection_stats: stats,
    };
    Ok(Minvar {
        output,
        weights,
        built,
    })
}

pub fn cmd_minvar(window: &WindowArgs, no_short_selling: bool, ddof: usize, deterministic: bool) -> Result<MinvarOutput> {
    Ok(minvar_inner(window, no_short_selling, ddof, deterministic)?.output)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightsSource {
    Minvar,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkKind {
    /// CSV `period,return` aligned with the panel periods.
    Returns,
    /// CSV `date,close`, sampled at the panel boundaries.
    Prices,
}

#[derive(Debug, Clone, Serialize)]
pub struct BacktestOutput {
    pub files: Vec<PathBuf>,
    pub summary_line: String,
    pub final_index: f64,
    pub benchmark_final_index: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_backtest(
    window: &WindowArgs,
    weights: &WeightsSource,
    no_short_selling: bool,
    ddof: usize,
    benchmark: Option<(&Path, BenchmarkKind)>,
    out_dir: &Path,
    deterministic: bool,
) -> Result<BacktestOutput> {
    let (w, built) = match weights {
        WeightsSource::Minvar => {
            let m = minvar_inner(window, no_short_selling, ddof, deterministic)?;
            (m.weights, m.built)
        }
        WeightsSource::File(path) => {
            let (_, built) = window.load()?;
            let w = input::read_weights(path, built.panel.asset_ids())?;
            (w, built)
        }
    };
    let bench = match benchmark {
        None => None,
        Some((path, BenchmarkKind::Returns)) => Some(input::read_benchmark_returns(path, built.panel.periods())?),
        Some((path, BenchmarkKind::Prices)) => Some(input::benchmark_from_prices(path, &built.boundaries)?),
    };
    let report = run_backtest(&built.panel, &w, bench.as_deref())?;
    let files = report.write_to_dir(out_dir)?;
    let s = &report.summary;
    let mut summary_line = format!(
        "portfolio: final index {:.2}, mean yearly {}%, stddev yearly {}%",
        s.final_index,
        percent(s.mean_yearly),
        percent(s.stddev_yearly)
    );
    if let (Some(fi), Some(m), Some(sd)) = (
        s.benchmark_final_index,
        s.benchmark_mean_yearly,
        s.benchmark_stddev_yearly,
    ) {
        summary_line.push_str(&format!(
            "; benchmark: final index {fi:.2}, mean yearly {}%, stddev yearly {}%",
            percent(m),
            percent(sd)
        ));
    }
    Ok(BacktestOutput {
        files,
        summary_line,
        final_index: s.final_index,
        benchmark_final_index: s.benchmark_final_index,
    })
}
