//! Price loading and resampling into aligned return panels.
//!
//! Two CSV layouts are accepted, both UTF-8 with a header row:
//!
//! * long: `asset_id,date,close`, one observation per row;
//! * wide: `date,<asset>,<asset>,...`, blank cells meaning "no observation".
//!
//! Dates are ISO-8601 days. Prices are assumed already adjusted for splits
//! and dividends.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::ReturnPanel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PriceFormat {
    LongCsv,
    WideCsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    pub asset_id: String,
    /// Strictly increasing dates, positive prices.
    pub observations: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Last observation on or before `date`.
    pub fn price_at_or_before(&self, date: NaiveDate) -> Option<f64> {
        let k = self.observations.partition_point(|(d, _)| *d <= date);
        k.checked_sub(1).map(|k| self.observations[k].1)
    }

    fn has_observation_in(&self, after: NaiveDate, upto: NaiveDate) -> bool {
        let k = self.observations.partition_point(|(d, _)| *d <= after);
        self.observations.get(k).is_some_and(|(d, _)| *d <= upto)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadedPrices {
    pub series: Vec<PriceSeries>,
    /// Series whose rows arrived out of date order and were sorted.
    pub unsorted_series: usize,
    /// Rows dropped because a later row had the same (asset, date).
    pub duplicates_dropped: usize,
}

pub fn load_prices(path: impl AsRef<Path>, format: PriceFormat) -> Result<LoadedPrices> {
    let file = File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_prices(file, format)
}

pub fn parse_prices<R: Read>(reader: R, format: PriceFormat) -> Result<LoadedPrices> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| csv_error(e, 1))?
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>();

    // (asset, date, price) in file order
    let mut raw: Vec<(usize, NaiveDate, f64)> = Vec::new();
    let mut assets: Vec<String> = Vec::new();

    match format {
        PriceFormat::LongCsv => {
            let col = |name: &str| {
                headers
                    .iter()
                    .position(|h| h.eq_ignore_ascii_case(name))
                    .ok_or_else(|| Error::Parse {
                        line: 1,
                        reason: format!("missing column {name:?} in header"),
                    })
            };
            let (ci, cd, cp) = (col("asset_id")?, col("date")?, col("close")?);
            let mut index: HashMap<String, usize> = HashMap::new();
            for rec in rdr.records() {
                let rec = rec.map_err(|e| csv_error(e, 0))?;
                let line = rec.position().map_or(0, |p| p.line());
                let id = &rec[ci];
                if id.is_empty() {
                    return Err(Error::Parse {
                        line,
                        reason: "empty asset_id".into(),
                    });
                }
                let date = parse_date(&rec[cd], line)?;
                let Some(price) = parse_price(&rec[cp], line)? else {
                    continue;
                };
                check_price(id, date, price)?;
                let k = *index.entry(id.to_string()).or_insert_with(|| {
                    assets.push(id.to_string());
                    assets.len() - 1
                });
                raw.push((k, date, price));
            }
        }
        PriceFormat::WideCsv => {
            if headers.len() < 2 {
                return Err(Error::Parse {
                    line: 1,
                    reason: "wide format needs a date column and at least one asset".into(),
                });
            }
            assets = headers[1..].to_vec();
            if let Some(dup) = first_duplicate(&assets) {
                return Err(Error::Parse {
                    line: 1,
                    reason: format!("duplicate asset column {dup:?}"),
                });
            }
            for rec in rdr.records() {
                let rec = rec.map_err(|e| csv_error(e, 0))?;
                let line = rec.position().map_or(0, |p| p.line());
                let date = parse_date(&rec[0], line)?;
                for (k, cell) in rec.iter().skip(1).enumerate() {
                    if let Some(price) = parse_price(cell, line)? {
                        check_price(&assets[k], date, price)?;
                        raw.push((k, date, price));
                    }
                }
            }
        }
    }

    let mut per_asset: Vec<Vec<(NaiveDate, f64)>> = vec![Vec::new(); assets.len()];
    for (k, d, p) in raw {
        per_asset[k].push((d, p));
    }
    let mut unsorted_series = 0;
    let mut duplicates_dropped = 0;
    let series = assets
        .into_iter()
        .zip(per_asset)
        .map(|(asset_id, obs)| {
            if obs.windows(2).any(|w| w[0].0 > w[1].0) {
                unsorted_series += 1;
            }
            // keep the last row seen for each date
            let mut by_date: BTreeMap<NaiveDate, f64> = BTreeMap::new();
            for (d, p) in &obs {
                if by_date.insert(*d, *p).is_some() {
                    duplicates_dropped += 1;
                }
            }
            PriceSeries {
                asset_id,
                observations: by_date.into_iter().collect(),
            }
        })
        .collect();
    Ok(LoadedPrices {
        series,
        unsorted_series,
        duplicates_dropped,
    })
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse {
        line,
        reason: e.to_string(),
    }
}

fn first_duplicate(ids: &[String]) -> Option<&str> {
    let mut seen = BTreeSet::new();
    ids.iter().find(|id| !seen.insert(id.as_str())).map(|s| s.as_str())
}

pub(crate) fn parse_date(s: &str, line: u64) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| Error::Parse {
        line,
        reason: format!("bad date {s:?}: {e}"),
    })
}

fn parse_price(s: &str, line: u64) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>().map(Some).map_err(|e| Error::Parse {
        line,
        reason: format!("bad price {s:?}: {e}"),
    })
}

fn check_price(asset: &str, date: NaiveDate, price: f64) -> Result<()> {
    if !(price > 0.0) || !price.is_finite() {
        return Err(Error::NonPositivePrice {
            asset: asset.to_string(),
            date: date.to_string(),
            price,
        });
    }
    Ok(())
}

/// How period boundaries are chosen inside `[start, end]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Period {
    /// `start`, every calendar month end strictly inside the window, `end`.
    MonthlyCalendar,
    /// Every k-th observation date (union over all assets), from the first.
    EveryKRows(usize),
    /// Caller-supplied dates; those outside the window are ignored.
    ExplicitBreakpoints(Vec<NaiveDate>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedAsset {
    pub asset_id: String,
    /// Fraction of boundaries with a fresh observation.
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelBuild {
    pub panel: ReturnPanel,
    pub excluded: Vec<ExcludedAsset>,
    pub boundaries: Vec<NaiveDate>,
}

fn month_end(d: NaiveDate) -> NaiveDate {
    let first = NaiveDate::from_ymd_opt(d.year(), d.month(), 1).expect("valid date");
    let next = first
        .checked_add_months(chrono::Months::new(1))
        .expect("date in range");
    next - Days::new(1)
}

pub fn period_boundaries(
    series: &[PriceSeries],
    start: NaiveDate,
    end: NaiveDate,
    period: &Period,
) -> Result<Vec<NaiveDate>> {
    if start >= end {
        return Err(Error::InvalidArgument(format!(
            "start {start} must precede end {end}"
        )));
    }
    let boundaries = match period {
        Period::MonthlyCalendar => {
            let mut out = vec![start];
            let mut m = month_end(start);
            while m < end {
                if m > start {
                    out.push(m);
                }
                m = month_end(m + Days::new(1));
            }
            out.push(end);
            out
        }
        Period::EveryKRows(k) => {
            if *k == 0 {
                return Err(Error::InvalidArgument("every_k_rows needs k >= 1".into()));
            }
            let rows: BTreeSet<NaiveDate> = series
                .iter()
                .flat_map(|s| s.observations.iter().map(|(d, _)| *d))
                .filter(|d| *d >= start && *d <= end)
                .collect();
            rows.into_iter().step_by(*k).collect()
        }
        Period::ExplicitBreakpoints(dates) => {
            let inside: Vec<NaiveDate> = dates
                .iter()
                .copied()
                .filter(|d| *d >= start && *d <= end)
                .collect();
            if let Some(w) = inside.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "breakpoints not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
            inside
        }
    };
    Ok(boundaries)
}

/// Samples every asset at each boundary (last price on or before it) and
/// converts to simple returns `p_k / p_(k-1) - 1`.
///
/// A boundary counts as covered for an asset when the asset has an
/// observation since the previous boundary (or, for the first boundary, any
/// observation on or before it). Assets whose covered fraction is below
/// `min_coverage`, or that have no price at some boundary, are excluded.
pub fn build_return_panel(
    series: &[PriceSeries],
    start: NaiveDate,
    end: NaiveDate,
    period: &Period,
    min_coverage: f64,
) -> Result<PanelBuild> {
    if !(0.0..=1.0).contains(&min_coverage) {
        return Err(Error::InvalidArgument(format!(
            "min_coverage must be in [0, 1], got {min_coverage}"
        )));
    }
    let boundaries = period_boundaries(series, start, end, period)?;
    if boundaries.len() < 3 {
        return Err(Error::EmptyPanel(format!(
            "{} boundaries give fewer than 2 periods",
            boundaries.len()
        )));
    }
    let nb = boundaries.len();
    let mut ids = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut excluded = Vec::new();
    for s in series {
        let sampled: Vec<Option<f64>> = boundaries.iter().map(|b| s.price_at_or_before(*b)).collect();
        let covered = (0..nb)
            .filter(|&k| match k {
                0 => sampled[0].is_some(),
                _ => s.has_observation_in(boundaries[k - 1], boundaries[k]),
            })
            .count();
        let coverage = covered as f64 / nb as f64;
        let complete = sampled.iter().all(Option::is_some);
        if !complete || coverage + 1e-12 < min_coverage {
            excluded.push(ExcludedAsset {
                asset_id: s.asset_id.clone(),
                coverage,
            });
            continue;
        }
        let prices: Vec<f64> = sampled.into_iter().map(|p| p.expect("complete")).collect();
        columns.push(prices.windows(2).map(|w| w[1] / w[0] - 1.0).collect());
        ids.push(s.asset_id.clone());
    }
    if ids.is_empty() {
        return Err(Error::EmptyPanel("no asset has sufficient coverage".into()));
    }
    let returns: Vec<Vec<f64>> = (0..nb - 1)
        .map(|t| columns.iter().map(|c| c[t]).collect())
        .collect();
    let panel = ReturnPanel::new(ids, boundaries[1..].to_vec(), returns)?.with_base_period(boundaries[0])?;
    Ok(PanelBuild {
        panel,
        excluded,
        boundaries,
    })
}

/// Third Friday of every month, restricted to `[start, end]`.
pub fn third_friday_breakpoints(start: NaiveDate, end: NaiveDate) -> Vec<NaiveDate> {
    let mut out = Vec::new();
    let (mut y, mut m) = (start.year(), start.month());
    loop {
        let Some(d) = NaiveDate::from_weekday_of_month_opt(y, m, Weekday::Fri, 3) else {
            break;
        };
        if d > end {
            break;
        }
        if d >= start {
            out.push(d);
        }
        if m == 12 {
            y += 1;
            m = 1;
        } else {
            m += 1;
        }
    }
    out
}

/// Writes a panel as long CSV `period,asset_id,return`. The base period, if
/// any, is written first with blank returns.
pub fn write_returns_csv<W: Write>(panel: &ReturnPanel, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["period", "asset_id", "return"]).map_err(io)?;
    if let Some(base) = panel.base_period() {
        for id in panel.asset_ids() {
            w.write_record([base.to_string().as_str(), id, ""]).map_err(io)?;
        }
    }
    for (date, row) in panel.periods().iter().zip(panel.returns()) {
        for (id, r) in panel.asset_ids().iter().zip(row) {
            // `{}` on f64 prints the shortest string that parses back exactly
            w.write_record([date.to_string(), id.clone(), format!("{r}")])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_returns_csv`].
pub fn read_returns_csv<R: Read>(reader: R) -> Result<ReturnPanel> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut assets: Vec<String> = Vec::new();
    let mut asset_index: HashMap<String, usize> = HashMap::new();
    let mut cells: BTreeMap<NaiveDate, HashMap<usize, f64>> = BTreeMap::new();
    let mut base: Option<NaiveDate> = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(e, 0))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 3 {
            return Err(Error::Parse {
                line,
                reason: "expected period,asset_id,return".into(),
            });
        }
        let date = parse_date(&rec[0], line)?;
        let k = *asset_index.entry(rec[1].to_string()).or_insert_with(|| {
            assets.push(rec[1].to_string());
            assets.len() - 1
        });
        if rec[2].is_empty() {
            match base {
                Some(b) if b != date => {
                    return Err(Error::Parse {
                        line,
                        reason: format!("conflicting base periods {b} and {date}"),
                    })
                }
                _ => base = Some(date),
            }
            continue;
        }
        let r: f64 = rec[2].parse().map_err(|e| Error::Parse {
            line,
            reason: format!("bad return {:?}: {e}", &rec[2]),
        })?;
        if cells.entry(date).or_default().insert(k, r).is_some() {
            return Err(Error::Parse {
                line,
                reason: format!("duplicate cell ({date}, {})", &rec[1]),
            });
        }
    }
    let mut periods = Vec::with_capacity(cells.len());
    let mut returns = Vec::with_capacity(cells.len());
    for (date, row) in cells {
        let values = (0..assets.len())
            .map(|k| {
                row.get(&k).copied().ok_or_else(|| Error::Parse {
                    line: 0,
                    reason: format!("missing return for {} on {date}", assets[k]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        periods.push(date);
        returns.push(values);
    }
    let panel = ReturnPanel::new(assets, periods, returns)?;
    match base {
        Some(b) => panel.with_base_period(b),
        None => Ok(panel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    fn series(id: &str, obs: &[(&str, f64)]) -> PriceSeries {
        PriceSeries {
            asset_id: id.into(),
            observations: obs.iter().map(|(s, p)| (d(s), *p)).collect(),
        }
    }

    #[test]
    fn long_csv_two_rows() {
        let csv = "asset_id,date,close\nA,2020-01-01,100\nA,2020-02-01,110\n";
        let loaded = parse_prices(csv.as_bytes(), PriceFormat::LongCsv).unwrap();
        assert_eq!(loaded.series.len(), 1);
        assert_eq!(
            loaded.series[0].observations,
            vec![(d("2020-01-01"), 100.0), (d("2020-02-01"), 110.0)]
        );
        assert_eq!(loaded.unsorted_series, 0);
    }

    #[test]
    fn long_csv_negative_price() {
        let csv = "asset_id,date,close\nA,2020-01-01,-5\n";
        assert!(matches!(
            parse_prices(csv.as_bytes(), PriceFormat::LongCsv),
            Err(Error::NonPositivePrice { .. })
        ));
    }

    #[test]
    fn long_csv_sorts_and_dedupes() {
        let csv = "asset_id,date,close\nA,2020-02-01,110\nA,2020-01-01,100\nA,2020-02-01,111\nB,2020-01-01,5\n";
        let loaded = parse_prices(csv.as_bytes(), PriceFormat::LongCsv).unwrap();
        assert_eq!(loaded.unsorted_series, 1);
        assert_eq!(loaded.duplicates_dropped, 1);
        assert_eq!(
            loaded.series[0].observations,
            vec![(d("2020-01-01"), 100.0), (d("2020-02-01"), 111.0)]
        );
        assert_eq!(loaded.series[1].asset_id, "B");
    }

    #[test]
    fn long_csv_parse_errors_carry_line() {
        let csv = "asset_id,date,close\nA,2020-01-01,100\nA,2020-13-01,100\n";
        match parse_prices(csv.as_bytes(), PriceFormat::LongCsv) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let csv = "ticker,date,close\nA,2020-01-01,100\n";
        assert!(matches!(
            parse_prices(csv.as_bytes(), PriceFormat::LongCsv),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn wide_csv_blank_cell() {
        let csv = "date,A,B\n2020-01-01,1,2\n2020-01-02,,3\n2020-01-03,1.5,4\n";
        let loaded = parse_prices(csv.as_bytes(), PriceFormat::WideCsv).unwrap();
        assert_eq!(loaded.series[0].observations.len(), 2);
        assert_eq!(loaded.series[1].observations.len(), 3);
        assert!(!loaded.series[0]
            .observations
            .iter()
            .any(|(day, _)| *day == d("2020-01-02")));
    }

    #[test]
    fn one_asset_three_boundaries() {
        let s = [series(
            "A",
            &[("2020-01-31", 100.0), ("2020-02-29", 110.0), ("2020-03-31", 99.0)],
        )];
        let b = build_return_panel(&s, d("2020-01-31"), d("2020-03-31"), &Period::EveryKRows(1), 1.0)
            .unwrap();
        assert_eq!(b.panel.n_periods(), 2);
        assert_abs_diff_eq!(b.panel.returns()[0][0], 0.10, epsilon = 1e-15);
        assert_abs_diff_eq!(b.panel.returns()[1][0], -0.10, epsilon = 1e-15);
        assert_eq!(b.panel.base_period(), Some(d("2020-01-31")));
    }

    #[test]
    fn late_listing_excluded() {
        let s = [
            series(
                "A",
                &[("2020-01-31", 100.0), ("2020-02-28", 110.0), ("2020-03-31", 99.0)],
            ),
            series("EL", &[("2020-02-28", 50.0), ("2020-03-31", 55.0)]),
        ];
        let b = build_return_panel(&s, d("2020-01-31"), d("2020-03-31"), &Period::MonthlyCalendar, 1.0)
            .unwrap();
        assert_eq!(b.panel.asset_ids(), &["A".to_string()]);
        assert_eq!(b.excluded.len(), 1);
        assert_eq!(b.excluded[0].asset_id, "EL");
        assert_abs_diff_eq!(b.excluded[0].coverage, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn explicit_breakpoints_equal_every_row() {
        let s = [
            series(
                "A",
                &[("2020-01-02", 10.0), ("2020-01-03", 11.0), ("2020-01-06", 12.0), ("2020-01-07", 11.5)],
            ),
            series(
                "B",
                &[("2020-01-02", 5.0), ("2020-01-03", 5.5), ("2020-01-06", 5.2), ("2020-01-07", 5.3)],
            ),
        ];
        let (start, end) = (d("2020-01-01"), d("2020-01-31"));
        let rows = build_return_panel(&s, start, end, &Period::EveryKRows(1), 1.0).unwrap();
        let dates: Vec<NaiveDate> = s[0].observations.iter().map(|o| o.0).collect();
        let explicit =
            build_return_panel(&s, start, end, &Period::ExplicitBreakpoints(dates), 1.0).unwrap();
        assert_eq!(rows.panel, explicit.panel);
    }

    #[test]
    fn every_k_rows_strides() {
        let obs: Vec<(String, f64)> = (1..=9)
            .map(|k| (format!("2020-01-{k:02}"), 100.0 + k as f64))
            .collect();
        let obs_ref: Vec<(&str, f64)> = obs.iter().map(|(s, p)| (s.as_str(), *p)).collect();
        let s = [series("A", &obs_ref)];
        let b = build_return_panel(&s, d("2020-01-01"), d("2020-01-09"), &Period::EveryKRows(4), 1.0)
            .unwrap();
        assert_eq!(b.boundaries, vec![d("2020-01-01"), d("2020-01-05"), d("2020-01-09")]);
        assert_abs_diff_eq!(b.panel.returns()[0][0], 105.0 / 101.0 - 1.0, epsilon = 1e-15);
    }

    #[test]
    fn monthly_boundaries() {
        let b = period_boundaries(&[], d("2020-01-15"), d("2020-04-10"), &Period::MonthlyCalendar).unwrap();
        assert_eq!(
            b,
            vec![d("2020-01-15"), d("2020-01-31"), d("2020-02-29"), d("2020-03-31"), d("2020-04-10")]
        );
        let b = period_boundaries(&[], d("2020-01-31"), d("2020-03-31"), &Period::MonthlyCalendar).unwrap();
        assert_eq!(b, vec![d("2020-01-31"), d("2020-02-29"), d("2020-03-31")]);
    }

    #[test]
    fn empty_panel_errors() {
        let s = [series("A", &[("2020-03-01", 1.0)])];
        assert!(matches!(
            build_return_panel(&s, d("2020-01-31"), d("2020-03-31"), &Period::MonthlyCalendar, 1.0),
            Err(Error::EmptyPanel(_))
        ));
        assert!(matches!(
            build_return_panel(&s, d("2020-01-01"), d("2020-03-31"), &Period::EveryKRows(1), 1.0),
            Err(Error::EmptyPanel(_))
        ));
        assert!(period_boundaries(&s, d("2020-03-01"), d("2020-01-01"), &Period::MonthlyCalendar).is_err());
        assert!(period_boundaries(
            &s,
            d("2020-01-01"),
            d("2020-03-01"),
            &Period::ExplicitBreakpoints(vec![d("2020-02-01"), d("2020-01-15")])
        )
        .is_err());
    }

    #[test]
    fn third_fridays() {
        let f = third_friday_breakpoints(d("2020-06-01"), d("2020-08-31"));
        assert_eq!(f, vec![d("2020-06-19"), d("2020-07-17"), d("2020-08-21")]);
        let f = third_friday_breakpoints(d("2020-12-19"), d("2021-01-15"));
        assert_eq!(f, vec![d("2021-01-15")]);
    }

    #[test]
    fn returns_csv_keeps_base_period() {
        let panel = ReturnPanel::new(
            vec!["A".into(), "B".into()],
            vec![d("2020-02-28"), d("2020-03-31")],
            vec![vec![0.1, 1.0 / 3.0], vec![-0.2, 2e-17]],
        )
        .unwrap()
        .with_base_period(d("2020-01-31"))
        .unwrap();
        let mut buf = Vec::new();
        write_returns_csv(&panel, &mut buf).unwrap();
        let back = read_returns_csv(buf.as_slice()).unwrap();
        assert_eq!(back, panel);
    }

    #[test]
    fn returns_csv_missing_cell() {
        let csv = "period,asset_id,return\n2020-01-31,A,0.1\n2020-01-31,B,0.2\n2020-02-28,A,0.3\n";
        assert!(matches!(read_returns_csv(csv.as_bytes()), Err(Error::Parse { .. })));
    }
}
