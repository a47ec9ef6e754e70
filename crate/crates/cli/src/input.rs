//! Readers for the small CSV inputs the commands take.

use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use chrono::NaiveDate;
use simplexproj::ingestion::parse_prices;
use simplexproj::{Error, PriceFormat, WeightVector};

fn reader(path: &Path, has_headers: bool) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(has_headers)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file))
}

fn number(cell: &str, line: u64, path: &Path) -> Result<f64> {
    let v: f64 = cell.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("{}: not a number: {cell:?}", path.display()),
    })?;
    if !v.is_finite() {
        bail!(Error::Parse {
            line,
            reason: format!("{}: non-finite value", path.display()),
        });
    }
    Ok(v)
}

fn date(cell: &str, line: u64, path: &Path) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(cell, "%Y-%m-%d").map_err(|_| {
        anyhow!(Error::Parse {
            line,
            reason: format!("{}: bad date {cell:?}", path.display()),
        })
    })
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

/// Square matrix, one row per line, no header.
pub fn read_matrix_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for rec in reader(path, false)?.records() {
        let rec = rec.with_context(|| format!("reading {}", path.display()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let line = line_of(&rec);
        rows.push(rec.iter().map(|c| number(c, line, path)).collect::<Result<Vec<_>>>()?);
    }
    if rows.is_empty() {
        bail!(Error::InvalidArgument(format!("{}: empty matrix", path.display())));
    }
    Ok(rows)
}

/// Vector given as a single row or a single column, no header.
pub fn read_vector_csv(path: &Path) -> Result<Vec<f64>> {
    let v: Vec<f64> = read_matrix_csv(path)?.into_iter().flatten().collect();
    Ok(v)
}

/// One date per line; a leading `date` header is allowed.
pub fn read_dates(path: &Path) -> Result<Vec<NaiveDate>> {
    let mut out = Vec::new();
    for rec in reader(path, false)?.records() {
        let rec = rec?;
        let cell = rec.get(0).unwrap_or("");
        if cell.is_empty() || (out.is_empty() && cell.eq_ignore_ascii_case("date")) {
            continue;
        }
        out.push(date(cell, line_of(&rec), path)?);
    }
    Ok(out)
}

/// `asset_id,weight` rows, reordered to `assets`. Every asset of the panel
/// must be listed and the weights must sum to one.
pub fn read_weights(path: &Path, assets: &[String]) -> Result<WeightVector> {
    let mut by_id = HashMap::new();
    for rec in reader(path, true)?.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let (Some(id), Some(w)) = (rec.get(0), rec.get(1)) else {
            bail!(Error::Parse {
                line,
                reason: "expected asset_id,weight".into()
            });
        };
        if by_id.insert(id.to_string(), number(w, line, path)?).is_some() {
            bail!(Error::InvalidWeights(format!("asset {id} listed twice")));
        }
    }
    let mut w = Vec::with_capacity(assets.len());
    for id in assets {
        w.push(
            by_id
                .remove(id)
                .ok_or_else(|| Error::InvalidWeights(format!("no weight for asset {id}")))?,
        );
    }
    if let Some(extra) = by_id.keys().min() {
        bail!(Error::InvalidWeights(format!(
            "weight given for {extra}, which is not in the panel"
        )));
    }
    Ok(WeightVector::new(w)?)
}

/// `period,return` rows whose dates must equal the panel periods.
pub fn read_benchmark_returns(path: &Path, periods: &[NaiveDate]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for rec in reader(path, true)?.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let (Some(d), Some(r)) = (rec.get(0), rec.get(1)) else {
            bail!(Error::Parse {
                line,
                reason: "expected period,return".into()
            });
        };
        out.push((date(d, line, path)?, number(r, line, path)?));
    }
    if out.len() != periods.len() {
        bail!(Error::MisalignedBenchmark(format!(
            "{} benchmark periods, {} panel periods",
            out.len(),
            periods.len()
        )));
    }
    if let Some(((d, _), p)) = out.iter().zip(periods).find(|((d, _), p)| d != *p) {
        bail!(Error::MisalignedBenchmark(format!(
            "benchmark period {d} where the panel has {p}"
        )));
    }
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

/// `date,close` index levels sampled at the period boundaries.
pub fn benchmark_from_prices(path: &Path, boundaries: &[NaiveDate]) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let loaded = parse_prices(file, PriceFormat::WideCsv)?;
    let [series] = loaded.series.as_slice() else {
        bail!(Error::InvalidArgument(format!(
            "{}: expected exactly one price column",
            path.display()
        )));
    };
    let levels = boundaries
        .iter()
        .map(|&b| {
            series.price_at_or_before(b).ok_or_else(|| {
                Error::MisalignedBenchmark(format!("no benchmark level on or before {b}"))
            })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(levels.windows(2).map(|w| w[1] / w[0] - 1.0).collect())
}
