use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use simplexproj::PriceFormat;
use simplexproj_cli::{
    cmd_backtest, cmd_minvar, cmd_project, exit_code, BenchmarkKind, PeriodSpec, WeightsSource,
    WindowArgs,
};

#[derive(Parser)]
#[command(name = "simplexproj", version, about = "Simplex projection and minimum-variance portfolios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a point onto the simplex in the metric of a covariance matrix.
    Project {
        /// Covariance matrix CSV, no header.
        #[arg(long)]
        cov: PathBuf,
        /// Point to project, one row or one column, no header.
        #[arg(long)]
        point: PathBuf,
        /// Also run the exhaustive face enumeration and report the deviation.
        #[arg(long)]
        oracle: bool,
        /// Single-threaded search.
        #[arg(long)]
        deterministic: bool,
    },
    /// Minimum-variance weights estimated from a price file.
    Minvar {
        #[command(flatten)]
        window: Window,
        #[command(flatten)]
        opts: MinvarOpts,
    },
    /// Hold fixed weights over the sample and report compounded returns.
    Backtest {
        #[command(flatten)]
        window: Window,
        #[command(flatten)]
        opts: MinvarOpts,
        /// Weights CSV (asset_id,weight) or `minvar` to estimate them.
        #[arg(long, default_value = "minvar")]
        weights: String,
        /// Benchmark CSV.
        #[arg(long)]
        benchmark: Option<PathBuf>,
        /// `returns` for period,return rows; `prices` for date,close levels.
        #[arg(long, value_enum, default_value_t = BenchKind::Returns)]
        benchmark_kind: BenchKind,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Long,
    Wide,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchKind {
    Returns,
    Prices,
}

#[derive(Args)]
struct Window {
    #[arg(long)]
    prices: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Long)]
    format: Format,
    #[arg(long)]
    start: NaiveDate,
    #[arg(long)]
    end: NaiveDate,
    /// monthly, rows:K, breakpoints or third-friday.
    #[arg(long, default_value = "monthly")]
    period: PeriodSpec,
    /// Breakpoint dates for `--period breakpoints`.
    #[arg(long)]
    breakpoints: Option<PathBuf>,
    /// Minimum share of periods with a fresh price.
    #[arg(long, default_value_t = 0.0)]
    min_coverage: f64,
}

#[derive(Args)]
struct MinvarOpts {
    #[arg(long)]
    no_short_selling: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    ddof: u8,
    #[arg(long)]
    deterministic: bool,
}

impl Window {
    fn into_args(self) -> WindowArgs {
        let period = match (self.period, self.breakpoints) {
            (PeriodSpec::Breakpoints(_), Some(p)) => PeriodSpec::Breakpoints(p),
            (p, _) => p,
        };
        WindowArgs {
            prices: self.prices,
            format: match self.format {
                Format::Long => PriceFormat::LongCsv,
                Format::Wide => PriceFormat::WideCsv,
            },
            start: self.start,
            end: self.end,
            period,
            min_coverage: self.min_coverage,
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Project {
            cov,
            point,
            oracle,
            deterministic,
        } => print_json(&cmd_project(&cov, &point, oracle, deterministic)?),
        Command::Minvar { window, opts } => print_json(&cmd_minvar(
            &window.into_args(),
            opts.no_short_selling,
            opts.ddof.into(),
            opts.deterministic,
        )?),
        Command::Backtest {
            window,
            opts,
            weights,
            benchmark,
            benchmark_kind,
            out_dir,
        } => {
            let source = if weights == "minvar" {
                WeightsSource::Minvar
            } else {
                WeightsSource::File(weights.into())
            };
            let kind = match benchmark_kind {
                BenchKind::Returns => BenchmarkKind::Returns,
                BenchKind::Prices => BenchmarkKind::Prices,
            };
            let out = cmd_backtest(
                &window.into_args(),
                &source,
                opts.no_short_selling,
                opts.ddof.into(),
                benchmark.as_deref().map(|p| (p, kind)),
                &out_dir,
                opts.deterministic,
            )?;
            println!("{}", out.summary_line);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
